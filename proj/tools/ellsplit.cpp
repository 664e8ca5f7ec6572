// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: analyze | arith | divisible | split | zariski |
// basechange over the line-oriented instance file format. Exit codes:
// 0 success, 1 user error (parse or validation), 2 internal invariant breach.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ellsplit/report.hpp"

using namespace ellsplit;

int main(int argc, char** argv) {
    CLI::App app{"exact analysis of elliptic surfaces over Q(t): sections, fibers, heights, "
                 "2-divisibility, splitting decompositions"};
    app.require_subcommand(1);
    app.fallthrough();

    int tower_cap = 3;
    std::string format = "text";
    bool verify = false;
    app.add_option("--tower-cap", tower_cap, "height cap for constant-field towers")
        ->capture_default_str();
    app.add_option("--format", format, "output format: text | structured")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();
    app.add_flag("--verify", verify, "re-run all certificate re-expansions");

    std::string file1, file2, expr, delta, nu, outpath;

    auto* analyze = app.add_subcommand("analyze", "fibers, chi, torsion and section data");
    analyze->add_option("file", file1, "instance file")->required();

    auto* arith = app.add_subcommand("arith", "evaluate a section combination");
    arith->add_option("file", file1, "instance file")->required();
    arith->add_option("expr", expr, "combination such as '2*s0' or 's1+s2'")->required();

    auto* divisible = app.add_subcommand("divisible", "decide 2-divisibility of a section");
    divisible->add_option("file", file1, "instance file")->required();
    divisible->add_option("expr", expr, "section combination")->required();

    auto* split = app.add_subcommand("split", "decide the splitting decomposition for a delta");
    split->add_option("file", file1, "instance file")->required();
    split->add_option("delta", delta, "name of the delta block")->required();

    auto* zariski = app.add_subcommand("zariski", "compare two instances sharing a branch curve");
    zariski->add_option("file1", file1, "first instance")->required();
    zariski->add_option("file2", file2, "second instance")->required();

    auto* basechange = app.add_subcommand("basechange", "pull back along t = nu(s)");
    basechange->add_option("file", file1, "instance file")->required();
    basechange->add_option("nu", nu, "base-change map, e.g. 't^2'")->required();
    basechange->add_option("out", outpath, "path for the new instance file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const bool structured = format == "structured";
        if (*analyze) {
            InstanceFile inst = load_instance(file1);
            inst.tower_cap = tower_cap;
            std::cout << report_analyze(inst).str(structured);
        } else if (*arith) {
            InstanceFile inst = load_instance(file1);
            std::cout << report_arith(inst, expr).str(structured);
        } else if (*divisible) {
            InstanceFile inst = load_instance(file1);
            inst.tower_cap = tower_cap;
            std::cout << report_divisible(inst, expr, verify).str(structured);
        } else if (*split) {
            InstanceFile inst = load_instance(file1);
            inst.tower_cap = tower_cap;
            std::cout << report_split(inst, delta, verify).str(structured);
        } else if (*zariski) {
            InstanceFile i1 = load_instance(file1);
            InstanceFile i2 = load_instance(file2);
            i1.tower_cap = i2.tower_cap = tower_cap;
            std::cout << report_zariski(i1, i2).str(structured);
        } else if (*basechange) {
            InstanceFile inst = load_instance(file1);
            InstanceFile out;
            Report rep = report_basechange(inst, nu, &out);
            std::ofstream os(outpath);
            if (!os) throw user_error("cannot write '" + outpath + "'");
            os << serialize_instance(out);
            std::cout << rep.str(structured);
        }
        return 0;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const tower_overflow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const user_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
