// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ellsplit/expr.hpp"
#include "ellsplit/split.hpp"

namespace ellsplit {

/// A named Delta block: either a direct polynomial f or a reference to a
/// section combination whose x-coordinate supplies f.
struct DeltaSpec {
    std::string name;
    std::optional<PolyQ> f;
    std::string from;  // section-combination expression when f is absent
};

/// Parsed instance file: one surface block, named section blocks, optional
/// delta blocks and options.
struct InstanceFile {
    int g = 1;
    int d = 2;
    PolyQ a2, a4, a6;
    std::vector<std::pair<std::string, Section>> sections;
    std::vector<DeltaSpec> deltas;
    int tower_cap = 3;
    bool torsion_checks = true;

    WeierstrassSurface surface() const { return WeierstrassSurface(a2, a4, a6, d); }

    const Section* find_section(const std::string& name) const {
        for (const auto& [n, s] : sections)
            if (n == name) return &s;
        return nullptr;
    }
};

/// Evaluate a section-combination expression like "2*s0", "s1+s2", "-s0"
/// over the group law.
inline Section evaluate_section_expression(const WeierstrassSurface& S, const InstanceFile& inst,
                                           const std::string& expr) {
    struct Parser {
        const WeierstrassSurface& S;
        const InstanceFile& inst;
        const std::string& s;
        size_t i = 0;

        void skip() {
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        }
        [[noreturn]] void fail(const std::string& expected) {
            std::string found = i < s.size() ? std::string("'") + s[i] + "'" : "end of input";
            throw parse_error(i, expected, found);
        }
        Section parse() {
            Section r = sum();
            skip();
            if (i != s.size()) fail("an operator or end of input");
            return r;
        }
        Section sum() {
            Section r = term();
            while (true) {
                skip();
                if (i < s.size() && s[i] == '+') { ++i; r = add(S, r, term()); }
                else if (i < s.size() && s[i] == '-') { ++i; r = add(S, r, neg(term())); }
                else return r;
            }
        }
        Section term() {
            skip();
            if (i < s.size() && s[i] == '-') { ++i; return neg(term()); }
            return factor();
        }
        Section factor() {
            skip();
            if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                size_t j = i;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                long n = std::stol(s.substr(i, j - i));
                i = j;
                skip();
                if (i >= s.size() || s[i] != '*') fail("'*' after the integer multiplier");
                ++i;
                Section base = factor();
                return mul(S, n, base);
            }
            if (i < s.size() && s[i] == '(') {
                ++i;
                Section r = sum();
                skip();
                if (i >= s.size() || s[i] != ')') fail("')'");
                ++i;
                return r;
            }
            if (i < s.size() && (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
                size_t j = i;
                while (j < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                    ++j;
                std::string name = s.substr(i, j - i);
                i = j;
                const Section* p = inst.find_section(name);
                if (!p) throw user_error("unknown section '" + name + "'");
                return *p;
            }
            fail("a section name, integer multiple, or '('");
        }
    };
    Parser p{S, inst, expr};
    return p.parse();
}

/// Resolve a delta block to its polynomial f.
inline PolyQ delta_polynomial(const WeierstrassSurface& S, const InstanceFile& inst,
                              const DeltaSpec& dsp) {
    if (dsp.f) return *dsp.f;
    Section sec = evaluate_section_expression(S, inst, dsp.from);
    if (sec.is_zero()) throw user_error("delta '" + dsp.name + "' refers to the zero section");
    if (!sec.x.is_polynomial() || (!sec.x.is_zero() && sec.x.num().deg() > S.d))
        throw user_error("delta '" + dsp.name + "': the section meets the zero section");
    return sec.x.is_zero() ? PolyQ() : sec.x.num();
}

namespace idetail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace idetail

/// Parse the line-oriented block format. Errors carry 1-based line numbers.
inline InstanceFile parse_instance(const std::string& text) {
    InstanceFile out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_surface = false;
    enum class Block { None, Surface, Section, Delta, Options } block = Block::None;
    std::string block_name;
    std::optional<RF> cur_x, cur_y;
    DeltaSpec cur_delta;
    std::optional<PolyQ> sa2, sa4, sa6;

    auto fail = [&](const std::string& msg) {
        throw user_error("line " + std::to_string(lineno) + ": " + msg);
    };
    auto close_block = [&]() {
        switch (block) {
            case Block::Surface:
                if (!sa2 || !sa4 || !sa6) fail("surface block needs a2, a4 and a6");
                out.a2 = *sa2; out.a4 = *sa4; out.a6 = *sa6;
                saw_surface = true;
                break;
            case Block::Section: {
                if (!cur_x || !cur_y) fail("section block needs x and y");
                if (out.find_section(block_name)) fail("duplicate section '" + block_name + "'");
                out.sections.emplace_back(block_name, Section(*cur_x, *cur_y));
                break;
            }
            case Block::Delta:
                if (!cur_delta.f && cur_delta.from.empty())
                    fail("delta block needs f or from");
                cur_delta.name = block_name;
                out.deltas.push_back(cur_delta);
                break;
            default:
                break;
        }
        block = Block::None;
        cur_x.reset();
        cur_y.reset();
        cur_delta = DeltaSpec{};
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = idetail::trim(line);
        if (t.empty()) continue;
        if (t == "}") {
            if (block == Block::None) fail("unmatched '}'");
            close_block();
            continue;
        }
        if (t.back() == '{') {
            if (block != Block::None) fail("nested blocks are not allowed");
            std::string head = idetail::trim(t.substr(0, t.size() - 1));
            std::istringstream hs(head);
            std::string kind, name;
            hs >> kind >> name;
            if (kind == "surface") block = Block::Surface;
            else if (kind == "section") {
                if (name.empty()) fail("section block needs a name");
                block = Block::Section;
            } else if (kind == "delta") {
                if (name.empty()) fail("delta block needs a name");
                block = Block::Delta;
            } else if (kind == "options") block = Block::Options;
            else fail("unknown block kind '" + kind + "'");
            block_name = name;
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        std::string key = idetail::trim(t.substr(0, eq));
        std::string val = idetail::trim(t.substr(eq + 1));
        if (val.empty()) fail("empty value for '" + key + "'");
        try {
            switch (block) {
                case Block::Surface:
                    if (key == "g") out.g = std::stoi(val);
                    else if (key == "d") out.d = std::stoi(val);
                    else if (key == "a2") sa2 = parse_polynomial(val);
                    else if (key == "a4") sa4 = parse_polynomial(val);
                    else if (key == "a6") sa6 = parse_polynomial(val);
                    else fail("unknown surface key '" + key + "'");
                    break;
                case Block::Section:
                    if (key == "x") cur_x = parse_expression(val);
                    else if (key == "y") cur_y = parse_expression(val);
                    else fail("unknown section key '" + key + "'");
                    break;
                case Block::Delta:
                    if (key == "f") cur_delta.f = parse_polynomial(val);
                    else if (key == "from") cur_delta.from = val;
                    else fail("unknown delta key '" + key + "'");
                    break;
                case Block::Options:
                    if (key == "tower_cap") out.tower_cap = std::stoi(val);
                    else if (key == "torsion_checks") out.torsion_checks = (val == "true" || val == "1");
                    else fail("unknown option '" + key + "'");
                    break;
                default:
                    fail("'" + key + "' outside of any block");
            }
        } catch (const parse_error& e) {
            fail(std::string("in '") + key + "': " + e.what());
        }
    }
    if (block != Block::None) fail("unterminated block");
    if (!saw_surface) throw user_error("no surface block found");
    // semantic validation
    WeierstrassSurface S = out.surface();
    for (const auto& [name, sec] : out.sections)
        if (!on_curve(S, sec)) throw user_error("section '" + name + "' is not on the surface");
    return out;
}

inline InstanceFile load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw user_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

/// Canonical serialization; output re-parses to the same content.
inline std::string serialize_instance(const InstanceFile& inst) {
    std::ostringstream out;
    out << "surface {\n";
    out << "  g = " << inst.g << "\n";
    out << "  d = " << inst.d << "\n";
    out << "  a2 = " << to_string(inst.a2) << "\n";
    out << "  a4 = " << to_string(inst.a4) << "\n";
    out << "  a6 = " << to_string(inst.a6) << "\n";
    out << "}\n";
    for (const auto& [name, sec] : inst.sections) {
        out << "\nsection " << name << " {\n";
        out << "  x = " << to_string(sec.x) << "\n";
        out << "  y = " << to_string(sec.y) << "\n";
        out << "}\n";
    }
    for (const auto& d : inst.deltas) {
        out << "\ndelta " << d.name << " {\n";
        if (d.f) out << "  f = " << to_string(*d.f) << "\n";
        else out << "  from = " << d.from << "\n";
        out << "}\n";
    }
    out << "\noptions {\n";
    out << "  tower_cap = " << inst.tower_cap << "\n";
    out << "  torsion_checks = " << (inst.torsion_checks ? "true" : "false") << "\n";
    out << "}\n";
    return out.str();
}

}  // namespace ellsplit
