// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <sstream>
#include <string>

#include "ellsplit/instance.hpp"

namespace ellsplit {

using json = nlohmann::json;

inline std::string to_string(const TowerElem& e) { return e.str(); }

inline std::string to_string(const TPoly& p, const std::string& var = "t") {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (int i = p.deg(); i >= 0; --i) {
        TowerElem c = p[static_cast<size_t>(i)];
        if (c.is_zero()) continue;
        bool negative = compare(c, TowerElem(Rat(0))) < 0 && c.is_rational();
        if (negative) c = -c;
        std::string cs = c.str();
        bool composite = cs.find_first_of("+-") != std::string::npos && cs.size() > 1;
        if (first) {
            if (negative) out += "-";
            first = false;
        } else {
            out += negative ? " - " : " + ";
        }
        if (i == 0) { out += composite ? "(" + cs + ")" : cs; continue; }
        if (!(cs == "1")) out += (composite ? "(" + cs + ")" : cs) + "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
}

inline std::string to_string(const TRF& f, const std::string& var = "t") {
    if (f.is_polynomial()) return to_string(f.num(), var);
    return "(" + to_string(f.num(), var) + ")/(" + to_string(f.den(), var) + ")";
}

inline std::string section_str(const Section& P) {
    if (P.is_zero()) return "O";
    return "(" + to_string(P.x) + ", " + to_string(P.y) + ")";
}

inline std::string section_str(const TowerSection& P) {
    if (P.is_zero()) return "O";
    std::string s = "(" + to_string(P.x) + ", " + to_string(P.y) + ")";
    if (P.tower.height() > 0) s += " over " + P.tower.str();
    return s;
}

/// Text/structured dual writer: every report assembles both forms.
struct Report {
    std::ostringstream text;
    json data = json::object();

    std::string str(bool structured) const { return structured ? data.dump(2) + "\n" : text.str(); }
};

inline json json_rat(const Rat& r) { return r.str(); }

inline json json_fiber(const FiberData& f) {
    json j;
    j["place"] = f.place.str();
    j["degree"] = f.place.degree();
    j["type"] = f.type.str();
    j["v_delta"] = f.v_delta;
    j["components"] = f.components;
    return j;
}

inline void report_fibers(Report& rep, const MWContext& ctx) {
    rep.text << "fibers:\n";
    json fibers = json::array();
    for (const auto& f : ctx.config.fibers) {
        rep.text << "  " << f.type.str() << " at " << f.place.str() << "  (v(disc) = " << f.v_delta
                 << ", components = " << f.components << ", degree = " << f.place.degree()
                 << ")\n";
        fibers.push_back(json_fiber(f));
    }
    rep.text << "euler sum = " << ctx.config.euler_total << ", chi = " << ctx.config.chi << "\n";
    rep.text << "torsion-free (within tower cap): " << (ctx.torsion_free ? "yes" : "no") << "\n";
    rep.data["fibers"] = fibers;
    rep.data["euler_sum"] = ctx.config.euler_total;
    rep.data["chi"] = ctx.config.chi;
    rep.data["torsion_free"] = ctx.torsion_free;
}

inline Report report_analyze(const InstanceFile& inst) {
    Report rep;
    WeierstrassSurface S = inst.surface();
    MWContext ctx(S, inst.tower_cap, inst.torsion_checks);
    report_fibers(rep, ctx);
    json sections = json::array();
    for (const auto& [name, sec] : inst.sections) {
        rep.text << "\nsection " << name << " = " << section_str(sec) << "\n";
        json js;
        js["name"] = name;
        js["x"] = to_string(sec.x);
        js["y"] = to_string(sec.y);
        bool oc = on_curve(S, sec);
        rep.text << "  on curve: " << (oc ? "yes" : "no") << "\n";
        js["on_curve"] = oc;
        int mo = meets_zero_section(ctx, sec);
        rep.text << "  (P.O) = " << mo << "\n";
        js["meets_zero"] = mo;
        json incid = json::array();
        for (const auto& f : ctx.config.fibers) {
            if (f.components <= 1) continue;
            auto inc = incidence(S, ctx.config, sec, f.place);
            rep.text << "  component at " << f.place.str() << ": " << inc.component << "\n";
            incid.push_back({{"place", f.place.str()}, {"component", inc.component}});
        }
        js["incidence"] = incid;
        Rat h = self_height(ctx, sec);
        rep.text << "  height <P,P> = " << h.str() << "\n";
        js["self_height"] = json_rat(h);
        sections.push_back(js);
    }
    rep.data["sections"] = sections;
    return rep;
}

inline Report report_arith(const InstanceFile& inst, const std::string& expr) {
    Report rep;
    WeierstrassSurface S = inst.surface();
    Section r = evaluate_section_expression(S, inst, expr);
    rep.text << expr << " = " << section_str(r) << "\n";
    rep.data["expression"] = expr;
    if (r.is_zero()) {
        rep.data["zero"] = true;
    } else {
        rep.data["zero"] = false;
        rep.data["x"] = to_string(r.x);
        rep.data["y"] = to_string(r.y);
        rep.text << "on curve: " << (on_curve(S, r) ? "yes" : "no") << "\n";
        rep.data["on_curve"] = on_curve(S, r);
    }
    return rep;
}

inline json json_halving(const HalvingCertificate& cert) {
    json j;
    j["verdict"] = to_string(cert.verdict);
    json halves = json::array();
    for (const auto& h : cert.halves) halves.push_back(section_str(h));
    j["halves"] = halves;
    j["evidence"] = cert.evidence;
    return j;
}

inline Report report_divisible(const InstanceFile& inst, const std::string& expr, bool verify) {
    Report rep;
    WeierstrassSurface S = inst.surface();
    MWContext ctx(S, inst.tower_cap, false);
    Section target = evaluate_section_expression(S, inst, expr);
    rep.data["expression"] = expr;
    if (target.is_zero()) {
        rep.text << "O is 2-divisible\n";
        rep.data["verdict"] = to_string(Divisibility::Divisible);
        return rep;
    }
    auto cert = halve(ctx, target);
    rep.text << "target " << expr << " = " << section_str(target) << "\n";
    rep.text << "verdict: " << to_string(cert.verdict) << "\n";
    // the halving polynomial, for the record
    std::ostringstream hp;
    hp << "x^4";
    for (int k = 3; k >= 0; --k) {
        const RF& c = cert.halving_poly[static_cast<size_t>(k)];
        if (c.is_zero()) continue;
        hp << " + (" << to_string(c) << ")";
        if (k > 0) hp << "*x" << (k > 1 ? "^" + std::to_string(k) : "");
    }
    rep.text << "halving polynomial: " << hp.str() << "\n";
    rep.data["halving_polynomial"] = hp.str();
    for (const auto& h : cert.halves) rep.text << "half: " << section_str(h) << "\n";
    for (const auto& e : cert.evidence) rep.text << "note: " << e << "\n";
    rep.data.update(json_halving(cert));
    if (verify) {
        bool ok = true;
        for (const auto& h : cert.halves) {
            TowerSection d = dbl(S, h);
            TowerSection plus = lift_section(target, h.tower);
            if (!(d == plus || d == neg(plus))) ok = false;
        }
        rep.text << "verification of halves: " << (ok ? "pass" : "FAIL") << "\n";
        rep.data["verified"] = ok;
        if (!ok) throw internal_error("halving certificate failed re-verification");
    }
    return rep;
}

inline Report report_split(const InstanceFile& inst, const std::string& delta_name, bool verify) {
    Report rep;
    WeierstrassSurface S = inst.surface();
    const DeltaSpec* dsp = nullptr;
    for (const auto& d : inst.deltas)
        if (d.name == delta_name) dsp = &d;
    if (!dsp) throw user_error("unknown delta '" + delta_name + "'");
    PolyQ f = delta_polynomial(S, inst, *dsp);
    SplitInstance si(BranchCurve::from_surface(S), f);
    rep.data["delta"] = delta_name;
    rep.data["f"] = to_string(f);
    rep.text << "delta " << delta_name << ": x = " << to_string(f) << "\n";
    auto branch = validate_branch(si.branch);
    rep.text << "branch: " << (branch.valid ? "valid" : "INVALID") << "\n";
    for (auto& i : branch.issues) rep.text << "  issue: " << i << "\n";
    for (auto& n : branch.notes) rep.text << "  " << n << "\n";
    rep.data["branch_valid"] = branch.valid;
    if (branch.irreducible.has_value()) rep.data["branch_irreducible"] = *branch.irreducible;
    auto tan = validate_tangency(si);
    rep.text << "tangency: " << (tan.pass ? "pass" : "FAIL") << "\n";
    json contacts = json::array();
    for (auto& [pi, m] : tan.contacts) {
        rep.text << "  contact at " << to_string(pi) << " with multiplicity " << m << "\n";
        contacts.push_back({{"place", to_string(pi)}, {"multiplicity", m}});
    }
    rep.text << "  geometric contact points: " << tan.geometric_points << "\n";
    for (auto& i : tan.issues) rep.text << "  issue: " << i << "\n";
    rep.data["tangency_pass"] = tan.pass;
    rep.data["contacts"] = contacts;
    rep.data["geometric_contact_points"] = tan.geometric_points;
    if (!branch.valid || !tan.pass) {
        rep.text << "validation failed; decomposition not attempted\n";
        rep.data["outcome"] = "ValidationFailed";
        return rep;
    }
    auto v = decompose(si, inst.tower_cap);
    rep.text << "outcome: " << to_string(v.outcome) << "\n";
    rep.data["outcome"] = to_string(v.outcome);
    for (auto& e : v.evidence) rep.text << "note: " << e << "\n";
    rep.data["evidence"] = v.evidence;
    if (v.dec) {
        const auto& dec = *v.dec;
        rep.text << "sigma = " << dec.sigma << "\n";
        rep.data["sigma"] = dec.sigma;
        if (dec.tower.height() > 0) {
            rep.text << "tower: " << dec.tower.str() << "\n";
            rep.data["tower"] = dec.tower.str();
        }
        auto print_x = [&](const char* label, const std::vector<TRF>& cs) {
            std::string s;
            for (size_t k = cs.size(); k-- > 0;) {
                if (cs[k].is_zero()) continue;
                if (!s.empty()) s += " + ";
                std::string c = to_string(cs[k]);
                if (c == "1" && k > 0) c.clear();
                else c = "(" + c + ")" + (k > 0 ? "*" : "");
                s += c;
                if (k == 1) s += "x";
                if (k > 1) s += "x^" + std::to_string(k);
            }
            if (s.empty()) s = "0";
            rep.text << label << " = " << s << "\n";
            return s;
        };
        rep.data["F"] = print_x("F(x)", dec.F_in_x());
        rep.data["G"] = print_x("G(x)", dec.G_in_x());
        if (verify) {
            bool ok1 = verify_decomposition(si, dec);
            bool ok2 = pullback_factor_check(si, dec);
            rep.text << "re-expansion check: " << (ok1 ? "pass" : "FAIL") << "\n";
            rep.text << "pullback factor check: " << (ok2 ? "pass" : "FAIL") << "\n";
            rep.data["reexpansion_check"] = ok1;
            rep.data["pullback_check"] = ok2;
            if (!ok1 || !ok2) throw internal_error("split certificate failed re-verification");
        }
    }
    return rep;
}

inline json json_crosscheck(const CrosscheckReport& r) {
    json j;
    j["divisibility"] = to_string(r.divisibility);
    j["splitting"] = to_string(r.splitting);
    j["status"] = r.status == Agreement::Agree      ? "AGREE"
                  : r.status == Agreement::Disagree ? "DISAGREE"
                                                    : "UNDECIDED";
    return j;
}

inline Report report_zariski(const InstanceFile& i1, const InstanceFile& i2) {
    Report rep;
    if (i1.deltas.empty() || i2.deltas.empty())
        throw user_error("zariski comparison needs a delta block in each instance");
    WeierstrassSurface S1 = i1.surface(), S2 = i2.surface();
    auto mk = [](const WeierstrassSurface& S, const InstanceFile& inst, const DeltaSpec& d) {
        PolyQ f = delta_polynomial(S, inst, d);
        // reconstruct the section (f, y) on the surface
        Poly<RF> p({RF(S.a6), RF(S.a4), RF(S.a2), RF(1)});
        RF c0 = p.eval<RF>(RF(f));
        auto y = rf_sqrt_exact(c0);
        if (!y) throw user_error("delta does not lift to a rational section");
        return Section(RF(f), *y);
    };
    Section s1 = mk(S1, i1, i1.deltas.front());
    Section s2 = mk(S2, i2, i2.deltas.front());
    ZariskiReport z = zariski_compare(S1, s1, S2, s2, i1.tower_cap);
    rep.text << "first instance (delta " << i1.deltas.front().name
             << "): divisibility = " << to_string(z.first.divisibility)
             << ", splitting = " << to_string(z.first.splitting) << "\n";
    rep.text << "  dihedral cover family for every odd order: "
             << (z.d2n_family_first ? "exists" : "does not exist") << "\n";
    rep.text << "second instance (delta " << i2.deltas.front().name
             << "): divisibility = " << to_string(z.second.divisibility)
             << ", splitting = " << to_string(z.second.splitting) << "\n";
    rep.text << "  dihedral cover family for every odd order: "
             << (z.d2n_family_second ? "exists" : "does not exist") << "\n";
    rep.text << "conclusion: " << to_string(z.conclusion) << "\n";
    if (z.conclusion == ZariskiConclusion::Distinguished)
        rep.text << "no homeomorphism of the ruled surface carries the first configuration "
                    "(zero section + delta + branch curve) to the second\n";
    rep.data["first"] = json_crosscheck(z.first);
    rep.data["second"] = json_crosscheck(z.second);
    rep.data["d2n_family_first"] = z.d2n_family_first;
    rep.data["d2n_family_second"] = z.d2n_family_second;
    rep.data["conclusion"] = to_string(z.conclusion);
    return rep;
}

inline Report report_basechange(const InstanceFile& inst, const std::string& nu_expr,
                                InstanceFile* out_inst) {
    Report rep;
    WeierstrassSurface S = inst.surface();
    RF nu = parse_expression(nu_expr);
    std::vector<Section> secs;
    for (const auto& [name, sec] : inst.sections) secs.push_back(sec);
    auto bc = base_change(S, nu, secs);
    InstanceFile out;
    out.g = inst.g;
    out.d = bc.surface.d;
    out.a2 = bc.surface.a2;
    out.a4 = bc.surface.a4;
    out.a6 = bc.surface.a6;
    for (size_t i = 0; i < inst.sections.size(); ++i)
        out.sections.emplace_back(inst.sections[i].first, bc.sections[i]);
    // deltas with direct f transform with the surface (f transforms like an
    // x-coordinate, so lift it to a section first); section references
    // carry over verbatim
    for (const auto& d : inst.deltas) {
        DeltaSpec nd = d;
        if (d.f) {
            Poly<RF> p({RF(S.a6), RF(S.a4), RF(S.a2), RF(1)});
            auto y = rf_sqrt_exact(p.eval<RF>(RF(*d.f)));
            if (!y)
                throw user_error("delta '" + d.name +
                                 "' does not lift to a rational section; cannot transport");
            auto bc1 = base_change(S, nu, {Section(RF(*d.f), *y)});
            nd.f = bc1.sections[0].x.num();
        }
        out.deltas.push_back(nd);
    }
    out.tower_cap = inst.tower_cap;
    out.torsion_checks = inst.torsion_checks;
    rep.text << "base change t = " << nu_expr << "\n";
    rep.text << "new degree d = " << out.d << "\n";
    rep.data["nu"] = nu_expr;
    rep.data["d"] = out.d;
    if (out_inst) *out_inst = out;
    return rep;
}

}  // namespace ellsplit
