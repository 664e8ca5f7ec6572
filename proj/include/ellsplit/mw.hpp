// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ellsplit/fibers.hpp"

namespace ellsplit {

/// Working context for Mordell-Weil computations on one surface.
struct MWContext {
    WeierstrassSurface S;
    FiberConfiguration config;
    std::vector<std::pair<std::string, Section>> sections;
    int tower_cap = 3;
    bool torsion_free = false;

    MWContext() = default;
    explicit MWContext(const WeierstrassSurface& S_, int cap = 3, bool check_torsion = true)
        : S(S_), config(classify_fibers(S_)), tower_cap(cap) {
        if (check_torsion) {
            QuadTower tw(cap);
            try {
                torsion_free = two_torsion_sections(S, tw).empty() &&
                               three_torsion_sections(S, tw).empty();
            } catch (const tower_overflow&) {
                torsion_free = false;
            }
        }
    }

    void add_section(const std::string& name, const Section& P) {
        if (!on_curve(S, P)) throw user_error("section '" + name + "' is not on the surface");
        sections.emplace_back(name, P);
    }
};

/// (P . O): half the pole degree of x_P, with the infinity chart twisted by
/// the grading and minimality twists folded in.
inline int meets_zero_section(const MWContext& ctx, const Section& P) {
    if (P.is_zero()) throw user_error("meets_zero_section of the zero section");
    long total = 0;
    // finite poles
    auto polefac = factor(P.x.den());
    std::map<PolyQ, int, decltype([](const PolyQ& a, const PolyQ& b) { return compare(a, b) < 0; })>
        twists;
    for (const auto& f : ctx.config.fibers)
        if (f.twist > 0 && !f.place.is_infinity()) twists[f.place.poly()] = f.twist;
    for (const auto& [pi, mult] : polefac.factors) {
        int v = -mult;  // valuation of x at pi
        auto it = twists.find(pi);
        if (it != twists.end()) v -= 2 * it->second;
        if (v < 0) total += static_cast<long>(-v) * pi.deg();
        twists.erase(pi);
    }
    for (const auto& [pi, k] : twists) {
        int v = valuation(P.x, Place::finite(pi)) - 2 * k;
        if (v < 0) total += static_cast<long>(-v) * pi.deg();
    }
    int vinf = P.x.is_zero() ? kValuationInfinity
                             : valuation(P.x, Place::infinity(), 2 * ctx.S.chi_grading());
    if (const FiberData* f = ctx.config.find(Place::infinity()); f && f->twist > 0 &&
                                                                 vinf != kValuationInfinity)
        vinf -= 2 * f->twist;
    if (vinf != kValuationInfinity && vinf < 0) total += -vinf;
    if (total % 2 != 0)
        throw internal_error("odd pole degree along the zero section: model violation");
    return static_cast<int>(total / 2);
}

/// <P, P> = 2 chi + 2 (P.O) - sum_v deg(v) contr_v(P, P).
inline Rat self_height(const MWContext& ctx, const Section& P) {
    if (P.is_zero()) return Rat(0);
    Rat h = Rat(2 * ctx.config.chi) + Rat(2 * meets_zero_section(ctx, P));
    for (const auto& f : ctx.config.fibers) {
        if (f.components <= 1) continue;
        Rat c = contribution(ctx.config, f.place, P, P);
        h -= Rat(f.place.degree()) * c;
    }
    return h;
}

/// Bilinear height pairing; the mixed value comes from polarization of the
/// self heights, which keeps every fiber type exact.
inline Rat height(const MWContext& ctx, const Section& P, const Section& Q) {
    if (P.is_zero() || Q.is_zero()) return Rat(0);
    if (P == Q) return self_height(ctx, P);
    Section sum = add(ctx.S, P, Q);
    return (self_height(ctx, sum) - self_height(ctx, P) - self_height(ctx, Q)) * Rat(1, 2);
}

inline std::vector<std::vector<Rat>> gram(const MWContext& ctx,
                                          const std::vector<Section>& secs) {
    const size_t n = secs.size();
    std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) M[i][j] = M[j][i] = height(ctx, secs[i], secs[j]);
    return M;
}

namespace mwdetail {

/// Contact order of two distinct sections at a smooth point (or away from
/// the singular point) of the fiber over the finite place pi of the chart.
inline long plain_contact(const PolyQ& pi, const RF& xP, const RF& yP, const RF& xQ,
                          const RF& yQ) {
    Place v = Place::finite(pi);
    int vxP = valuation(xP, v), vxQ = valuation(xQ, v);
    if (vxP < 0 && vxQ < 0) {
        // both meet O: inverse coordinates (x/y, 1/y) around (0,0)
        RF dX = xP / yP - xQ / yQ;
        RF dY = RF(PolyQ::one()) / yP - RF(PolyQ::one()) / yQ;
        long m = std::min<long>(dX.is_zero() ? kValuationInfinity : valuation(dX, v),
                                dY.is_zero() ? kValuationInfinity : valuation(dY, v));
        return std::max<long>(m, 0);
    }
    if (vxP < 0 || vxQ < 0) return 0;
    RF dx = xP - xQ, dy = yP - yQ;
    long vdx = dx.is_zero() ? kValuationInfinity : valuation(dx, v);
    long vdy = dy.is_zero() ? kValuationInfinity : valuation(dy, v);
    if (vdx <= 0 || vdy <= 0) return 0;
    return std::min(vdx, vdy);
}

/// Local smooth-model intersection of two distinct sections at a place of
/// bad reduction. Returns -1 when the exact analysis needs an unsupported
/// branch (the caller then uses the height identity instead).
inline long local_meets_bad(const FiberConfiguration& cfg, const fibdetail::PlaceCtx& pctx,
                            const Section& P, const Section& Q) {
    const PolyQ& pi = pctx.pi;
    Place v = Place::finite(pi);
    auto [xP, yP] = fibdetail::chart_coords(pctx, cfg.S, P);
    auto [xQ, yQ] = fibdetail::chart_coords(pctx, cfg.S, Q);
    int vxP = valuation(xP, v), vxQ = valuation(xQ, v);
    if (vxP < 0 || vxQ < 0) return plain_contact(pi, xP, yP, xQ, yQ);
    RF dx = xP - xQ, dy = yP - yQ;
    long vdx = dx.is_zero() ? kValuationInfinity : valuation(dx, v);
    long vdy = dy.is_zero() ? kValuationInfinity : valuation(dy, v);
    if (vdx <= 0 || vdy <= 0) return 0;
    auto lp = fibdetail::analyze(cfg, pctx, P);
    auto lq = fibdetail::analyze(cfg, pctx, Q);
    if (!lp.through_sing || !lq.through_sing) return std::min(vdx, vdy);
    switch (lp.kind) {
        case KodairaKind::II:
            return std::min(vdx, vdy);
        case KodairaKind::III:
            return vdy - 1;
        case KodairaKind::IV: {
            auto [i, j] = fibdetail::oriented_pair(pctx, lp, lq);
            if (i != j) return 0;
            // same branch: positions on the component differ unless the
            // x-directions agree
            return vdx - 1;
        }
        case KodairaKind::I0star: {
            if (!(lp.tip == lq.tip)) return 0;
            return std::max<long>(vdy - 2, 0);
        }
        case KodairaKind::In: {
            const int n = lp.n;
            if (n == 1) {
                // I1: the fiber keeps its node but the surface is smooth
                // there, so plain contact applies
                return std::min(vdx, vdy);
            }
            // need u = y/sqrt(h(x)) - (x' - rho) in the quadratic refinement
            Poly<LocalElem> fl({LocalElem(pctx.an, pctx.Q_), LocalElem(pctx.an, pctx.P_),
                                LocalElem(Rat(0)), LocalElem(Rat(1))});
            PolyQ p2 = fibdetail::residue_of(RF(pctx.P_), pi);
            PolyQ q3 = fibdetail::residue_of(RF(pctx.Q_), pi);
            PolyQ x0bar = fq_mul(Rat(-3) * q3, fq_inv(Rat(2) * p2, pi), pi);
            HenselCubic hc = hensel_cubic_split(fl, x0bar, pctx.an);
            RF xsP = xP + RF(pctx.shift), xsQ = xQ + RF(pctx.shift);
            LocalElem zP = reduce_rf(xsP, pctx.an) - hc.rho;
            LocalElem zQ = reduce_rf(xsQ, pctx.an) - hc.rho;
            LocalElem hXP = hc.h.eval<LocalElem>(reduce_rf(xsP, pctx.an));
            LocalElem hXQ = hc.h.eval<LocalElem>(reduce_rf(xsQ, pctx.an));
            LocalElem yPl = reduce_rf(yP, pctx.an), yQl = reduce_rf(yQ, pctx.an);
            PolyQ hbar = hXP.residue();
            bool decided = false;
            auto s0 = fq_sqrt(hbar, pi, &decided);
            if (!decided) return -1;  // norm test inconclusive; use fallback
            int a, b, vdu;
            if (s0) {
                LocalElem seed(pctx.an, *s0);
                LocalElem sqP = sqrt_unit(hXP, seed), sqQ = sqrt_unit(hXQ, seed);
                LocalElem uP = yPl * sqP.inv() - zP;
                LocalElem uQ = yQl * sqQ.inv() - zQ;
                a = uP.val(); b = uQ.val();
                vdu = (uP - uQ).val();
            } else {
                // non-split node: unramified quadratic residue extension
                LocalElem m(pctx.an, hbar);
                QuadLocal seed(LocalElem(Rat(0)), LocalElem(Rat(1)), m);
                QuadLocal sqP = sqrt_unit_quad(hXP, seed), sqQ = sqrt_unit_quad(hXQ, seed);
                QuadLocal uP = quad_embed(yPl, m) * sqP.inv() - quad_embed(zP, m);
                QuadLocal uQ = quad_embed(yQl, m) * sqQ.inv() - quad_embed(zQ, m);
                a = uP.val(); b = uQ.val();
                vdu = (uP - uQ).val();
            }
            if (a != b) return 0;
            if (vdu >= pctx.an->N - 1) return -1;  // precision saturated
            return vdu - a;
        }
        default:
            return -1;  // In*, IV*, III*: fall back to the height identity
    }
}

}  // namespace mwdetail

/// Smooth-model intersection number (P . Q) for distinct nonzero sections.
inline int meets(const MWContext& ctx, const Section& P, const Section& Q) {
    if (P.is_zero() || Q.is_zero()) throw user_error("meets needs nonzero sections");
    if (P == Q) throw user_error("self-intersection not defined here");
    long total = 0;
    bool fallback = false;
    // candidate finite places: zeros of x_P - x_Q (or of y_P - y_Q when the
    // x's agree), plus common poles
    PolyQ support = PolyQ::one();
    RF dx = P.x - Q.x;
    if (!dx.is_zero()) support = support * dx.num();
    RF dy = P.y - Q.y;
    if (!dy.is_zero()) support = support * dy.num();
    support = support * poly_gcd(P.x.den(), Q.x.den());
    auto fs = factor(support);
    for (const auto& [pi, mult] : fs.factors) {
        const FiberData* fd = ctx.config.find(Place::finite(pi));
        long loc;
        if (fd) {
            auto pctx = fibdetail::make_place_ctx(ctx.config, Place::finite(pi));
            loc = mwdetail::local_meets_bad(ctx.config, pctx, P, Q);
        } else {
            loc = mwdetail::plain_contact(pi, P.x, P.y, Q.x, Q.y);
        }
        if (loc < 0) { fallback = true; break; }
        total += loc * pi.deg();
    }
    if (!fallback) {
        // infinity chart
        PolyQ s({Rat(0), Rat(1)});
        int w2 = 2 * ctx.S.chi_grading(), w3 = 3 * ctx.S.chi_grading();
        const FiberData* fd = ctx.config.find(Place::infinity());
        long loc;
        if (fd) {
            auto pctx = fibdetail::make_place_ctx(ctx.config, Place::infinity());
            loc = mwdetail::local_meets_bad(ctx.config, pctx, P, Q);
        } else {
            RF xPs = infinity_chart(P.x, w2), yPs = infinity_chart(P.y, w3);
            RF xQs = infinity_chart(Q.x, w2), yQs = infinity_chart(Q.y, w3);
            loc = mwdetail::plain_contact(s, xPs, yPs, xQs, yQs);
        }
        if (loc < 0) fallback = true;
        else total += loc;
    }
    if (fallback) {
        // (P.Q) = chi + (P.O) + (Q.O) - <P,Q> - sum contr, exact by the
        // height identity; heights never consult meets().
        Rat r = Rat(ctx.config.chi) + Rat(meets_zero_section(ctx, P)) +
                Rat(meets_zero_section(ctx, Q)) - height(ctx, P, Q);
        for (const auto& f : ctx.config.fibers) {
            if (f.components <= 1) continue;
            r -= Rat(f.place.degree()) * contribution(ctx.config, f.place, P, Q);
        }
        if (!r.is_integer() || r.sign() < 0)
            throw internal_error("height identity produced a non-integral intersection");
        return static_cast<int>(r.num().get_si());
    }
    return static_cast<int>(total);
}

enum class Divisibility { Divisible, NotDivisible, UndecidedOverTower };

inline std::string to_string(Divisibility d) {
    switch (d) {
        case Divisibility::Divisible: return "Divisible";
        case Divisibility::NotDivisible: return "NotDivisible";
        case Divisibility::UndecidedOverTower: return "UndecidedOverTower";
    }
    return "?";
}

/// Certificate of the 2-divisibility decision. Every listed half doubles to
/// the target up to the sign ambiguity of the pair s+/s- (the list is closed
/// under negation, so a strict half of the target is always present when
/// the verdict is Divisible).
struct HalvingCertificate {
    Section target;
    Poly<RF> halving_poly;
    std::vector<TowerSection> halves;
    Divisibility verdict = Divisibility::UndecidedOverTower;
    std::vector<std::string> evidence;
};

/// The quartic whose roots are the x-coordinates of sections R with
/// x(2R) = x(S): clear x(2R) - x_S of its denominator.
inline Poly<RF> halving_polynomial(const WeierstrassSurface& S, const RF& xS) {
    RF a2(S.a2), a4(S.a4), a6(S.a6);
    std::vector<RF> c(5);
    c[4] = RF(1);
    c[3] = RF(-4) * xS;
    c[2] = RF(-2) * a4 - RF(4) * xS * a2;
    c[1] = RF(-8) * a6 - RF(4) * xS * a4;
    c[0] = a4 * a4 - RF(4) * a2 * a6 - RF(4) * xS * a6;
    return Poly<RF>(std::move(c));
}

inline HalvingCertificate halve(const MWContext& ctx, const Section& Starget) {
    if (Starget.is_zero()) throw user_error("halve of the zero section");
    if (!on_curve(ctx.S, Starget)) throw user_error("halve: section not on the surface");
    HalvingCertificate cert;
    cert.target = Starget;
    cert.halving_poly = halving_polynomial(ctx.S, Starget.x);
    QuadTower base(ctx.tower_cap);
    RootSearch rs;
    bool undecided = false;
    try {
        rs = find_function_field_roots(cert.halving_poly, base);
    } catch (const tower_overflow& e) {
        cert.verdict = Divisibility::UndecidedOverTower;
        cert.evidence.push_back(e.what());
        return cert;
    }
    undecided = !rs.complete;
    cert.evidence = rs.notes;
    for (const auto& root : rs.roots) {
        // y0^2 = cubic(x0) must be a square up to a tower constant
        TRF val = lift_poly(ctx.S.a6, root.tower) +
                  root.value * (lift_poly(ctx.S.a4, root.tower) +
                                root.value * (lift_poly(ctx.S.a2, root.tower) + root.value));
        if (val.is_zero()) {
            cert.evidence.push_back("halving-polynomial root is a 2-torsion x-coordinate; it cannot halve a nonzero section");
            continue;
        }
        auto sq = rf_square_up_to_constant(val);
        if (!sq) {
            cert.evidence.push_back(
                "root rejected: the cubic value has an odd-multiplicity place, so no y exists over C(t)");
            continue;
        }
        std::optional<TowerSqrt> cs;
        try {
            cs = tower_elem_sqrt(sq->first, root.tower);
        } catch (const tower_overflow& e) {
            undecided = true;
            cert.evidence.push_back(e.what());
            continue;
        }
        if (!cs) {
            undecided = true;
            cert.evidence.push_back("constant of the y-square is not a multiquadratic square; undecided");
            continue;
        }
        TRF y0 = TRF(TPoly(cs->root)) * lift_trf(sq->second, cs->tower);
        TowerSection cand(lift_trf(root.value, cs->tower), y0, cs->tower);
        TowerSection plus = lift_section(Starget, cs->tower);
        TowerSection minus = neg(plus);
        for (const TowerSection& C : {cand, neg(cand)}) {
            TowerSection dblC = dbl(ctx.S, C);
            if (dblC == plus || dblC == minus) cert.halves.push_back(C);
        }
    }
    std::sort(cert.halves.begin(), cert.halves.end(),
              [](const TowerSection& a, const TowerSection& b) {
                  int c = compare(a.x, b.x);
                  if (c != 0) return c < 0;
                  return compare(a.y, b.y) < 0;
              });
    cert.halves.erase(std::unique(cert.halves.begin(), cert.halves.end()), cert.halves.end());
    if (!cert.halves.empty()) cert.verdict = Divisibility::Divisible;
    else cert.verdict = undecided ? Divisibility::UndecidedOverTower : Divisibility::NotDivisible;
    return cert;
}

inline Divisibility is_two_divisible(const MWContext& ctx, const Section& S) {
    if (S.is_zero()) return Divisibility::Divisible;
    return halve(ctx, S).verdict;
}

}  // namespace ellsplit
