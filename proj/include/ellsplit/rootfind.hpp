// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ellsplit/factor.hpp"
#include "ellsplit/rational_function.hpp"
#include "ellsplit/tower.hpp"

namespace ellsplit {

using TPoly = Poly<TowerElem>;
using TRF = RatFunc<TowerElem>;

inline TowerElem lift_rat(const Rat& r, const QuadTower& tw) {
    return TowerElem(r).lifted(tw);
}
inline TPoly lift_poly(const PolyQ& p, const QuadTower& tw) {
    std::vector<TowerElem> c;
    c.reserve(p.coeffs().size());
    for (const auto& x : p.coeffs()) c.push_back(lift_rat(x, tw));
    return TPoly(std::move(c));
}
inline TRF lift_rf(const RF& f, const QuadTower& tw) {
    return TRF(lift_poly(f.num(), tw), lift_poly(f.den(), tw));
}
inline TRF lift_trf(const TRF& f, const QuadTower& tw) {
    auto lift = [&](const TPoly& p) {
        std::vector<TowerElem> c;
        for (const auto& x : p.coeffs()) c.push_back(align(x, tw));
        return TPoly(std::move(c));
    };
    return TRF(lift(f.num()), lift(f.den()));
}

inline int compare(const TRF& a, const TRF& b) {
    auto cmp_poly = [](const TPoly& x, const TPoly& y) {
        if (x.is_zero() || y.is_zero()) {
            if (x.is_zero() && y.is_zero()) return 0;
            return x.is_zero() ? -1 : 1;
        }
        if (x.deg() != y.deg()) return x.deg() < y.deg() ? -1 : 1;
        for (int i = x.deg(); i >= 0; --i) {
            int c = compare(x[static_cast<size_t>(i)], y[static_cast<size_t>(i)]);
            if (c != 0) return c;
        }
        return 0;
    };
    int c = cmp_poly(a.den(), b.den());
    if (c != 0) return c;
    return cmp_poly(a.num(), b.num());
}

/// Exact square root of a rational function, if it is one.
inline std::optional<RF> rf_sqrt_exact(const RF& f) {
    if (f.is_zero()) return RF();
    auto s = rf_square_up_to_constant(f);
    if (!s) return std::nullopt;
    auto c = sqrt_exact(s->first);
    if (!c) return std::nullopt;
    return RF(PolyQ(*c)) * s->second;
}

/// Square root of a tower constant, possibly extending the tower. Handles
/// rationals and two-term elements a + b*rad (the shapes the root search
/// produces); returns nullopt when the root is provably outside every
/// integer-generated multiquadratic tower.
inline std::optional<TowerSqrt> tower_elem_sqrt(const TowerElem& c, const QuadTower& tw0) {
    QuadTower tw = tw0;
    TowerElem cc = align(c, tw);
    if (cc.is_zero()) return TowerSqrt{tw, TowerElem(Rat(0)).lifted(tw)};
    if (cc.is_rational()) {
        auto r = tower_sqrt(cc.as_rational(), tw);
        return r;
    }
    // locate a two-term representation a + b*sqrt(M)
    size_t mask = 0;
    int terms = 0;
    for (size_t i = 1; i < cc.coords().size(); ++i)
        if (!cc.coords()[i].is_zero()) { mask = i; ++terms; }
    if (terms != 1) return std::nullopt;
    Rat a = cc.coords()[0], b = cc.coords()[mask];
    Rat M = tw.basis_square(mask);
    // sqrt(a + b sqrt(M)) = sqrt((a+e)/2) + s*sqrt((a-e)/2), e = sqrt(a^2 - b^2 M)
    Rat n2 = a * a - b * b * M;
    auto e = sqrt_exact(n2);
    if (!e) return std::nullopt;  // quartic, not multiquadratic
    Rat p = (a + *e) / Rat(2), q = (a - *e) / Rat(2);
    try {
        auto sp = tower_sqrt(p, tw);
        auto sq = tower_sqrt(q, sp.tower);
        TowerElem rp = align(sp.root, sq.tower), rq = sq.root;
        // fix the relative sign: (rp + s rq)^2 = p + q + 2 s rp rq = a + s*2*sqrt(pq)
        // and pq = b^2 M / 4, so 2 sqrt(pq) = |b| sqrt(M): choose s to match b.
        TowerElem cand = rp + rq;
        if (cand * cand == align(cc, sq.tower)) return TowerSqrt{sq.tower, cand};
        cand = rp - rq;
        if (cand * cand == align(cc, sq.tower)) return TowerSqrt{sq.tower, cand};
        return std::nullopt;
    } catch (const tower_overflow&) {
        throw;
    }
}

/// A root of a polynomial over Q(t) living in tower(t).
struct FFRoot {
    QuadTower tower;
    TRF value;
};

/// Result of the constant-extension root search.
///  - roots: every root found (base field or quadratic towers within cap)
///  - complete: true iff it is certified that no further roots exist over
///    C(t) (constants algebraically closed)
struct RootSearch {
    std::vector<FFRoot> roots;
    bool complete = true;
    std::vector<std::string> notes;

    void note(const std::string& s) { notes.push_back(s); }
};

namespace rdetail {

/// Clear denominators: P = (1/D) sum A_k z^k with A_k in Q[t].
inline std::pair<std::vector<PolyQ>, PolyQ> clear_denominators(const Poly<RF>& P) {
    PolyQ D = PolyQ::one();
    for (const auto& c : P.coeffs()) D = D * (c.den() / poly_gcd(D, c.den()));
    std::vector<PolyQ> A;
    A.reserve(P.coeffs().size());
    for (const auto& c : P.coeffs()) {
        RF v = c * RF(D);
        if (!v.is_polynomial()) throw internal_error("denominator clearing failed");
        A.push_back(v.num());
    }
    return {A, D};
}

/// All roots of P in Q(t) itself (complete, UFD rational-root method).
inline std::vector<RF> roots_in_base(const Poly<RF>& P) {
    std::vector<RF> out;
    if (P.is_zero() || P.is_constant()) return out;
    auto [A, D] = clear_denominators(P);
    size_t lo = 0;
    while (A[lo].is_zero()) ++lo;
    if (lo > 0) out.push_back(RF());
    const size_t n = A.size() - 1;
    if (lo == n) { std::sort(out.begin(), out.end(), [](const RF& a, const RF& b){ return compare(a,b) < 0; }); return out; }
    std::vector<PolyQ> ud = monic_divisors(A[lo]);
    std::vector<PolyQ> wd = monic_divisors(A[n]);
    for (const auto& u : ud) {
        for (const auto& w : wd) {
            if (!poly_gcd(u, w).is_one()) continue;
            // T(lambda) = sum_{k>=lo} A_k lambda^{k-lo} u^{k-lo} w^{n-k}; roots lambda in Q*
            // collect per power of t: each gives a rational polynomial in lambda
            std::vector<PolyQ> lambda_coeff;  // index = power of lambda; entries in Q[t]
            for (size_t k = lo; k <= n; ++k) {
                PolyQ Ck = A[k] * u.pow(static_cast<long>(k - lo)) * w.pow(static_cast<long>(n - k));
                lambda_coeff.push_back(Ck);
            }
            int maxdeg = 0;
            for (const auto& c : lambda_coeff)
                if (!c.is_zero()) maxdeg = std::max(maxdeg, c.deg());
            PolyQ G;  // gcd over all t-coefficients, as polynomial in lambda
            for (int j = 0; j <= maxdeg; ++j) {
                std::vector<Rat> g;
                for (const auto& c : lambda_coeff) g.push_back(c[static_cast<size_t>(j)]);
                PolyQ gj(std::move(g));
                G = poly_gcd(G, gj);
                if (G.is_one()) break;
            }
            if (G.is_constant()) continue;
            for (const Rat& lam : rational_roots(G)) {
                if (lam.is_zero()) continue;
                RF cand = RF(Rat(lam) * u) / RF(w);
                if (P.eval<RF>(cand).is_zero()) out.push_back(cand);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const RF& a, const RF& b) { return compare(a, b) < 0; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline Poly<RF> deflate(const Poly<RF>& P, const RF& r) {
    auto [q, rem] = Poly<RF>::divmod(P, Poly<RF>({-r, RF(1)}));
    if (!rem.is_zero()) throw internal_error("deflation by non-root");
    return q;
}

/// Analysis of a monic quadratic z^2 + B z + C with no roots in Q(t).
inline void quadratic_over_base(const RF& B, const RF& C, const QuadTower& tw, RootSearch& rs,
                                const std::string& what) {
    RF disc = B * B - RF(4) * C;
    if (disc.is_zero()) {
        // double root -B/2 would have been rational; defensive
        rs.roots.push_back({tw, lift_rf(-B / RF(2), tw)});
        return;
    }
    auto sq = rf_square_up_to_constant(disc);
    if (!sq) {
        rs.note(what + ": quadratic factor has discriminant with an odd-multiplicity place, no roots over C(t)");
        return;
    }
    // disc = c * g^2; roots (-B +- sqrt(c) g)/2 over Q(sqrt c)
    try {
        auto s = tower_sqrt(sq->first, tw);
        TRF g = lift_rf(sq->second, s.tower);
        TRF rootpart = TRF(TPoly(s.root)) * g;
        TRF mb = lift_rf(-B, s.tower);
        TowerElem half = lift_rat(Rat(1, 2), s.tower);
        rs.roots.push_back({s.tower, (mb + rootpart) * TRF(TPoly(half))});
        rs.roots.push_back({s.tower, (mb - rootpart) * TRF(TPoly(half))});
    } catch (const tower_overflow& e) {
        rs.complete = false;
        rs.note(what + ": roots exist over C(t) but " + e.what());
    }
}

/// Quadratic with tower coefficients (from a quartic split over K1).
inline void quadratic_over_tower(const TRF& B, const TRF& C, const QuadTower& tw, RootSearch& rs,
                                 const std::string& what) {
    TRF disc = B * B - TRF(TPoly(lift_rat(Rat(4), tw))) * C;
    if (disc.is_zero()) {
        rs.roots.push_back({tw, lift_trf(-B, tw) * TRF(TPoly(lift_rat(Rat(1, 2), tw)))});
        return;
    }
    auto sq = rf_square_up_to_constant(disc);
    if (!sq) {
        rs.note(what + ": discriminant has an odd-multiplicity place over the extension, no roots over C(t)");
        return;
    }
    auto s = tower_elem_sqrt(sq->first, tw);
    if (!s) {
        rs.complete = false;
        rs.note(what + ": discriminant constant is not a multiquadratic square; undecided over integer towers");
        return;
    }
    TRF g = lift_trf(sq->second, s->tower);
    TRF rootpart = TRF(TPoly(s->root)) * g;
    TRF mb = lift_trf(-B, s->tower);
    TRF half(TPoly(lift_rat(Rat(1, 2), s->tower)));
    rs.roots.push_back({s->tower, (mb + rootpart) * half});
    rs.roots.push_back({s->tower, (mb - rootpart) * half});
}

}  // namespace rdetail

/// Find roots of P (degree <= 4 after rational-root extraction) in K(t) for
/// constant fields K reachable by quadratic towers, certifying completeness
/// over C(t) where possible.
inline RootSearch find_function_field_roots(Poly<RF> P, const QuadTower& tw) {
    RootSearch rs;
    if (P.is_zero()) throw user_error("root search on the zero polynomial");
    if (P.is_constant()) return rs;

    // complete extraction of Q(t)-rational roots (any degree)
    while (true) {
        auto base = rdetail::roots_in_base(P);
        if (base.empty()) break;
        for (const RF& r : base) {
            while (true) {
                auto [q, rem] = Poly<RF>::divmod(P, Poly<RF>({-r, RF(1)}));
                if (!rem.is_zero()) break;
                rs.roots.push_back({tw, lift_rf(r, tw)});
                P = q;
            }
        }
        if (P.is_constant()) break;
    }
    if (P.is_constant()) return rs;

    const int d = P.deg();
    if (d == 2) {
        Poly<RF> M = P.monic();
        rdetail::quadratic_over_base(M[1], M[0], tw, rs, "residual quadratic");
        return rs;
    }
    if (d == 3) {
        // no Q(t)-roots, hence no roots over any quadratic tower; over C(t)
        // a root would force full splitting, making the discriminant a
        // square up to constant.
        Poly<RF> M = P.monic();
        RF b2 = M[2], b1 = M[1], b0 = M[0];
        RF disc = RF(18) * b2 * b1 * b0 - RF(4) * b2.pow(3) * b0 + b2.pow(2) * b1.pow(2) -
                  RF(4) * b1.pow(3) - RF(27) * b0.pow(2);
        if (disc.is_zero()) throw internal_error("squarefree residual cubic with zero discriminant");
        if (!rf_square_up_to_constant(disc)) {
            rs.note("residual cubic: discriminant has an odd-multiplicity place, no roots over C(t)");
        } else {
            rs.complete = false;
            rs.note("residual cubic: discriminant is a square up to constant; a cubic constant-field splitting cannot be excluded by quadratic towers");
        }
        return rs;
    }
    if (d == 4) {
        Poly<RF> M = P.monic();
        // depress: z = w - b3/4
        RF b3 = M[3], sh = -b3 / RF(4);
        Poly<RF> Dep = M.compose(Poly<RF>({sh, RF(1)}));
        RF p = Dep[2], q = Dep[1], r = Dep[0];
        auto undo = [&](RootSearch& inner) {
            for (auto& fr : inner.roots) fr.value = fr.value + lift_rf(sh, fr.tower);
        };
        if (q.is_zero()) {
            // biquadratic: w^2 = y with y^2 + p y + r = 0
            RootSearch ys = find_function_field_roots(Poly<RF>({r, p, RF(1)}), tw);
            RootSearch inner;
            inner.complete = ys.complete;
            inner.notes = ys.notes;
            for (auto& fr : ys.roots) {
                if (fr.value.is_zero()) { inner.roots.push_back({fr.tower, TRF()}); continue; }
                auto sq2 = rf_square_up_to_constant(fr.value);
                if (!sq2) {
                    inner.note("biquadratic branch: y-root has odd-multiplicity places, its square roots are not in C(t)");
                    continue;
                }
                auto cs = tower_elem_sqrt(sq2->first, fr.tower);
                if (!cs) {
                    inner.complete = false;
                    inner.note("biquadratic branch: constant is not a multiquadratic square");
                    continue;
                }
                TRF g = lift_trf(sq2->second, cs->tower);
                TRF root = TRF(TPoly(cs->root)) * g;
                inner.roots.push_back({cs->tower, root});
                inner.roots.push_back({cs->tower, -root});
            }
            undo(inner);
            rs.complete = rs.complete && inner.complete;
            for (auto& n : inner.notes) rs.notes.push_back(n);
            for (auto& rt : inner.roots) rs.roots.push_back(rt);
            return rs;
        }
        // Ferrari resolvent: y^3 + 2p y^2 + (p^2 - 4r) y - q^2. Its rational
        // roots that are exact squares give splittings into quadratics over
        // Q(t); square-up-to-constant roots give splittings over Q(sqrt c);
        // an odd-multiplicity root rules out full splitting over C(t).
        Poly<RF> R({-(q * q), p * p - RF(4) * r, RF(2) * p, RF(1)});
        auto yroots = rdetail::roots_in_base(R);
        RootSearch inner;
        bool handled = false;
        for (const RF& y0 : yroots) {
            auto s_exact = rf_sqrt_exact(y0);
            if (!s_exact) continue;
            RF s = *s_exact;
            RF m = (p + y0 - q / s) / RF(2);
            RF mp = (p + y0 + q / s) / RF(2);
            // each factor may still have rational roots; recurse
            for (auto& [B, C] : {std::pair<RF, RF>{s, m}, std::pair<RF, RF>{-s, mp}}) {
                RootSearch part = find_function_field_roots(Poly<RF>({C, B, RF(1)}), tw);
                inner.complete = inner.complete && part.complete;
                for (auto& n : part.notes) inner.notes.push_back(n);
                for (auto& rt : part.roots) inner.roots.push_back(rt);
            }
            handled = true;
            break;
        }
        if (!handled) {
            // no splitting over Q(t): the quartic is irreducible there
            for (const RF& y0 : yroots) {
                if (handled) break;
                auto sq = rf_square_up_to_constant(y0);
                if (!sq) {
                    inner.note("quartic resolvent: a rational resolvent root has an odd-multiplicity place, no roots over C(t)");
                    handled = true;
                    break;
                }
                // split over K1 = Q(sqrt c): s = sqrt(c) g
                try {
                    auto cs = tower_sqrt(sq->first, tw);
                    TRF s = TRF(TPoly(cs.root)) * lift_rf(sq->second, cs.tower);
                    TRF pl = lift_rf(p + y0, cs.tower), ql = lift_rf(q, cs.tower);
                    TRF two(TPoly(lift_rat(Rat(2), cs.tower)));
                    TRF m = (pl - ql / s) / two;
                    TRF mp = (pl + ql / s) / two;
                    rdetail::quadratic_over_tower(s, m, cs.tower, inner, "quartic split over extension (first factor)");
                    rdetail::quadratic_over_tower(-s, mp, cs.tower, inner, "quartic split over extension (second factor)");
                    handled = true;
                } catch (const tower_overflow& e) {
                    inner.complete = false;
                    inner.note(std::string("quartic split: ") + e.what());
                    handled = true;
                }
            }
        }
        if (!handled) {
            // resolvent cubic has no rational roots: the quartic is
            // irreducible over Q(t) and has no roots in quadratic towers.
            // Over C(t): roots force the resolvent to split completely,
            // making its discriminant a square up to constant.
            RF A2 = RF(2) * p, A1 = p * p - RF(4) * r, A0 = -(q * q);
            RF disc = RF(18) * A2 * A1 * A0 - RF(4) * A2.pow(3) * A0 + A2.pow(2) * A1.pow(2) -
                      RF(4) * A1.pow(3) - RF(27) * A0.pow(2);
            if (!disc.is_zero() && !rf_square_up_to_constant(disc)) {
                inner.note("irreducible quartic: resolvent discriminant has an odd-multiplicity place, no roots over C(t)");
            } else {
                inner.complete = false;
                inner.note("irreducible quartic: resolvent discriminant is a square up to constant; quartic constant-field splittings cannot be excluded by quadratic towers");
            }
        }
        undo(inner);
        rs.complete = rs.complete && inner.complete;
        for (auto& n : inner.notes) rs.notes.push_back(n);
        for (auto& rt : inner.roots) rs.roots.push_back(rt);
        return rs;
    }
    rs.complete = false;
    rs.note("residual degree " + std::to_string(d) + " factor: only Q(t)-rational roots were searched");
    return rs;
}

}  // namespace ellsplit
