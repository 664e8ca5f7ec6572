// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellsplit/places.hpp"
#include "ellsplit/rootfind.hpp"

namespace ellsplit {

/// y^2 = x^3 + a2 x^2 + a4 x + a6 over Q[t], fibered over P^1 with the
/// Hirzebruch degree d controlling the coefficient degree bounds
/// (deg a2 <= d, deg a4 <= 2d, deg a6 <= 3d).
struct WeierstrassSurface {
    PolyQ a2, a4, a6;
    int d = 2;
    int g = 1;

    WeierstrassSurface() = default;
    WeierstrassSurface(PolyQ a2_, PolyQ a4_, PolyQ a6_, int d_)
        : a2(std::move(a2_)), a4(std::move(a4_)), a6(std::move(a6_)), d(d_) {
        validate();
    }

    void validate() const {
        if (d <= 0 || d % 2 != 0) throw user_error("surface degree d must be even and positive");
        auto degree_ok = [](const PolyQ& p, int bound) {
            return p.is_zero() || p.deg() <= bound;
        };
        if (!degree_ok(a2, d) || !degree_ok(a4, 2 * d) || !degree_ok(a6, 3 * d))
            throw user_error("coefficient degrees exceed the bounds for d = " + std::to_string(d));
        if (discriminant().is_zero()) throw user_error("degenerate surface: discriminant vanishes");
    }

    /// The cubic in x, as a polynomial over Q(t).
    Poly<RF> rhs() const { return Poly<RF>({RF(a6), RF(a4), RF(a2), RF(1)}); }

    PolyQ c4() const { return Rat(16) * a2 * a2 - Rat(48) * a4; }
    PolyQ c6() const { return Rat(-64) * a2.pow(3) + Rat(288) * a2 * a4 - Rat(864) * a6; }
    PolyQ discriminant() const {
        PolyQ c4p = c4(), c6p = c6();
        PolyQ num = c4p.pow(3) - c6p * c6p;
        return Rat(1, 1728) * num;
    }

    int chi_grading() const { return d / 2; }  // weight multiplier at infinity

    /// Surface in the t = 1/s chart with the grading twist.
    WeierstrassSurface infinity_chart_surface() const {
        auto tw = [&](const PolyQ& p, int w) {
            RF f = infinity_chart(RF(p), w * chi_grading());
            if (!f.is_polynomial()) throw internal_error("infinity chart produced a non-polynomial");
            return f.num();
        };
        WeierstrassSurface s;
        s.a2 = tw(a2, 2);
        s.a4 = tw(a4, 4);
        s.a6 = tw(a6, 6);
        s.d = d;
        s.g = g;
        return s;
    }
};

struct SurfaceInvariants {
    PolyQ c4, c6, disc;
    RF j;
};

inline SurfaceInvariants invariants(const WeierstrassSurface& S) {
    SurfaceInvariants out;
    out.c4 = S.c4();
    out.c6 = S.c6();
    out.disc = S.discriminant();
    if (out.disc.is_zero()) throw user_error("degenerate surface: discriminant vanishes");
    if (!(out.c4.pow(3) - out.c6 * out.c6 == Rat(1728) * out.disc))
        throw internal_error("c4^3 - c6^2 != 1728 disc");
    out.j = RF(out.c4.pow(3)) / RF(out.disc);
    return out;
}

// coefficient embedding Q[t] -> K(t)
template <FieldLike K>
RatFunc<K> poly_cast(const PolyQ& p) {
    std::vector<K> c;
    c.reserve(p.coeffs().size());
    for (const auto& r : p.coeffs()) c.push_back(K(r));
    return RatFunc<K>(Poly<K>(std::move(c)));
}

/// A section of the fibration: the zero section O or an affine point of the
/// generic fiber with coordinates in K(t). The constant-field tower travels
/// with the value.
template <FieldLike K>
struct SectionT {
    bool zero = true;
    RatFunc<K> x, y;
    QuadTower tower;  // trivial for K = Rat

    SectionT() = default;
    SectionT(RatFunc<K> x_, RatFunc<K> y_, QuadTower tw = {})
        : zero(false), x(std::move(x_)), y(std::move(y_)), tower(std::move(tw)) {}

    bool is_zero() const { return zero; }

    friend bool operator==(const SectionT& a, const SectionT& b) {
        if (a.zero != b.zero) return false;
        return a.zero || (a.x == b.x && a.y == b.y);
    }
    friend bool operator!=(const SectionT& a, const SectionT& b) { return !(a == b); }
};

using Section = SectionT<Rat>;
using TowerSection = SectionT<TowerElem>;

inline TowerSection lift_section(const Section& P, const QuadTower& tw) {
    if (P.is_zero()) return TowerSection();
    return TowerSection(lift_rf(P.x, tw), lift_rf(P.y, tw), tw);
}

template <FieldLike K>
bool on_curve(const WeierstrassSurface& S, const SectionT<K>& P) {
    if (P.is_zero()) return true;
    RatFunc<K> lhs = P.y * P.y;
    RatFunc<K> x = P.x;
    RatFunc<K> rhs = ((x + poly_cast<K>(S.a2)) * x + poly_cast<K>(S.a4)) * x + poly_cast<K>(S.a6);
    return lhs == rhs;
}

template <FieldLike K>
SectionT<K> neg(const SectionT<K>& P) {
    if (P.is_zero()) return P;
    return SectionT<K>(P.x, -P.y, P.tower);
}
template <FieldLike K>
SectionT<K> neg(const WeierstrassSurface&, const SectionT<K>& P) { return neg(P); }

/// Chord-tangent group law with O as identity.
template <FieldLike K>
SectionT<K> add(const WeierstrassSurface& S, const SectionT<K>& P, const SectionT<K>& Q) {
    if (P.is_zero()) return Q;
    if (Q.is_zero()) return P;
    RatFunc<K> a2 = poly_cast<K>(S.a2), a4 = poly_cast<K>(S.a4);
    RatFunc<K> lambda;
    if (P.x == Q.x) {
        if ((P.y + Q.y).is_zero()) return SectionT<K>();  // P + (-P) = O
        lambda = (RatFunc<K>(K(3)) * P.x * P.x + RatFunc<K>(K(2)) * a2 * P.x + a4) /
                 (RatFunc<K>(K(2)) * P.y);
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    RatFunc<K> xr = lambda * lambda - a2 - P.x - Q.x;
    RatFunc<K> yr = -(P.y + lambda * (xr - P.x));
    QuadTower tw = P.tower.contains(Q.tower) ? P.tower : Q.tower;
    return SectionT<K>(xr, yr, tw);
}

template <FieldLike K>
SectionT<K> dbl(const WeierstrassSurface& S, const SectionT<K>& P) {
    return add(S, P, P);
}

template <FieldLike K>
SectionT<K> mul(const WeierstrassSurface& S, long n, const SectionT<K>& P) {
    if (n < 0) return neg(mul(S, -n, P));
    SectionT<K> r;  // O
    SectionT<K> b = P;
    while (n > 0) {
        if (n & 1) r = add(S, r, b);
        b = dbl(S, b);
        n >>= 1;
    }
    return r;
}

/// All 2-torsion sections (x0, 0) with x0 in Q(t) or a quadratic-tower
/// constant extension; empty means none is reachable within the tower cap.
/// Linear factors of the cubic are found outright; quadratic factors are
/// decided by the square-up-to-constant test on their discriminant; an
/// irreducible cubic factor has no tower-constant root at all.
inline std::vector<TowerSection> two_torsion_sections(const WeierstrassSurface& S,
                                                      const QuadTower& tw = {}) {
    auto rs = find_function_field_roots(S.rhs(), tw);
    std::vector<TowerSection> out;
    for (auto& r : rs.roots) out.emplace_back(r.value, TRF(), r.tower);
    std::sort(out.begin(), out.end(), [](const TowerSection& a, const TowerSection& b) {
        return compare(a.x, b.x) < 0;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// 3-torsion x-coordinates come from the division polynomial
/// 3x^4 + 4 a2 x^3 + 6 a4 x^2 + 12 a6 x + (4 a2 a6 - a4^2).
inline std::vector<TowerSection> three_torsion_sections(const WeierstrassSurface& S,
                                                        const QuadTower& tw = {}) {
    Poly<RF> psi3({RF(Rat(4) * S.a2 * S.a6 - S.a4 * S.a4), RF(Rat(12) * S.a6),
                   RF(Rat(6) * S.a4), RF(Rat(4) * S.a2), RF(3)});
    auto rs = find_function_field_roots(psi3, tw);
    std::vector<TowerSection> out;
    for (auto& r : rs.roots) {
        // y^2 = cubic(x0) must itself have a tower square root
        TRF val = lift_rf(RF(S.a6), r.tower) + r.value * (lift_rf(RF(S.a4), r.tower) +
                  r.value * (lift_rf(RF(S.a2), r.tower) + r.value));
        if (val.is_zero()) continue;  // that would be 2-torsion
        auto sq = rf_square_up_to_constant(val);
        if (!sq) continue;
        auto cs = tower_elem_sqrt(sq->first, r.tower);
        if (!cs) continue;
        TRF y0 = TRF(TPoly(cs->root)) * lift_trf(sq->second, cs->tower);
        TowerSection P(lift_trf(r.value, cs->tower), y0, cs->tower);
        out.push_back(P);
        out.push_back(neg(P));
    }
    return out;
}

/// Branch curve data on the Hirzebruch surface: p(x, t) monic in x of
/// degree 2g+1, coefficient of x^k of t-degree <= d(2g+1-k).
struct BranchCurve {
    int g = 1;
    int d = 2;
    std::vector<PolyQ> coeff;  // index = power of x, size 2g+2, top = 1

    BranchCurve() = default;
    BranchCurve(int g_, int d_, std::vector<PolyQ> c) : g(g_), d(d_), coeff(std::move(c)) {}

    static BranchCurve from_surface(const WeierstrassSurface& S) {
        return BranchCurve(S.g, S.d, {S.a6, S.a4, S.a2, PolyQ::one()});
    }

    Poly<RF> poly_x() const {
        std::vector<RF> c;
        c.reserve(coeff.size());
        for (const auto& p : coeff) c.emplace_back(p);
        return Poly<RF>(std::move(c));
    }
};

}  // namespace ellsplit
