// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <optional>
#include <string>

#include "ellsplit/factor.hpp"
#include "ellsplit/rational_function.hpp"

namespace ellsplit {

/// A place of Q(t): a monic irreducible polynomial, or the place at infinity.
class Place {
public:
    static Place infinity() { return Place(); }
    static Place finite(PolyQ pi) {
        if (pi.is_zero() || pi.is_constant()) throw user_error("finite place needs degree >= 1");
        pi = pi.monic();
        return Place(std::move(pi));
    }

    bool is_infinity() const { return !pi_.has_value(); }
    const PolyQ& poly() const {
        if (is_infinity()) throw internal_error("poly() of infinite place");
        return *pi_;
    }
    int degree() const { return is_infinity() ? 1 : pi_->deg(); }

    friend bool operator==(const Place& a, const Place& b) {
        if (a.is_infinity() != b.is_infinity()) return false;
        return a.is_infinity() || *a.pi_ == *b.pi_;
    }
    friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }

    std::string str(const std::string& var = "t") const {
        return is_infinity() ? "infinity" : to_string(*pi_, var);
    }

private:
    Place() = default;
    explicit Place(PolyQ pi) : pi_(std::move(pi)) {}
    std::optional<PolyQ> pi_;
};

/// Finite places sorted by (degree, coefficients); infinity last.
inline int compare(const Place& a, const Place& b) {
    if (a.is_infinity() && b.is_infinity()) return 0;
    if (a.is_infinity()) return 1;
    if (b.is_infinity()) return -1;
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    return compare(a.poly(), b.poly());
}

constexpr int kValuationInfinity = std::numeric_limits<int>::max();

/// x(1/s) * s^twist as an exact element of Q(s) (s the local coordinate at
/// infinity); twist = grading weight times d/2 for surface data.
inline RF infinity_chart(const RF& x, int twist) {
    if (x.is_zero()) return RF();
    const int dn = x.num().deg(), dd = x.den().is_constant() ? 0 : x.den().deg();
    // x(1/s) = s^{dd-dn} * rev(num) / rev(den)
    PolyQ rn = x.num().reversed(dn);
    PolyQ rd = x.den().reversed(dd);
    RF base(rn, rd);
    int shift = twist + dd - dn;
    if (shift >= 0) return RF(PolyQ::monomial(Rat(1), shift)) * base;
    return base / RF(PolyQ::monomial(Rat(1), -shift));
}

/// pi-adic order at finite places; twisted order of vanishing at s=0 of
/// x(1/s)*s^twist at infinity. Returns kValuationInfinity for x = 0.
inline int valuation(const RF& x, const Place& v, int twist = 0) {
    if (x.is_zero()) return kValuationInfinity;
    if (v.is_infinity()) {
        RF y = infinity_chart(x, twist);
        PolyQ spoly = PolyQ::monomial(Rat(1), 1);
        int ord = 0;
        PolyQ n = y.num();
        while (n[0].is_zero()) { n = PolyQ::div_exact(n, spoly); ++ord; }
        PolyQ d = y.den();
        while (d[0].is_zero()) { d = PolyQ::div_exact(d, spoly); --ord; }
        return ord;
    }
    return multiplicity(x.num(), v.poly()) - multiplicity(x.den(), v.poly());
}

inline int valuation(const PolyQ& x, const Place& v, int twist = 0) {
    return valuation(RF(x), v, twist);
}

}  // namespace ellsplit
