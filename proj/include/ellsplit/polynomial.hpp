// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ellsplit/rational.hpp"

namespace ellsplit {

template <class K>
concept FieldLike = requires(K a, K b) {
    { a + b } -> std::convertible_to<K>;
    { a - b } -> std::convertible_to<K>;
    { a * b } -> std::convertible_to<K>;
    { -a } -> std::convertible_to<K>;
    { a == b } -> std::convertible_to<bool>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.inv() } -> std::convertible_to<K>;
    K(1);
};

/// Univariate polynomial over K, coefficient index = power. Canonical form:
/// no trailing zero coefficients; the zero polynomial has an empty vector
/// and its degree is a tagged "minus infinity" (std::nullopt), never -1.
template <class K>
class Poly {
public:
    Poly() = default;
    Poly(const K& c) { c_.push_back(c); trim(); }
    Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly one() { return Poly(K(1)); }
    /// c * x^n
    static Poly monomial(const K& c, int n) {
        std::vector<K> v(static_cast<size_t>(n) + 1, K(0));
        v.back() = c;
        return Poly(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == K(1); }
    bool is_constant() const { return c_.size() <= 1; }

    std::optional<int> degree() const {
        if (c_.empty()) return std::nullopt;
        return static_cast<int>(c_.size()) - 1;
    }
    /// Degree of a known-nonzero polynomial.
    int deg() const {
        if (c_.empty()) throw internal_error("deg() of zero polynomial");
        return static_cast<int>(c_.size()) - 1;
    }

    const K& operator[](size_t i) const {
        static const K kzero = K(0);
        return i < c_.size() ? c_[i] : kzero;
    }
    const std::vector<K>& coeffs() const { return c_; }
    const K& leading() const {
        if (c_.empty()) throw internal_error("leading coefficient of zero polynomial");
        return c_.back();
    }
    K constant_term() const { return c_.empty() ? K(0) : c_[0]; }

    bool is_monic() const { return !c_.empty() && c_.back() == K(1); }

    Poly operator-() const {
        Poly r(*this);
        for (auto& c : r.c_) c = -c;
        return r;
    }
    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<K> v(std::max(a.c_.size(), b.c_.size()), K(0));
        for (size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) v[i] = v[i] + b.c_[i];
        return Poly(std::move(v));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<K> v(a.c_.size() + b.c_.size() - 1, K(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
        return Poly(std::move(v));
    }
    friend Poly operator*(const K& s, const Poly& p) {
        Poly r(p);
        for (auto& c : r.c_) c = s * c;
        r.trim();
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(long e) const {
        Poly r = one(), b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    /// Quotient and remainder; requires invertible leading coefficient of b.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw user_error("polynomial division by zero");
        Poly r = a;
        std::vector<K> q;
        const int db = b.deg();
        const K linv = b.leading().inv();
        if (r.is_zero() || r.deg() < db) return {Poly(), r};
        q.assign(static_cast<size_t>(r.deg() - db) + 1, K(0));
        while (!r.is_zero() && r.deg() >= db) {
            const int k = r.deg() - db;
            const K f = r.leading() * linv;
            q[static_cast<size_t>(k)] = f;
            std::vector<K> nc = r.c_;
            for (int i = 0; i <= db; ++i) nc[static_cast<size_t>(k + i)] = nc[static_cast<size_t>(k + i)] - f * b.c_[static_cast<size_t>(i)];
            nc.pop_back();
            r = Poly(std::move(nc));
        }
        return {Poly(std::move(q)), r};
    }
    friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
    friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

    /// Exact division; throws internal_error if the remainder is nonzero.
    static Poly div_exact(const Poly& a, const Poly& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) throw internal_error("inexact polynomial division");
        return q;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<K> v(c_.size() - 1, K(0));
        for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = K(static_cast<int>(i)) * c_[i];
        return Poly(std::move(v));
    }

    template <class V>
    V eval(const V& x) const {
        V r = V(0);
        for (size_t i = c_.size(); i-- > 0;) r = r * x + V(c_[i]);
        return r;
    }
    K operator()(const K& x) const { return eval<K>(x); }

    /// p(q(x)) by Horner.
    Poly compose(const Poly& q) const {
        Poly r;
        for (size_t i = c_.size(); i-- > 0;) r = r * q + Poly(c_[i]);
        return r;
    }

    /// Reverse coefficients and pad to length n+1: x^n * p(1/x).
    Poly reversed(int n) const {
        if (static_cast<size_t>(n) + 1 < c_.size()) throw internal_error("reversed(): n below degree");
        std::vector<K> v(static_cast<size_t>(n) + 1, K(0));
        for (size_t i = 0; i < c_.size(); ++i) v[static_cast<size_t>(n) - i] = c_[i];
        return Poly(std::move(v));
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return leading().inv() * *this;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<K> c_;
};

template <FieldLike K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
    while (!b.is_zero()) {
        auto r = Poly<K>::divmod(a, b).second;
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;  // gcd(0,0) = 0
    return a.monic();
}

/// g = gcd, plus s,t with s*a + t*b = g.
template <FieldLike K>
struct ExtGcd {
    Poly<K> g, s, t;
};

template <FieldLike K>
ExtGcd<K> poly_ext_gcd(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> r0 = a, r1 = b;
    Poly<K> s0 = Poly<K>::one(), s1;
    Poly<K> t0, t1 = Poly<K>::one();
    while (!r1.is_zero()) {
        auto [q, r2] = Poly<K>::divmod(r0, r1);
        r0 = r1; r1 = r2;
        Poly<K> s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    if (r0.is_zero()) return {r0, s0, t0};
    K l = r0.leading().inv();
    return {l * r0, l * s0, l * t0};
}

/// Yun's squarefree decomposition (characteristic 0):
/// p = lc * prod_i out[i-1]^i with the out[i] monic, squarefree, coprime.
template <FieldLike K>
std::vector<Poly<K>> squarefree_decomposition(const Poly<K>& p) {
    if (p.is_zero()) throw user_error("squarefree decomposition of zero");
    std::vector<Poly<K>> out;
    Poly<K> f = p.monic();
    if (f.is_constant()) return out;
    Poly<K> fp = f.derivative();
    Poly<K> a = poly_gcd(f, fp);
    Poly<K> b = Poly<K>::div_exact(f, a);
    Poly<K> c = Poly<K>::div_exact(fp, a);
    Poly<K> d = c - b.derivative();
    while (!(b.is_constant())) {
        Poly<K> ai = poly_gcd(b, d);
        out.push_back(ai.monic());
        b = Poly<K>::div_exact(b, ai);
        c = Poly<K>::div_exact(d, ai);
        d = c - b.derivative();
    }
    return out;
}

/// p = c * h^2 with h monic, iff every irreducible factor of p has even
/// multiplicity. Works over any coefficient field via Yun.
template <FieldLike K>
std::optional<std::pair<K, Poly<K>>> square_up_to_constant(const Poly<K>& p) {
    if (p.is_zero()) throw user_error("square_up_to_constant of zero");
    auto parts = squarefree_decomposition(p);
    Poly<K> h = Poly<K>::one();
    for (size_t i = 0; i < parts.size(); ++i) {
        const int mult = static_cast<int>(i) + 1;
        if (mult % 2 != 0) {
            if (!parts[i].is_constant()) return std::nullopt;
            continue;
        }
        h = h * parts[i].pow(mult / 2);
    }
    return std::make_pair(p.leading(), h);
}

using PolyQ = Poly<Rat>;

/// Canonical total order: by degree (zero first), then coefficients from the
/// top power down.
inline int compare(const PolyQ& a, const PolyQ& b) {
    if (a.is_zero() && b.is_zero()) return 0;
    if (a.is_zero()) return -1;
    if (b.is_zero()) return 1;
    if (a.deg() != b.deg()) return a.deg() < b.deg() ? -1 : 1;
    for (int i = a.deg(); i >= 0; --i) {
        int c = compare(a[static_cast<size_t>(i)], b[static_cast<size_t>(i)]);
        if (c != 0) return c;
    }
    return 0;
}

namespace detail {
inline bool needs_parens_in_product(const std::string& s) {
    // a bare monomial or constant does not need parentheses
    for (char ch : s)
        if (ch == '+' || (ch == '-' && &ch != s.data())) return true;
    return false;
}
}  // namespace detail

/// Grammar-compatible rendering, e.g. "36*t^2 - 12150*t".
inline std::string to_string(const PolyQ& p, const std::string& var = "t") {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (int i = p.deg(); i >= 0; --i) {
        const Rat& c = p[static_cast<size_t>(i)];
        if (c.is_zero()) continue;
        Rat a = c.abs();
        if (first) {
            if (c.sign() < 0) out += "-";
            first = false;
        } else {
            out += c.sign() < 0 ? " - " : " + ";
        }
        const bool unit = a.is_one();
        if (i == 0) {
            out += a.str();
        } else {
            if (!unit) out += a.str() + "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

}  // namespace ellsplit
