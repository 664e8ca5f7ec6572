// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>

#include "ellsplit/polynomial.hpp"

namespace ellsplit {

/// Element of K(t): num/den with den monic and gcd(num, den) = 1.
template <FieldLike K>
class RatFunc {
public:
    RatFunc() : num_(), den_(Poly<K>::one()) {}
    RatFunc(const K& c) : num_(Poly<K>(c)), den_(Poly<K>::one()) {}
    RatFunc(int c) : num_(Poly<K>(K(c))), den_(Poly<K>::one()) {}
    RatFunc(const Poly<K>& p) : num_(p), den_(Poly<K>::one()) {}
    RatFunc(const Poly<K>& num, const Poly<K>& den) : num_(num), den_(den) { reduce(); }

    const Poly<K>& num() const { return num_; }
    const Poly<K>& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }

    RatFunc operator-() const { return RatFunc(-num_, den_, nocheck{}); }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw user_error("division by zero rational function");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    RatFunc inv() const {
        if (is_zero()) throw user_error("inverse of zero rational function");
        return RatFunc(den_, num_);
    }

    RatFunc pow(long e) const {
        if (e < 0) return inv().pow(-e);
        RatFunc r(K(1)), b(*this);
        while (e > 0) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    /// Substitute t -> q(t) for a rational function q.
    RatFunc compose(const RatFunc& q) const {
        RatFunc n = num_.template eval<RatFunc>(q);
        RatFunc d = den_.template eval<RatFunc>(q);
        return n / d;
    }

private:
    struct nocheck {};
    RatFunc(Poly<K> n, Poly<K> d, nocheck) : num_(std::move(n)), den_(std::move(d)) {}
    void reduce() {
        if (den_.is_zero()) throw user_error("rational function with zero denominator");
        if (num_.is_zero()) { den_ = Poly<K>::one(); return; }
        Poly<K> g = poly_gcd(num_, den_);
        if (!g.is_one()) {
            num_ = Poly<K>::div_exact(num_, g);
            den_ = Poly<K>::div_exact(den_, g);
        }
        K l = den_.leading();
        if (!(l == K(1))) {
            K li = l.inv();
            num_ = li * num_;
            den_ = li * den_;
        }
    }
    Poly<K> num_, den_;
};

/// f = c * g^2 with c a constant of K, iff every place of K(t) divides f to
/// even order (the at-infinity order is then even automatically).
template <FieldLike K>
std::optional<std::pair<K, RatFunc<K>>> rf_square_up_to_constant(const RatFunc<K>& f) {
    if (f.is_zero()) throw user_error("rf_square_up_to_constant of zero");
    auto s = square_up_to_constant(f.num() * f.den());
    if (!s) return std::nullopt;
    return std::make_pair(s->first, RatFunc<K>(s->second, f.den()));
}

using RF = RatFunc<Rat>;

inline int compare(const RF& a, const RF& b) {
    int c = compare(a.den(), b.den());
    if (c != 0) return c;
    return compare(a.num(), b.num());
}

inline std::string to_string(const RF& f, const std::string& var = "t") {
    if (f.is_polynomial()) return to_string(f.num(), var);
    std::string n = to_string(f.num(), var), d = to_string(f.den(), var);
    auto wrap = [](const std::string& s) {
        bool simple = s.find_first_of("+-*/^ ") == std::string::npos;
        return simple ? s : "(" + s + ")";
    };
    return wrap(n) + "/" + wrap(d);
}

}  // namespace ellsplit
