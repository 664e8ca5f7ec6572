// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ellsplit/rational.hpp"

namespace ellsplit {

/// Squarefree part decomposition n = m * r^2 with m squarefree (sign kept
/// in m). Uses trial division plus Brent rho for stray large cofactors.
namespace tdetail {

inline mpz_class brent_rho(const mpz_class& n) {
    if (n % 2 == 0) return 2;
    mpz_class y = 2, c = 1, m = 128, g = 1, r = 1, q = 1, xs, x;
    while (g == 1) {
        x = y;
        for (mpz_class i = 0; i < r; ++i) y = (y * y + c) % n;
        mpz_class k = 0;
        while (k < r && g == 1) {
            xs = y;
            mpz_class rk = r - k;
            mpz_class lim = m < rk ? m : rk;
            for (mpz_class i = 0; i < lim; ++i) {
                y = (y * y + c) % n;
                q = q * abs(x - y) % n;
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
        if (r > 1000000) { c += 1; r = 1; y = 2; q = 1; g = 1; }
    }
    if (g == n) {
        g = 1;
        while (g == 1) {
            xs = (xs * xs + c) % n;
            g = gcd(abs(x - xs), n);
        }
    }
    return g;
}

inline void factor_mpz(mpz_class n, std::vector<mpz_class>& out) {
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 32)) { out.push_back(n); return; }
    if (is_perfect_square(n)) {
        mpz_class r = isqrt(n);
        factor_mpz(r, out);
        factor_mpz(r, out);
        return;
    }
    mpz_class d = brent_rho(n);
    factor_mpz(d, out);
    factor_mpz(n / d, out);
}

}  // namespace tdetail

/// n = m * r^2, m squarefree (carrying the sign of n); n must be nonzero.
inline std::pair<mpz_class, mpz_class> squarefree_part(mpz_class n) {
    if (n == 0) throw user_error("squarefree_part of zero");
    mpz_class m = n < 0 ? mpz_class(-1) : mpz_class(1);
    n = abs(n);
    mpz_class r = 1;
    for (long p = 2; p < 100000 && n > 1; p = (p == 2 ? 3 : p + 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            if (e % 2) m *= p;
            for (int i = 0; i < e / 2; ++i) r *= p;
        }
        if (mpz_class(p) * p > n) break;
    }
    if (n > 1) {
        std::vector<mpz_class> primes;
        tdetail::factor_mpz(n, primes);
        std::sort(primes.begin(), primes.end());
        for (size_t i = 0; i < primes.size();) {
            size_t j = i;
            while (j < primes.size() && primes[j] == primes[i]) ++j;
            size_t e = j - i;
            if (e % 2) m *= primes[i];
            for (size_t k = 0; k < e / 2; ++k) r *= primes[i];
            i = j;
        }
    }
    return {m, r};
}

/// Multiquadratic constant-field tower Q(sqrt(m_1), ..., sqrt(m_k)), each
/// m_i a squarefree integer not a square in the subtower below it. Elements
/// are coordinate vectors over the 2^k basis of radical products.
class QuadTower {
public:
    QuadTower() = default;
    explicit QuadTower(int cap) : cap_(cap) {}

    const std::vector<long>& generators() const { return gens_; }
    int height() const { return static_cast<int>(gens_.size()); }
    int cap() const { return cap_; }
    size_t dim() const { return size_t(1) << gens_.size(); }

    friend bool operator==(const QuadTower& a, const QuadTower& b) {
        return a.gens_ == b.gens_;
    }
    friend bool operator!=(const QuadTower& a, const QuadTower& b) { return !(a == b); }

    /// Product of generators selected by bitmask, as a rational.
    Rat basis_square(size_t mask) const {
        Rat r(1);
        for (size_t i = 0; i < gens_.size(); ++i)
            if (mask & (size_t(1) << i)) r *= Rat(gens_[i]);
        return r;
    }

    /// If sqrt(m) (m squarefree) already lies in the tower, return the basis
    /// mask and rational multiplier: sqrt(m) = mult * basis[mask].
    std::optional<std::pair<size_t, Rat>> locate_sqrt(const mpz_class& m) const {
        for (size_t mask = 0; mask < dim(); ++mask) {
            Rat prod = basis_square(mask);
            // m * prod must be a positive square
            Rat q = Rat(m) * prod;
            if (auto r = sqrt_exact(q)) return std::make_pair(mask, *r / prod);
        }
        return std::nullopt;
    }

    /// Extend by sqrt(m); throws tower_overflow at the height cap.
    QuadTower extended(const mpz_class& m) const {
        if (locate_sqrt(m)) return *this;
        if (height() >= cap_)
            throw tower_overflow("tower overflow: height cap " + std::to_string(cap_) +
                                 " reached adjoining sqrt(" + m.get_str() + ")");
        if (!m.fits_slong_p()) throw user_error("tower generator too large");
        QuadTower t = *this;
        t.gens_.push_back(static_cast<long>(m.get_si()));
        return t;
    }

    /// True if this tower's generator list extends (or equals) other's.
    bool contains(const QuadTower& other) const {
        if (other.gens_.size() > gens_.size()) return false;
        return std::equal(other.gens_.begin(), other.gens_.end(), gens_.begin());
    }

    std::string str() const {
        std::string s = "Q(";
        for (size_t i = 0; i < gens_.size(); ++i) {
            if (i) s += ", ";
            s += "sqrt(" + std::to_string(gens_[i]) + ")";
        }
        return s + ")";
    }

private:
    std::vector<long> gens_;
    int cap_ = 3;
};

/// Element of a QuadTower; coordinates over the radical-product basis.
class TowerElem {
public:
    TowerElem() : c_(1, Rat(0)) {}
    TowerElem(int n) : c_(1, Rat(n)) {}
    TowerElem(const Rat& r) : c_(1, r) {}
    TowerElem(QuadTower tw, std::vector<Rat> coords) : tw_(std::move(tw)), c_(std::move(coords)) {
        if (c_.size() != tw_.dim()) throw internal_error("tower element dimension mismatch");
    }

    static TowerElem generator_sqrt(const QuadTower& tw, size_t mask) {
        std::vector<Rat> c(tw.dim(), Rat(0));
        c[mask] = Rat(1);
        return TowerElem(tw, std::move(c));
    }

    const QuadTower& tower() const { return tw_; }
    const std::vector<Rat>& coords() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_) if (!x.is_zero()) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < c_.size(); ++i) if (!c_[i].is_zero()) return false;
        return true;
    }
    Rat rational_part() const { return c_[0]; }
    Rat as_rational() const {
        if (!is_rational()) throw user_error("tower element is irrational");
        return c_[0];
    }

    /// Lift into a larger tower (its generator list must extend ours).
    TowerElem lifted(const QuadTower& bigger) const {
        if (!bigger.contains(tw_)) throw internal_error("tower lift into incompatible tower");
        std::vector<Rat> c(bigger.dim(), Rat(0));
        for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i];
        return TowerElem(bigger, std::move(c));
    }

    friend TowerElem align(const TowerElem& a, const QuadTower& tw) {
        return a.tower() == tw ? a : a.lifted(tw);
    }

    TowerElem operator-() const {
        TowerElem r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend TowerElem operator+(const TowerElem& a0, const TowerElem& b0) {
        auto [a, b] = TowerElem::merge(a0, b0);
        for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
        return a;
    }
    friend TowerElem operator-(const TowerElem& a, const TowerElem& b) { return a + (-b); }
    friend TowerElem operator*(const TowerElem& a0, const TowerElem& b0) {
        auto [a, b] = TowerElem::merge(a0, b0);
        std::vector<Rat> r(a.c_.size(), Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j].is_zero()) continue;
                r[i ^ j] += a.c_[i] * b.c_[j] * a.tw_.basis_square(i & j);
            }
        }
        return TowerElem(a.tw_, std::move(r));
    }
    friend bool operator==(const TowerElem& a0, const TowerElem& b0) {
        auto [a, b] = TowerElem::merge(a0, b0);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const TowerElem& a, const TowerElem& b) { return !(a == b); }

    /// Conjugate flipping the signs of sqrt(m_i) for i in mask.
    TowerElem conjugate(size_t mask) const {
        TowerElem r = *this;
        for (size_t i = 0; i < c_.size(); ++i) {
            size_t bits = i & mask;
            int parity = __builtin_popcountll(bits) & 1;
            if (parity) r.c_[i] = -r.c_[i];
        }
        return r;
    }

    TowerElem inv() const {
        if (is_zero()) throw user_error("inverse of zero tower element");
        // product of all nontrivial conjugates, divided by the full norm
        TowerElem prod(Rat(1));
        prod = prod.lifted(tw_);
        for (size_t mask = 1; mask < tw_.dim(); ++mask) prod = prod * conjugate(mask);
        TowerElem full = *this * prod;
        if (!full.is_rational()) throw internal_error("tower norm not rational");
        Rat n = full.rational_part();
        if (n.is_zero()) throw internal_error("zero norm for nonzero tower element");
        TowerElem r = prod;
        Rat ninv = n.inv();
        for (auto& x : r.c_) x *= ninv;
        return r;
    }

    std::string str() const;

private:
    static std::pair<TowerElem, TowerElem> merge(const TowerElem& a, const TowerElem& b) {
        if (a.tw_ == b.tw_) return {a, b};
        if (a.tw_.contains(b.tw_)) return {a, b.lifted(a.tw_)};
        if (b.tw_.contains(a.tw_)) return {a.lifted(b.tw_), b};
        throw internal_error("incompatible towers");
    }
    QuadTower tw_;
    std::vector<Rat> c_;
};

inline int compare(const TowerElem& a, const TowerElem& b) {
    TowerElem d = a - b;
    for (size_t i = d.coords().size(); i-- > 0;) {
        int s = d.coords()[i].sign();
        if (s != 0) return s;
    }
    return 0;
}

inline std::string TowerElem::str() const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        Rat a = c_[i].abs();
        if (first) {
            if (c_[i].sign() < 0) out += "-";
            first = false;
        } else {
            out += c_[i].sign() < 0 ? " - " : " + ";
        }
        if (i == 0) { out += a.str(); continue; }
        std::string rad = "sqrt(" + tw_.basis_square(i).str() + ")";
        if (a.is_one()) out += rad;
        else out += a.str() + "*" + rad;
    }
    return out;
}

/// Result of taking sqrt(c) against a tower: the (possibly extended) tower
/// and the element representing the root.
struct TowerSqrt {
    QuadTower tower;
    TowerElem root;
};

/// sqrt of a nonzero rational inside the tower, extending it on demand.
inline TowerSqrt tower_sqrt(const Rat& c, const QuadTower& tw) {
    if (c.is_zero()) throw user_error("tower_sqrt of zero");
    auto [mn, rn] = squarefree_part(c.num());
    auto [md, rd] = squarefree_part(c.den());
    // c = (mn*md) * (rn/(rd*md))^2
    mpz_class m = mn * md;
    Rat scale = Rat(rn, rd * md);
    if (m == 1) return {tw, TowerElem(scale).lifted(tw)};
    if (auto loc = tw.locate_sqrt(m)) {
        TowerElem r = TowerElem::generator_sqrt(tw, loc->first);
        TowerElem s(loc->second * scale);
        return {tw, r * s.lifted(tw)};
    }
    QuadTower ext = tw.extended(m);
    auto loc = ext.locate_sqrt(m);
    if (!loc) throw internal_error("extension lost its own generator");
    TowerElem r = TowerElem::generator_sqrt(ext, loc->first);
    return {ext, r * TowerElem(loc->second * scale).lifted(ext)};
}

}  // namespace ellsplit
