// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ellsplit/polynomial.hpp"

namespace ellsplit {

struct Factorization {
    Rat unit;  // leading coefficient; p = unit * prod(factors^mult)
    std::vector<std::pair<PolyQ, int>> factors;  // monic irreducible, canonical order
};

namespace fdetail {

// ----- dense arithmetic over F_p, p a small odd prime ---------------------
using FpPoly = std::vector<uint64_t>;

inline void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline uint64_t fp_inv(uint64_t a, uint64_t p) {
    int64_t t0 = 0, t1 = 1;
    int64_t r0 = static_cast<int64_t>(p), r1 = static_cast<int64_t>(a % p);
    while (r1 != 0) {
        int64_t q = r0 / r1;
        int64_t r2 = r0 - q * r1; r0 = r1; r1 = r2;
        int64_t t2 = t0 - q * t1; t0 = t1; t1 = t2;
    }
    int64_t res = t0 % static_cast<int64_t>(p);
    if (res < 0) res += static_cast<int64_t>(p);
    return static_cast<uint64_t>(res);
}
inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    fp_trim(c);
    return c;
}
inline FpPoly fp_mod(FpPoly a, const FpPoly& m, uint64_t p) {
    fp_trim(a);
    const size_t dm = m.size() - 1;
    const uint64_t linv = fp_inv(m.back(), p);
    while (a.size() > dm) {
        uint64_t f = (a.back() * linv) % p;
        size_t k = a.size() - 1 - dm;
        if (f != 0)
            for (size_t i = 0; i < m.size(); ++i) {
                uint64_t sub = (f * m[i]) % p;
                a[k + i] = (a[k + i] + p - sub) % p;
            }
        a.pop_back();
        fp_trim(a);
        if (a.size() <= dm) break;
    }
    fp_trim(a);
    return a;
}
inline FpPoly fp_gcd(FpPoly a, FpPoly b, uint64_t p) {
    fp_trim(a); fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        uint64_t linv = fp_inv(a.back(), p);
        for (auto& c : a) c = (c * linv) % p;
    }
    return a;
}
inline FpPoly fp_deriv(const FpPoly& a, uint64_t p) {
    if (a.size() <= 1) return {};
    FpPoly d(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) d[i - 1] = (a[i] * (i % p)) % p;
    fp_trim(d);
    return d;
}
inline FpPoly fp_quo(const FpPoly& a, const FpPoly& b, uint64_t p) {
    FpPoly r = a, q;
    fp_trim(r);
    const size_t db = b.size() - 1;
    const uint64_t linv = fp_inv(b.back(), p);
    if (r.size() <= db) return {};
    q.assign(r.size() - db, 0);
    while (r.size() > db) {
        uint64_t f = (r.back() * linv) % p;
        size_t k = r.size() - 1 - db;
        q[k] = f;
        for (size_t i = 0; i < b.size(); ++i) {
            uint64_t sub = (f * b[i]) % p;
            r[k + i] = (r[k + i] + p - sub) % p;
        }
        fp_trim(r);
        if (r.size() <= db) break;
    }
    return q;
}

/// Berlekamp factorization of a monic squarefree polynomial over F_p.
inline std::vector<FpPoly> berlekamp(const FpPoly& f, uint64_t p) {
    const size_t n = f.size() - 1;
    if (n == 1) return {f};
    // x^p mod f
    FpPoly xp = {0, 1};
    {
        FpPoly base = {0, 1}, acc = {1};
        uint64_t e = p;
        while (e > 0) {
            if (e & 1) acc = fp_mod(fp_mul(acc, base, p), f, p);
            base = fp_mod(fp_mul(base, base, p), f, p);
            e >>= 1;
        }
        xp = acc;
    }
    // Q matrix: rows are x^{p*i} mod f
    std::vector<FpPoly> rows(n);
    rows[0] = {1};
    for (size_t i = 1; i < n; ++i) rows[i] = fp_mod(fp_mul(rows[i - 1], xp, p), f, p);
    // M = Q^T - I as column-major system; kernel of (Q - I) acting on coeff vectors
    std::vector<std::vector<uint64_t>> M(n, std::vector<uint64_t>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < rows[i].size(); ++j) M[j][i] = rows[i][j];
        M[i][i] = (M[i][i] + p - 1) % p;
    }
    // kernel basis by Gaussian elimination
    std::vector<int> pivot_of_col(n, -1);
    size_t rank = 0;
    for (size_t col = 0; col < n && rank < n; ++col) {
        size_t sel = rank;
        while (sel < n && M[sel][col] == 0) ++sel;
        if (sel == n) continue;
        std::swap(M[sel], M[rank]);
        uint64_t inv = fp_inv(M[rank][col], p);
        for (auto& v : M[rank]) v = (v * inv) % p;
        for (size_t r = 0; r < n; ++r) {
            if (r != rank && M[r][col] != 0) {
                uint64_t fmul = M[r][col];
                for (size_t c2 = 0; c2 < n; ++c2) {
                    uint64_t sub = (fmul * M[rank][c2]) % p;
                    M[r][c2] = (M[r][c2] + p - sub) % p;
                }
            }
        }
        pivot_of_col[col] = static_cast<int>(rank);
        ++rank;
    }
    std::vector<FpPoly> kernel;
    for (size_t col = 0; col < n; ++col) {
        if (pivot_of_col[col] != -1) continue;
        std::vector<uint64_t> v(n, 0);
        v[col] = 1;
        for (size_t c2 = 0; c2 < n; ++c2) {
            if (pivot_of_col[c2] != -1) {
                uint64_t val = M[static_cast<size_t>(pivot_of_col[c2])][col];
                v[c2] = (p - val) % p;
            }
        }
        FpPoly kp(v.begin(), v.end());
        fp_trim(kp);
        kernel.push_back(kp);
    }
    const size_t r = kernel.size();
    std::vector<FpPoly> factors = {f};
    if (r <= 1) return factors;
    for (const auto& v : kernel) {
        if (factors.size() >= r) break;
        if (v.size() <= 1) continue;  // constants split nothing
        std::vector<FpPoly> next;
        for (const auto& u : factors) {
            if (factors.size() + next.size() > r + 8) break;
            if (u.size() - 1 <= 1) { next.push_back(u); continue; }
            std::vector<FpPoly> pieces;
            FpPoly rem = u;
            for (uint64_t s0 = 0; s0 < p && rem.size() > 1; ++s0) {
                FpPoly vs = v;
                if (vs.empty()) vs = {0};
                vs[0] = (vs[0] + p - s0 % p) % p;
                fp_trim(vs);
                FpPoly d = vs.empty() ? FpPoly{} : fp_gcd(rem, vs, p);
                if (d.size() > 1 && d.size() < rem.size()) {
                    pieces.push_back(d);
                    rem = fp_quo(rem, d, p);
                    uint64_t linv = fp_inv(rem.back(), p);
                    for (auto& c : rem) c = (c * linv) % p;
                }
            }
            if (rem.size() > 1) pieces.push_back(rem);
            for (auto& q : pieces) next.push_back(q);
        }
        factors = std::move(next);
    }
    return factors;
}

// ----- integer-coefficient polynomials -------------------------------------
using ZPoly = std::vector<mpz_class>;

inline void z_trim(ZPoly& a) { while (!a.empty() && a.back() == 0) a.pop_back(); }
inline ZPoly z_mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly c(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}
inline ZPoly z_mod_coeffs(ZPoly a, const mpz_class& m) {
    for (auto& c : a) { c %= m; if (c < 0) c += m; }
    z_trim(a);
    return a;
}
inline ZPoly z_center(ZPoly a, const mpz_class& m) {
    mpz_class half = m / 2;
    for (auto& c : a) { c %= m; if (c < 0) c += m; if (c > half) c -= m; }
    z_trim(a);
    return a;
}
// division of integer polys where divisor is monic
inline std::pair<ZPoly, ZPoly> z_divmod_monic(ZPoly a, const ZPoly& b) {
    z_trim(a);
    if (b.empty() || b.back() != 1) throw internal_error("z_divmod_monic: divisor not monic");
    const size_t db = b.size() - 1;
    if (a.size() <= db) return {{}, a};
    ZPoly q(a.size() - db, mpz_class(0));
    while (a.size() > db) {
        mpz_class f = a.back();
        size_t k = a.size() - 1 - db;
        q[k] = f;
        for (size_t i = 0; i < b.size(); ++i) a[k + i] -= f * b[i];
        z_trim(a);
        if (a.size() <= db) break;
    }
    return {q, a};
}

// two-factor Hensel: f = u*v mod m, with su+tv = 1 mod p; lift to mod m^2
struct HenselPair {
    ZPoly u, v, s, t;
};
inline void hensel_step(const ZPoly& f, HenselPair& h, const mpz_class& m) {
    const mpz_class m2 = m * m;
    // e = f - u*v
    ZPoly e = f;
    {
        ZPoly uv = z_mul(h.u, h.v);
        e.resize(std::max(e.size(), uv.size()), mpz_class(0));
        for (size_t i = 0; i < uv.size(); ++i) e[i] -= uv[i];
        e = z_mod_coeffs(std::move(e), m2);
    }
    // u' = u + (t*e mod u), v' = v + (s*e + q*v-ish)
    ZPoly te = z_mod_coeffs(z_mul(h.t, e), m2);
    auto [q1, r1] = z_divmod_monic(te, h.u);
    ZPoly unew = h.u;
    unew.resize(std::max(unew.size(), r1.size()), mpz_class(0));
    for (size_t i = 0; i < r1.size(); ++i) unew[i] += r1[i];
    unew = z_mod_coeffs(std::move(unew), m2);
    ZPoly se = z_mod_coeffs(z_mul(h.s, e), m2);
    ZPoly qv = z_mod_coeffs(z_mul(q1, h.v), m2);
    ZPoly vnew = h.v;
    vnew.resize(std::max({vnew.size(), se.size(), qv.size()}), mpz_class(0));
    for (size_t i = 0; i < se.size(); ++i) vnew[i] += se[i];
    for (size_t i = 0; i < qv.size(); ++i) vnew[i] += qv[i];
    vnew = z_mod_coeffs(std::move(vnew), m2);
    // keep monic shape exactly
    // Bezout update: b = s*u' + t*v' - 1
    ZPoly b;
    {
        ZPoly su = z_mul(h.s, unew), tv = z_mul(h.t, vnew);
        b.resize(std::max(su.size(), tv.size()), mpz_class(0));
        for (size_t i = 0; i < su.size(); ++i) b[i] += su[i];
        for (size_t i = 0; i < tv.size(); ++i) b[i] += tv[i];
        if (b.empty()) b.push_back(mpz_class(-1)); else b[0] -= 1;
        b = z_mod_coeffs(std::move(b), m2);
    }
    ZPoly sb = z_mod_coeffs(z_mul(h.s, b), m2);
    auto [q2, r2] = z_divmod_monic(sb, vnew);
    ZPoly snew = h.s;
    snew.resize(std::max(snew.size(), r2.size()), mpz_class(0));
    for (size_t i = 0; i < r2.size(); ++i) snew[i] -= r2[i];
    snew = z_mod_coeffs(std::move(snew), m2);
    ZPoly tb = z_mod_coeffs(z_mul(h.t, b), m2);
    ZPoly qu2 = z_mod_coeffs(z_mul(q2, unew), m2);
    ZPoly tnew = h.t;
    tnew.resize(std::max({tnew.size(), tb.size(), qu2.size()}), mpz_class(0));
    for (size_t i = 0; i < tb.size(); ++i) tnew[i] -= tb[i];
    for (size_t i = 0; i < qu2.size(); ++i) tnew[i] -= qu2[i];
    tnew = z_mod_coeffs(std::move(tnew), m2);
    h.u = std::move(unew); h.v = std::move(vnew);
    h.s = std::move(snew); h.t = std::move(tnew);
}

// extended gcd over F_p polynomials: s*a + t*b = 1 (a, b coprime)
inline std::pair<FpPoly, FpPoly> fp_bezout(const FpPoly& a, const FpPoly& b, uint64_t p) {
    FpPoly r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    auto sub_scaled = [&](const FpPoly& x, const FpPoly& y, const FpPoly& q) {
        // x - q*y
        FpPoly qy = fp_mul(q, y, p);
        FpPoly r = x;
        r.resize(std::max(r.size(), qy.size()), 0);
        for (size_t i = 0; i < qy.size(); ++i) r[i] = (r[i] + p - qy[i]) % p;
        fp_trim(r);
        return r;
    };
    while (!r1.empty()) {
        FpPoly q = fp_quo(r0, r1, p);
        FpPoly r2 = sub_scaled(r0, r1, q);
        r0 = r1; r1 = r2;
        FpPoly s2 = sub_scaled(s0, s1, q); s0 = s1; s1 = s2;
        FpPoly t2 = sub_scaled(t0, t1, q); t0 = t1; t1 = t2;
    }
    if (r0.size() != 1) throw internal_error("fp_bezout: inputs not coprime");
    uint64_t inv = fp_inv(r0[0], p);
    for (auto& c : s0) c = (c * inv) % p;
    for (auto& c : t0) c = (c * inv) % p;
    return {s0, t0};
}

inline ZPoly fp_to_z(const FpPoly& a) {
    ZPoly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mpz_class(static_cast<unsigned long>(a[i]));
    return r;
}
inline FpPoly z_to_fp(const ZPoly& a, uint64_t p) {
    FpPoly r(a.size());
    mpz_class pm(static_cast<unsigned long>(p));
    for (size_t i = 0; i < a.size(); ++i) {
        mpz_class c = a[i] % pm;
        if (c < 0) c += pm;
        r[i] = c.get_ui();
    }
    fp_trim(r);
    return r;
}

/// Lift f = prod(parts) from mod p to exactly mod M (f monic over Z), where
/// M is the fixed power p^(2^k) shared by every tree level.
inline std::vector<ZPoly> hensel_tree(const ZPoly& f, const std::vector<FpPoly>& parts,
                                      uint64_t p, const mpz_class& M) {
    if (parts.size() == 1) return {z_mod_coeffs(f, M)};
    const size_t half = parts.size() / 2;
    FpPoly u0 = {1}, v0 = {1};
    for (size_t i = 0; i < half; ++i) u0 = fp_mul(u0, parts[i], p);
    for (size_t i = half; i < parts.size(); ++i) v0 = fp_mul(v0, parts[i], p);
    auto [s0, t0] = fp_bezout(u0, v0, p);
    HenselPair h{fp_to_z(u0), fp_to_z(v0), fp_to_z(s0), fp_to_z(t0)};
    mpz_class m(static_cast<unsigned long>(p));
    while (m < M) {
        hensel_step(f, h, m);
        m *= m;
    }
    std::vector<FpPoly> left(parts.begin(), parts.begin() + static_cast<long>(half));
    std::vector<FpPoly> right(parts.begin() + static_cast<long>(half), parts.end());
    auto lf = hensel_tree(h.u, left, p, M);
    auto rf = hensel_tree(h.v, right, p, M);
    lf.insert(lf.end(), rf.begin(), rf.end());
    return lf;
}

/// Zassenhaus factorization of a monic squarefree integer polynomial.
inline std::vector<ZPoly> factor_monic_squarefree_z(const ZPoly& f) {
    const size_t n = f.size() - 1;
    if (n <= 1) return {f};
    static const uint64_t primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                                      47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101};
    uint64_t p = 0;
    std::vector<FpPoly> modular;
    for (uint64_t cand : primes) {
        FpPoly fp = z_to_fp(f, cand);
        if (fp.size() != f.size()) continue;  // degree dropped
        FpPoly g = fp_gcd(fp, fp_deriv(fp, cand), cand);
        if (g.size() == 1) {
            p = cand;
            modular = berlekamp(fp, cand);
            break;
        }
    }
    if (p == 0) throw internal_error("no usable prime for factorization");
    if (modular.size() == 1) return {f};
    std::sort(modular.begin(), modular.end(),
              [](const FpPoly& a, const FpPoly& b) { return a.size() < b.size(); });
    // Mignotte-style bound: |coeff of monic factor| <= 2^n * ||f||_2
    mpz_class norm2 = 0;
    for (const auto& c : f) norm2 += c * c;
    mpz_class bound = (mpz_class(1) << static_cast<unsigned>(n)) * (isqrt(norm2) + 1);
    mpz_class target = 2 * bound + 1;
    mpz_class modulus(static_cast<unsigned long>(p));
    while (modulus < target) modulus *= modulus;
    std::vector<ZPoly> lifted = hensel_tree(f, modular, p, modulus);

    std::vector<ZPoly> result;
    ZPoly rem = f;
    std::vector<ZPoly> pool = lifted;
    size_t subset_size = 1;
    while (!pool.empty() && 2 * subset_size <= pool.size() + 1) {
        bool found = false;
        std::vector<size_t> idx(subset_size);
        for (size_t i = 0; i < subset_size; ++i) idx[i] = i;
        while (true) {
            ZPoly prod = {mpz_class(1)};
            for (size_t i : idx) prod = z_mod_coeffs(z_mul(prod, pool[i]), modulus);
            prod = z_center(std::move(prod), modulus);
            if (!prod.empty() && prod.back() == 1) {
                auto [q, r] = z_divmod_monic(rem, prod);
                if (r.empty()) {
                    result.push_back(prod);
                    rem = q;
                    std::vector<ZPoly> np;
                    for (size_t i2 = 0, j = 0; i2 < pool.size(); ++i2) {
                        if (j < idx.size() && idx[j] == i2) { ++j; continue; }
                        np.push_back(pool[i2]);
                    }
                    pool = std::move(np);
                    found = true;
                    break;
                }
            }
            // next combination
            long pos = static_cast<long>(subset_size) - 1;
            while (pos >= 0 && idx[static_cast<size_t>(pos)] == pool.size() - subset_size + static_cast<size_t>(pos)) --pos;
            if (pos < 0) break;
            ++idx[static_cast<size_t>(pos)];
            for (size_t i2 = static_cast<size_t>(pos) + 1; i2 < subset_size; ++i2) idx[i2] = idx[i2 - 1] + 1;
        }
        if (!found) ++subset_size;
    }
    z_trim(rem);
    if (!(rem.size() == 1 && rem[0] == 1)) result.push_back(rem);
    return result;
}

inline PolyQ z_to_q(const ZPoly& a) {
    std::vector<Rat> v;
    v.reserve(a.size());
    for (const auto& c : a) v.emplace_back(c);
    return PolyQ(std::move(v));
}

/// Factor a monic squarefree PolyQ into monic irreducible PolyQ.
inline std::vector<PolyQ> factor_monic_squarefree(const PolyQ& a) {
    if (a.deg() == 1) return {a};
    // clear denominators: g(y) = D^n * a(y/D) is monic integral
    mpz_class D(1);
    for (const auto& c : a.coeffs()) D = lcm(D, c.den());
    const int n = a.deg();
    ZPoly g(static_cast<size_t>(n) + 1);
    mpz_class Dpow(1);
    for (int j = n; j >= 0; --j) {
        Rat cj = a[static_cast<size_t>(j)] * Rat(Dpow);
        if (!cj.is_integer()) throw internal_error("denominator clearing failed");
        g[static_cast<size_t>(j)] = cj.num();
        Dpow *= D;
    }
    auto zf = factor_monic_squarefree_z(g);
    std::vector<PolyQ> out;
    Rat Dr(D);
    for (const auto& zfac : zf) {
        // map back: factor(x) = D^{-deg} * zfac(D x)
        PolyQ q = z_to_q(zfac);
        std::vector<Rat> v(q.coeffs());
        Rat scale(1);
        for (size_t i = 0; i < v.size(); ++i) { v[i] = v[i] * scale; scale = scale * Dr; }
        PolyQ mapped = PolyQ(std::move(v)).monic();
        out.push_back(mapped);
    }
    return out;
}

}  // namespace fdetail

/// Complete factorization over Q: p = unit * prod(f_i^m_i), f_i monic
/// irreducible; deterministic order (degree, then coefficient order).
inline Factorization factor(const PolyQ& p) {
    if (p.is_zero()) throw user_error("factor: zero polynomial");
    Factorization out;
    out.unit = p.leading();
    if (p.is_constant()) return out;
    PolyQ m = p.monic();
    auto parts = squarefree_decomposition(m);
    std::map<int, std::vector<PolyQ>> found;  // multiplicity -> factors
    for (size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].is_constant()) continue;
        auto irr = fdetail::factor_monic_squarefree(parts[i]);
        for (auto& f : irr) found[static_cast<int>(i) + 1].push_back(f);
    }
    for (auto& [mult, fs] : found)
        for (auto& f : fs) out.factors.emplace_back(f, mult);
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
        if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
        int c = compare(a.first, b.first);
        if (c != 0) return c < 0;
        return a.second < b.second;
    });
    return out;
}

/// All rational roots of p (with multiplicity collapsed), via factorization.
inline std::vector<Rat> rational_roots(const PolyQ& p) {
    std::vector<Rat> roots;
    if (p.is_zero() || p.is_constant()) return roots;
    auto f = factor(p);
    for (const auto& [g, mult] : f.factors)
        if (g.deg() == 1) roots.push_back(-g[0]);
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// All monic divisors of p (including 1), canonical order. Throws if the
/// divisor lattice is unreasonably large.
inline std::vector<PolyQ> monic_divisors(const PolyQ& p, size_t limit = 8192) {
    auto f = factor(p);
    std::vector<PolyQ> divs = {PolyQ::one()};
    for (const auto& [g, mult] : f.factors) {
        std::vector<PolyQ> next;
        next.reserve(divs.size() * static_cast<size_t>(mult + 1));
        for (const auto& d : divs) {
            PolyQ cur = d;
            next.push_back(cur);
            for (int e = 1; e <= mult; ++e) {
                cur = cur * g;
                next.push_back(cur);
            }
        }
        divs = std::move(next);
        if (divs.size() > limit) throw user_error("divisor enumeration too large");
    }
    std::sort(divs.begin(), divs.end(), [](const PolyQ& a, const PolyQ& b) { return compare(a, b) < 0; });
    return divs;
}

/// Multiplicity of the monic irreducible pi in p (p nonzero).
inline int multiplicity(const PolyQ& p, const PolyQ& pi) {
    if (p.is_zero()) throw internal_error("multiplicity in zero polynomial");
    int k = 0;
    PolyQ r = p;
    while (true) {
        auto [q, rem] = PolyQ::divmod(r, pi);
        if (!rem.is_zero()) break;
        r = q;
        ++k;
    }
    return k;
}

}  // namespace ellsplit
