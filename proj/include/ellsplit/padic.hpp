// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
#include <tuple>
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ellsplit/places.hpp"

namespace ellsplit {

/// Context for computing in Q[t]/(pi^N), pi monic irreducible.
struct AnCtx {
    PolyQ pi;
    int N;
    PolyQ piN;

    AnCtx(PolyQ pi_, int N_) : pi(std::move(pi_)), N(N_), piN(pi.pow(N_)) {}
};

using AnCtxPtr = std::shared_ptr<const AnCtx>;

/// Element of Q[t]/(pi^N). A null context marks a plain rational constant,
/// merged into a context on first contact (this lets Poly<LocalElem> build
/// scalars without knowing the modulus).
class LocalElem {
public:
    LocalElem() = default;
    LocalElem(int n) : v_(Rat(n)) {}
    LocalElem(const Rat& r) : v_(r) {}
    LocalElem(AnCtxPtr ctx, PolyQ v) : ctx_(std::move(ctx)), v_(std::move(v)) { reduce(); }

    const AnCtxPtr& ctx() const { return ctx_; }
    const PolyQ& poly() const { return v_; }

    bool is_zero() const { return v_.is_zero(); }

    friend LocalElem operator+(const LocalElem& a, const LocalElem& b) {
        auto [x, y, c] = merge(a, b);
        return LocalElem(c, x + y);
    }
    friend LocalElem operator-(const LocalElem& a, const LocalElem& b) {
        auto [x, y, c] = merge(a, b);
        return LocalElem(c, x - y);
    }
    friend LocalElem operator*(const LocalElem& a, const LocalElem& b) {
        auto [x, y, c] = merge(a, b);
        return LocalElem(c, x * y);
    }
    LocalElem operator-() const { return LocalElem(ctx_, -v_); }
    friend bool operator==(const LocalElem& a, const LocalElem& b) {
        auto [x, y, c] = merge(a, b);
        (void)c;
        return x == y;
    }
    friend bool operator!=(const LocalElem& a, const LocalElem& b) { return !(a == b); }

    /// Inverse of a unit (valuation 0); in the residue field every nonzero
    /// element is a unit.
    LocalElem inv() const {
        if (!ctx_) {
            if (v_.is_zero()) throw user_error("inverse of zero");
            return LocalElem(v_[0].inv());
        }
        auto eg = poly_ext_gcd(v_, ctx_->piN);
        if (!eg.g.is_one()) throw internal_error("inverse of a non-unit local element");
        return LocalElem(ctx_, eg.s);
    }

    /// pi-adic valuation, capped at N (zero reports N).
    int val() const {
        if (!ctx_) return v_.is_zero() ? 1 << 28 : 0;
        if (v_.is_zero()) return ctx_->N;
        PolyQ r = v_;
        int k = 0;
        while (k < ctx_->N) {
            auto [q, rem] = PolyQ::divmod(r, ctx_->pi);
            if (!rem.is_zero()) break;
            r = q;
            ++k;
        }
        return k;
    }

    /// Exact division by pi^k (the result keeps the same modulus context,
    /// so the top k digits become unknown; use with enough slack).
    LocalElem shift_down(int k) const {
        if (k == 0) return *this;
        if (!ctx_) throw internal_error("shift_down without context");
        PolyQ r = v_;
        for (int i = 0; i < k; ++i) {
            auto [q, rem] = PolyQ::divmod(r, ctx_->pi);
            if (!rem.is_zero()) throw internal_error("shift_down: not divisible");
            r = q;
        }
        return LocalElem(ctx_, r);
    }

    /// Image in the residue field Q[t]/(pi).
    PolyQ residue() const {
        if (!ctx_) return v_;
        return PolyQ::divmod(v_, ctx_->pi).second;
    }

private:
    static std::tuple<PolyQ, PolyQ, AnCtxPtr> merge(const LocalElem& a, const LocalElem& b) {
        AnCtxPtr c = a.ctx_ ? a.ctx_ : b.ctx_;
        if (a.ctx_ && b.ctx_ && a.ctx_ != b.ctx_ && a.ctx_->piN != b.ctx_->piN)
            throw internal_error("mixing local elements of different moduli");
        return {a.v_, b.v_, c};
    }
    void reduce() {
        if (ctx_) v_ = PolyQ::divmod(v_, ctx_->piN).second;
    }
    AnCtxPtr ctx_;
    PolyQ v_;
};

/// Reduce a pi-integral rational function into Q[t]/(pi^N).
inline LocalElem reduce_rf(const RF& x, const AnCtxPtr& ctx) {
    LocalElem num(ctx, x.num());
    LocalElem den(ctx, x.den());
    if (den.val() > 0) throw internal_error("reduce_rf: non-integral rational function");
    return num * den.inv();
}

/// Newton lift of a square root of a unit u from a residue seed s0
/// (s0^2 = u mod pi).
inline LocalElem sqrt_unit(const LocalElem& u, const LocalElem& seed) {
    const auto& ctx = u.ctx();
    if (!ctx) throw internal_error("sqrt_unit needs a context");
    LocalElem r = seed;
    LocalElem half(Rat(1, 2));
    int prec = 1;
    while (prec < ctx->N) {
        r = (r + u * r.inv()) * half;
        prec *= 2;
    }
    if (!(r * r == u)) throw internal_error("sqrt_unit failed to converge");
    return r;
}

/// Element a + b*w of the unramified quadratic extension with w^2 = m
/// (m a non-square unit of the residue field, lifted as a constant).
struct QuadLocal {
    LocalElem a, b, m;

    QuadLocal() = default;
    QuadLocal(LocalElem a_, LocalElem b_, LocalElem m_)
        : a(std::move(a_)), b(std::move(b_)), m(std::move(m_)) {}

    bool is_zero() const { return a.is_zero() && b.is_zero(); }

    friend QuadLocal operator+(const QuadLocal& x, const QuadLocal& y) {
        return QuadLocal(x.a + y.a, x.b + y.b, x.m);
    }
    friend QuadLocal operator-(const QuadLocal& x, const QuadLocal& y) {
        return QuadLocal(x.a - y.a, x.b - y.b, x.m);
    }
    friend QuadLocal operator*(const QuadLocal& x, const QuadLocal& y) {
        return QuadLocal(x.a * y.a + x.b * y.b * x.m, x.a * y.b + x.b * y.a, x.m);
    }
    QuadLocal operator-() const { return QuadLocal(-a, -b, m); }

    QuadLocal inv() const {
        LocalElem n = a * a - b * b * m;
        LocalElem ni = n.inv();
        return QuadLocal(a * ni, -(b * ni), m);
    }

    int val() const { return std::min(a.val(), b.val()); }

    QuadLocal shift_down(int k) const { return QuadLocal(a.shift_down(k), b.shift_down(k), m); }
};

inline QuadLocal quad_embed(const LocalElem& a, const LocalElem& m) {
    return QuadLocal(a, LocalElem(Rat(0)), m);
}

/// Newton sqrt in the quadratic extension from a residue seed.
inline QuadLocal sqrt_unit_quad(const LocalElem& u, const QuadLocal& seed) {
    const auto& ctx = u.ctx();
    if (!ctx) throw internal_error("sqrt_unit_quad needs a context");
    QuadLocal r = seed;
    QuadLocal uu = quad_embed(u, seed.m);
    LocalElem half(Rat(1, 2));
    QuadLocal halfq = quad_embed(half, seed.m);
    int prec = 1;
    while (prec < ctx->N) {
        r = (r + uu * r.inv()) * halfq;
        prec *= 2;
    }
    return r;
}

// ----- residue field helpers (F = Q[t]/pi) ---------------------------------

/// a*b mod pi
inline PolyQ fq_mul(const PolyQ& a, const PolyQ& b, const PolyQ& pi) {
    return PolyQ::divmod(a * b, pi).second;
}
inline PolyQ fq_inv(const PolyQ& a, const PolyQ& pi) {
    auto eg = poly_ext_gcd(a, pi);
    if (!eg.g.is_one()) throw internal_error("fq_inv of zero or non-coprime element");
    return PolyQ::divmod(eg.s, pi).second;
}

/// Square root in F = Q[t]/pi when decidable: complete for deg pi = 1; for
/// larger degree, a non-square norm certifies failure and otherwise the
/// answer is unknown (nullopt with *decided = false).
inline std::optional<PolyQ> fq_sqrt(const PolyQ& a, const PolyQ& pi, bool* decided) {
    *decided = true;
    if (a.is_zero()) return PolyQ();
    if (pi.deg() == 1) {
        Rat v = a.is_zero() ? Rat(0) : a[0];
        auto r = sqrt_exact(v);
        if (!r) return std::nullopt;
        // canonical nonnegative root
        return PolyQ(r->abs());
    }
    // norm test: N(a) = Res(pi, a) must be a square in Q
    // resultant via the factor-free Euclidean scheme
    PolyQ f = pi, g = a;
    Rat res(1);
    while (!g.is_constant()) {
        auto [q, r] = PolyQ::divmod(f, g);
        int df = f.deg(), dg = g.deg();
        int dr = r.is_zero() ? -1 : r.deg();
        Rat lead = g.leading();
        res = res * lead.pow(df - (dr < 0 ? 0 : dr)) * Rat((df * dg) % 2 == 0 ? 1 : -1);
        if (r.is_zero()) return std::nullopt;  // shared factor: a not a unit
        f = g;
        g = r;
    }
    res = res * g[0].pow(f.deg());
    if (!sqrt_exact(res)) return std::nullopt;  // norm not a square: certainly no root
    *decided = false;
    return std::nullopt;
}

/// Hensel lift of the residue factorization f = (x - x0)^2 * h over the
/// residue field to f = g*h over Q[t]/(pi^N), for a monic cubic f whose
/// reduction has a double root x0 and a simple root elsewhere.
struct HenselCubic {
    Poly<LocalElem> g, h;  // f = g*h, g monic quadratic, h monic linear
    LocalElem rho;         // g = (x - rho)^2 - D
    LocalElem D;
};

inline HenselCubic hensel_cubic_split(const Poly<LocalElem>& f, const PolyQ& x0bar,
                                      const AnCtxPtr& ctx) {
    const PolyQ& pi = ctx->pi;
    // residue data
    auto res_poly = [&](const Poly<LocalElem>& p) {
        std::vector<Rat> dummy;
        std::vector<PolyQ> c;
        for (const auto& e : p.coeffs()) c.push_back(e.residue());
        return c;
    };
    auto fc = res_poly(f);
    // gbar = (x - x0)^2, hbar = fbar / gbar over F
    // work with F-polynomials as vectors of PolyQ mod pi
    // hbar is monic linear: x + (coeff)
    // fbar = x^3 + c2 x^2 + c1 x + c0; hbar = x + (c2 + 2 x0) mod pi
    PolyQ c2 = fc.size() > 2 ? fc[2] : PolyQ();
    PolyQ hbar0 = PolyQ::divmod(c2 + Rat(2) * x0bar, pi).second;
    // Bezout over F for gbar, hbar:
    // 1/(hbar evaluated at x0-ish) style closed form: since gbar = (x-x0)^2
    // and hbar = x + h0, Res = hbar(x0)^2 unit. Use generic polynomial
    // Bezout over F instead, via Poly<LocalElem> with an N=1 context.
    auto ctx1 = std::make_shared<AnCtx>(pi, 1);
    auto to1 = [&](const PolyQ& p) { return LocalElem(ctx1, p); };
    Poly<LocalElem> gbar({to1(fq_mul(x0bar, x0bar, pi)), to1(PolyQ::divmod(Rat(-2) * x0bar, pi).second), to1(PolyQ(Rat(1)))});
    Poly<LocalElem> hbar({to1(hbar0), to1(PolyQ(Rat(1)))});
    auto eg = poly_ext_gcd(gbar, hbar);
    if (!eg.g.is_one()) throw internal_error("hensel_cubic_split: factors not coprime");
    // lift coefficientwise into the full ring
    auto up = [&](const Poly<LocalElem>& p) {
        std::vector<LocalElem> c;
        for (const auto& e : p.coeffs()) c.emplace_back(ctx, e.poly());
        return Poly<LocalElem>(std::move(c));
    };
    Poly<LocalElem> g = up(gbar), h = up(hbar);
    Poly<LocalElem> sb = eg.s, tb = eg.t;  // over F: sb*gbar + tb*hbar = 1
    for (int k = 1; k < ctx->N; ++k) {
        Poly<LocalElem> e = f - g * h;
        // ek = (e / pi^k) mod pi as an F-polynomial
        std::vector<LocalElem> ekc;
        bool allzero = true;
        for (const auto& cfe : e.coeffs()) {
            if (cfe.val() < k) throw internal_error("hensel_cubic_split: lift out of order");
            PolyQ down = cfe.shift_down(k).residue();
            if (!down.is_zero()) allzero = false;
            ekc.emplace_back(ctx1, down);
        }
        if (allzero) continue;
        Poly<LocalElem> ek(std::move(ekc));
        // delta_g = (tb * ek) mod gbar ; delta_h = (ek - hbar*delta_g)/gbar
        Poly<LocalElem> dg = Poly<LocalElem>::divmod(tb * ek, gbar).second;
        Poly<LocalElem> dh = Poly<LocalElem>::div_exact(ek - hbar * dg, gbar);
        PolyQ pik = pi.pow(k);
        auto lift_scaled = [&](const Poly<LocalElem>& p) {
            std::vector<LocalElem> c;
            for (const auto& e2 : p.coeffs()) c.emplace_back(ctx, e2.poly() * pik);
            return Poly<LocalElem>(std::move(c));
        };
        g = g + lift_scaled(dg);
        h = h + lift_scaled(dh);
    }
    if (!(f == g * h)) throw internal_error("hensel_cubic_split: product check failed");
    HenselCubic out;
    out.g = g;
    out.h = h;
    LocalElem g1 = g[1];
    out.rho = -(g1 * LocalElem(Rat(1, 2)));
    out.D = out.rho * out.rho - g[0];
    return out;
}

}  // namespace ellsplit
