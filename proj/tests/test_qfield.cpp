// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ellsplit/factor.hpp"
#include "ellsplit/places.hpp"
#include "ellsplit/polynomial.hpp"
#include "ellsplit/rational_function.hpp"
#include "ellsplit/tower.hpp"

using namespace ellsplit;

namespace {

PolyQ P(std::initializer_list<long> coeffs_low_to_high) {
    std::vector<Rat> v;
    for (long c : coeffs_low_to_high) v.emplace_back(c);
    return PolyQ(std::move(v));
}

const PolyQ T = P({0, 1});

PolyQ random_poly(std::mt19937& rng, int maxdeg) {
    std::uniform_int_distribution<int> degd(0, maxdeg), cd(-9, 9);
    int d = degd(rng);
    std::vector<Rat> v;
    for (int i = 0; i <= d; ++i) v.emplace_back(cd(rng));
    PolyQ p(std::move(v));
    return p;
}

// the three surface-A coefficient polynomials, used across the suite
const PolyQ a4A = T * (T - P({5825})) * (T - P({2025}));
const PolyQ a6A = Rat(36) * T.pow(2) * (T - P({2025})).pow(2);

}  // namespace

TEST_CASE("rational basics") {
    Rat a(3, 6);
    CHECK(a == Rat(1, 2));
    CHECK(a.str() == "1/2");
    CHECK(Rat(-4, 8).str() == "-1/2");
    CHECK((Rat(2, 3) + Rat(1, 6)) == Rat(5, 6));
    CHECK(Rat(4).pow(3) == Rat(64));
    CHECK(sqrt_exact(Rat(49, 4)).value() == Rat(7, 2));
    CHECK(!sqrt_exact(Rat(2)).has_value());
    CHECK(Rat::from_string("-12/18") == Rat(-2, 3));
}

TEST_CASE("polynomial canonical form and degree marker") {
    PolyQ z;
    CHECK(z.is_zero());
    CHECK(!z.degree().has_value());
    CHECK(P({1, 2, 0, 0}).deg() == 1);
    CHECK(P({0}).is_zero());
    CHECK_THROWS_AS(z.deg(), internal_error);
}

TEST_CASE("poly_gcd golden values") {
    // gcd(t^2-1, t-1) = t-1
    CHECK(poly_gcd(P({-1, 0, 1}), P({-1, 1})) == P({-1, 1}));
    // gcd(t, 1) = 1
    CHECK(poly_gcd(T, PolyQ::one()) == PolyQ::one());
    // gcd(0, 0) = 0
    CHECK(poly_gcd(PolyQ(), PolyQ()).is_zero());
    // gcd of the surface-A middle coefficients: t(t-5825)(t-2025) vs 36t^2(t-2025)^2
    CHECK(poly_gcd(a4A, a6A) == T * (T - P({2025})));
}

TEST_CASE("gcd divides both inputs and any common divisor divides it") {
    std::mt19937 rng(7);
    for (int i = 0; i < 60; ++i) {
        PolyQ d = random_poly(rng, 3);
        PolyQ a = random_poly(rng, 4) * d;
        PolyQ b = random_poly(rng, 4) * d;
        PolyQ g = poly_gcd(a, b);
        if (a.is_zero() && b.is_zero()) {
            CHECK(g.is_zero());
            continue;
        }
        if (!a.is_zero()) CHECK(PolyQ::divmod(a, g).second.is_zero());
        if (!b.is_zero()) CHECK(PolyQ::divmod(b, g).second.is_zero());
        if (!d.is_zero() && !g.is_zero()) CHECK(PolyQ::divmod(g, d).second.is_zero());
    }
}

TEST_CASE("factor golden values") {
    auto f1 = factor(P({-1, 0, 1}));
    REQUIRE(f1.factors.size() == 2);
    CHECK(f1.factors[0].first == P({-1, 1}));
    CHECK(f1.factors[1].first == P({1, 1}));
    CHECK(f1.unit == Rat(1));

    auto f2 = factor(P({1, 0, 1}));
    REQUIRE(f2.factors.size() == 1);
    CHECK(f2.factors[0].first == P({1, 0, 1}));
    CHECK(f2.factors[0].second == 1);

    CHECK_THROWS_AS(factor(PolyQ()), user_error);
}

TEST_CASE("factor of the surface-A discriminant") {
    PolyQ a2 = P({271350, -98});
    PolyQ c4 = Rat(16) * a2 * a2 - Rat(48) * a4A;
    PolyQ c6 = Rat(-64) * a2.pow(3) + Rat(288) * a2 * a4A - Rat(864) * a6A;
    PolyQ disc = Rat(1, 1728) * (c4.pow(3) - c6 * c6);
    REQUIRE(disc.deg() == 9);
    auto f = factor(disc);
    // contains t and (t-2025) with multiplicity 2 each, plus one irreducible quintic
    bool saw_t = false, saw_shift = false, saw_quintic = false;
    for (auto& [g, m] : f.factors) {
        if (g == T) { saw_t = true; CHECK(m == 2); }
        if (g == T - P({2025})) { saw_shift = true; CHECK(m == 2); }
        if (g.deg() == 5) { saw_quintic = true; CHECK(m == 1); }
    }
    CHECK(saw_t);
    CHECK(saw_shift);
    CHECK(saw_quintic);
    // round-trip
    PolyQ prod = PolyQ(f.unit);
    for (auto& [g, m] : f.factors) prod = prod * g.pow(m);
    CHECK(prod == disc);
}

TEST_CASE("factor round-trips on random inputs") {
    std::mt19937 rng(11);
    for (int i = 0; i < 25; ++i) {
        PolyQ a = random_poly(rng, 4), b = random_poly(rng, 3);
        if (a.is_zero() || b.is_zero()) continue;
        PolyQ p = a * b;
        auto f = factor(p);
        PolyQ prod = PolyQ(f.unit);
        for (auto& [g, m] : f.factors) {
            CHECK(g.is_monic());
            prod = prod * g.pow(m);
        }
        CHECK(prod == p);
    }
}

TEST_CASE("valuation at finite places and infinity") {
    RF x(T * T, T - P({1}));
    CHECK(valuation(x, Place::finite(T)) == 2);
    CHECK(valuation(x, Place::finite(T - P({1}))) == -1);
    CHECK(valuation(RF(), Place::finite(T)) == kValuationInfinity);
    // weight-0 infinity valuation is deg(den) - deg(num)
    CHECK(valuation(x, Place::infinity()) == -1);
    CHECK(valuation(RF(PolyQ::one(), T), Place::infinity()) == 1);
    // weight-2 twist on a d=2 surface: x-coordinate t^2 is finite at infinity
    CHECK(valuation(RF(T * T), Place::infinity(), 2) == 0);
}

TEST_CASE("valuation additivity and the degree formula") {
    std::mt19937 rng(13);
    for (int i = 0; i < 40; ++i) {
        PolyQ n1 = random_poly(rng, 3), d1 = random_poly(rng, 2);
        PolyQ n2 = random_poly(rng, 3), d2 = random_poly(rng, 2);
        if (n1.is_zero() || d1.is_zero() || n2.is_zero() || d2.is_zero()) continue;
        RF x(n1, d1), y(n2, d2);
        if (x.is_zero() || y.is_zero()) continue;
        // collect candidate places from both numerators and denominators
        PolyQ support = x.num() * x.den() * y.num() * y.den();
        auto f = factor(support);
        for (auto& [pi, m] : f.factors) {
            Place v = Place::finite(pi);
            CHECK(valuation(x * y, v) == valuation(x, v) + valuation(y, v));
        }
        Place inf = Place::infinity();
        CHECK(valuation(x * y, inf) == valuation(x, inf) + valuation(y, inf));
        // degree formula: sum of valuation * deg over all places is 0
        long total = valuation(x, inf);
        auto fx = factor(x.num() * x.den());
        for (auto& [pi, m] : fx.factors) total += static_cast<long>(valuation(x, Place::finite(pi))) * pi.deg();
        CHECK(total == 0);
    }
}

TEST_CASE("square_up_to_constant") {
    auto r1 = square_up_to_constant(Rat(4) * T * T);
    REQUIRE(r1.has_value());
    CHECK(r1->first == Rat(4));
    CHECK(r1->second == T);

    CHECK(!square_up_to_constant(T * (T - P({1}))).has_value());

    auto r3 = square_up_to_constant(a6A);
    REQUIRE(r3.has_value());
    CHECK(r3->first == Rat(36));
    CHECK(r3->second == T * (T - P({2025})));

    std::mt19937 rng(17);
    for (int i = 0; i < 30; ++i) {
        PolyQ p = random_poly(rng, 3);
        if (p.is_zero() || p.is_constant()) continue;
        auto sq = square_up_to_constant(p * p);
        REQUIRE(sq.has_value());
        CHECK(sq->first * (sq->second * sq->second).leading() * Rat(1) == p.leading() * p.leading());
        CHECK(Rat(1) * sq->first * (sq->second * sq->second)[0] * Rat(1) ==
              (p * p)[0] * Rat(1));
        // p^2 * squarefree nonconstant q -> none
        PolyQ q = T - P({9});
        if (!PolyQ::divmod(p * p, q).second.is_zero())
            CHECK(!square_up_to_constant(p * p * q).has_value());
    }
}

TEST_CASE("tower sqrt") {
    QuadTower tw;
    auto r1 = tower_sqrt(Rat(4), tw);
    CHECK(r1.tower.height() == 0);
    CHECK(r1.root == TowerElem(Rat(2)));

    auto r2 = tower_sqrt(Rat(2), tw);
    CHECK(r2.tower.height() == 1);
    CHECK(r2.root * r2.root == TowerElem(Rat(2)).lifted(r2.tower));

    // 1/64 -> 1/8 (the constant of the second split certificate)
    auto r3 = tower_sqrt(Rat(1, 64), tw);
    CHECK(r3.tower.height() == 0);
    CHECK(r3.root == TowerElem(Rat(1, 8)));

    // sqrt(-1) extends with a negative generator
    auto r4 = tower_sqrt(Rat(-1), tw);
    CHECK(r4.tower.height() == 1);
    CHECK(r4.root * r4.root == TowerElem(Rat(-1)).lifted(r4.tower));

    // height cap produces an explicit overflow error
    QuadTower small(1);
    auto r5 = tower_sqrt(Rat(2), small);
    CHECK_THROWS_AS(tower_sqrt(Rat(3), r5.tower), tower_overflow);
}

TEST_CASE("tower arithmetic") {
    QuadTower tw;
    tw = tw.extended(2);
    tw = tw.extended(3);
    TowerElem s2 = TowerElem::generator_sqrt(tw, 1);
    TowerElem s3 = TowerElem::generator_sqrt(tw, 2);
    CHECK(s2 * s2 == TowerElem(Rat(2)).lifted(tw));
    CHECK(s3 * s3 == TowerElem(Rat(3)).lifted(tw));
    TowerElem x = s2 + s3;
    TowerElem y = x.inv();
    CHECK(x * y == TowerElem(Rat(1)).lifted(tw));
    CHECK((s2 * s3) * (s2 * s3) == TowerElem(Rat(6)).lifted(tw));
    // sqrt(6) is already in Q(sqrt2, sqrt3)
    auto r = tower_sqrt(Rat(6), tw);
    CHECK(r.tower.height() == 2);
    CHECK(r.root * r.root == TowerElem(Rat(6)).lifted(tw));
}

TEST_CASE("rational function canonical form") {
    RF x(Rat(2) * T, Rat(4) * T * T);
    CHECK(x.num() == PolyQ(Rat(1, 2)));
    CHECK(x.den() == T);
    CHECK(to_string(x) == "(1/2)/t");
    CHECK(to_string(RF(T * T - PolyQ::one(), T + PolyQ::one())) == "t - 1");
    RF y = x + x;
    CHECK(y == RF(PolyQ::one(), T));
}

TEST_CASE("poly over rational functions (bivariate layer)") {
    using RFPoly = Poly<RF>;
    RFPoly f({RF(T), RF(1), RF(T - P({3}))});
    RFPoly g({RF(-T), RF(1)});
    auto [q, r] = RFPoly::divmod(f, g);
    CHECK(q * g + r == f);
    CHECK(poly_gcd(f * g, g) == g.monic());
}
