// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "ellsplit/expr.hpp"
#include "ellsplit/surface.hpp"

using namespace ellsplit;

namespace {

PolyQ pp(const std::string& s) {
    RF f = parse_expression(s);
    REQUIRE(f.is_polynomial());
    return f.num();
}

// "surface A": rational elliptic surface with two I2 fibers and a III fiber
WeierstrassSurface surfA() {
    return WeierstrassSurface(pp("271350 - 98*t"), pp("t*(t-5825)*(t-2025)"),
                              pp("36*t^2*(t-2025)^2"), 2);
}
// "surface B": rational elliptic surface with an I4 fiber and a III fiber
WeierstrassSurface surfB() {
    return WeierstrassSurface(pp("25*t+9"), pp("144*t^2 + t^3"), pp("16*t^4"), 2);
}

Section sec(const std::string& x, const std::string& y) {
    return Section(parse_expression(x), parse_expression(y));
}

const Section s0A = sec("0", "6*t^2 - 12150*t");
const Section s1A = sec("-32*t", "2*t^2 - 6930*t");
const Section s2A = sec("-20*t", "4*t^2 - 4500*t");
const Section s0B = sec("0", "4*t^2");
const Section s1B = sec("-16*t", "-48*t");
const Section s2B = sec("-15*t", "t^2 + 45*t");

}  // namespace

TEST_CASE("invariants identities") {
    // y^2 = x^3 + 1
    WeierstrassSurface S(PolyQ(), PolyQ(), PolyQ::one(), 2);
    auto inv = invariants(S);
    CHECK(inv.c4.is_zero());
    CHECK(inv.c6 == PolyQ(Rat(-864)));
    CHECK(inv.disc == PolyQ(Rat(-432)));
    CHECK(inv.j.is_zero());
    CHECK(invariants(surfA()).j == RF(surfA().c4().pow(3)) / RF(surfA().discriminant()));
    CHECK_THROWS_AS(WeierstrassSurface(PolyQ(), PolyQ(), PolyQ(), 2), user_error);

    auto invA = invariants(surfA());
    CHECK(multiplicity(invA.disc, pp("t")) == 2);
    CHECK(multiplicity(invA.disc, pp("t - 2025")) == 2);
    auto invB = invariants(surfB());
    CHECK(multiplicity(invB.disc, pp("t")) == 4);
}

TEST_CASE("on_curve checks") {
    auto A = surfA();
    CHECK(on_curve(A, s0A));
    CHECK(on_curve(A, s1A));
    CHECK(on_curve(A, s2A));
    WeierstrassSurface S(PolyQ(), PolyQ(), PolyQ::one(), 2);
    CHECK(on_curve(S, sec("0", "1")));
    CHECK(!on_curve(S, sec("1", "1")));
    auto B = surfB();
    CHECK(on_curve(B, s0B));
    CHECK(on_curve(B, s1B));
    CHECK(on_curve(B, s2B));
}

TEST_CASE("group law reproduces the displayed sections on surface A") {
    auto A = surfA();
    Section d0 = dbl(A, s0A);
    CHECK(d0.x == RF(pp("1/144*t^2 + 1231/72*t - 5143775/144")));
    CHECK(d0.y == RF(pp("-1/1728*t^3 - 2335/576*t^2 + 13493375/576*t - 29962489375/1728")));
    Section s12 = add(A, s1A, s2A);
    CHECK(s12.x == RF(pp("1/36*t^2 + 435/2*t - 921375/4")));
    CHECK(s12.y == RF(pp("-1/216*t^3 - 1181/24*t^2 - 41625/8*t + 373156875/8")));
    CHECK(on_curve(A, d0));
    CHECK(on_curve(A, s12));
}

TEST_CASE("group law on surface B; the recorded y of 2s0 is a misprint") {
    auto B = surfB();
    Section d0 = dbl(B, s0B);
    CHECK(d0.x == RF(pp("1/64*t^2 - 41/2*t + 315")));
    CHECK(on_curve(B, d0));
    // the reference value as printed (a term lost its factor of t) fails
    // both the comparison and the curve equation; the corrected reading
    // matches the group-law result exactly.
    RF printed = RF(pp("-1/512*t^3 - 55/32*t^2 + 2637/8 - 5670"));
    CHECK(d0.y != printed);
    CHECK(!on_curve(B, Section(d0.x, printed)));
    CHECK(d0.y == RF(pp("-1/512*t^3 - 55/32*t^2 + 2637/8*t - 5670")));

    Section s12 = add(B, s1B, s2B);
    CHECK(s12.x == RF(pp("t^2 + 192*t + 8640")));
    CHECK(s12.y == RF(pp("-t^3 - 301*t^2 - 27936*t - 803520")));
}

TEST_CASE("identity, inverses, small multiples") {
    auto A = surfA();
    CHECK(add(A, s0A, Section()) == s0A);
    CHECK(add(A, s0A, neg(s0A)).is_zero());
    CHECK(mul(A, 1, s1A) == s1A);
    CHECK(mul(A, 0, s1A).is_zero());
    CHECK(mul(A, -1, s1A) == neg(s1A));
}

TEST_CASE("pool closure, commutativity, associativity") {
    auto A = surfA();
    std::vector<Section> pool = {Section(), s0A, neg(s0A), s1A, neg(s1A), s2A, neg(s2A),
                                 dbl(A, s0A), add(A, s1A, s2A), add(A, s0A, s1A)};
    for (const auto& P : pool)
        for (const auto& Q : pool) {
            Section R1 = add(A, P, Q);
            CHECK(on_curve(A, R1));
            CHECK(R1 == add(A, Q, P));
        }
    // associativity over unordered triples (adds of adds get large quickly)
    std::vector<Section> small = {s0A, s1A, s2A, neg(s0A), add(A, s1A, s2A), Section()};
    for (size_t i = 0; i < small.size(); ++i)
        for (size_t j = i; j < small.size(); ++j)
            for (size_t k = j; k < small.size(); ++k) {
                const Section &P = small[i], &Q = small[j], &R = small[k];
                CHECK(add(A, add(A, P, Q), R) == add(A, P, add(A, Q, R)));
            }
}

TEST_CASE("mul distributes over addition of multipliers") {
    auto B = surfB();
    for (long m = -3; m <= 3; ++m)
        for (long n = -2; n <= 2; ++n)
            CHECK(mul(B, m + n, s1B) == add(B, mul(B, m, s1B), mul(B, n, s1B)));
}

TEST_CASE("two-torsion sections") {
    CHECK(two_torsion_sections(surfA()).empty());
    CHECK(two_torsion_sections(surfB()).empty());
    // y^2 = x(x-1)(x-t): full rational 2-torsion
    PolyQ t = pp("t");
    WeierstrassSurface S(-(t + PolyQ::one()), t, PolyQ(), 2);
    auto tor = two_torsion_sections(S);
    REQUIRE(tor.size() == 3);
    for (auto& T : tor) {
        CHECK(on_curve(S, T));
        CHECK(T.y.is_zero());
        CHECK(dbl(S, T).is_zero());
    }
}

TEST_CASE("three-torsion is empty on both surfaces") {
    CHECK(three_torsion_sections(surfA()).empty());
    CHECK(three_torsion_sections(surfB()).empty());
}

TEST_CASE("sections over a tower") {
    // y^2 = x^3 - 2 x has the 2-torsion (sqrt 2, 0) over Q(sqrt 2)
    WeierstrassSurface S(PolyQ(), PolyQ(Rat(-2)), PolyQ(), 2);
    auto tor = two_torsion_sections(S);
    REQUIRE(tor.size() == 3);
    int rational = 0, towered = 0;
    for (auto& T : tor) {
        CHECK(on_curve(S, T));
        (T.tower.height() == 0 ? rational : towered)++;
    }
    CHECK(rational == 1);
    CHECK(towered == 2);
    // group law over the tower: doubling a tower point stays on the curve
    auto P = tor[1];
    CHECK(dbl(S, P).is_zero());
}
