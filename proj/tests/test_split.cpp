// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "ellsplit/expr.hpp"
#include "ellsplit/split.hpp"

using namespace ellsplit;

namespace {

WeierstrassSurface surfA() {
    return WeierstrassSurface(parse_polynomial("271350 - 98*t"),
                              parse_polynomial("t*(t-5825)*(t-2025)"),
                              parse_polynomial("36*t^2*(t-2025)^2"), 2);
}
WeierstrassSurface surfB() {
    return WeierstrassSurface(parse_polynomial("25*t+9"), parse_polynomial("144*t^2 + t^3"),
                              parse_polynomial("16*t^4"), 2);
}
Section sec(const std::string& x, const std::string& y) {
    return Section(parse_expression(x), parse_expression(y));
}

TRF trf(const std::string& s, const QuadTower& tw) { return lift_rf(parse_expression(s), tw); }

}  // namespace

TEST_CASE("validate_branch on the surface-A cubic") {
    auto rep = validate_branch(BranchCurve::from_surface(surfA()));
    CHECK(rep.valid);
    CHECK(rep.reduced);
    REQUIRE(rep.irreducible.has_value());
    CHECK(*rep.irreducible);
    // non-monic rejected
    BranchCurve bad(1, 2, {PolyQ(), PolyQ(), PolyQ(), PolyQ(Rat(2))});
    CHECK(!validate_branch(bad).valid);
}

TEST_CASE("validate_branch on the generic odd model") {
    // x^{2g+1} - prod(t - i) for g = 2, d = 2
    PolyQ prod = PolyQ::one();
    for (int i = 1; i <= 10; ++i) prod = prod * (parse_polynomial("t") - PolyQ(Rat(i)));
    BranchCurve b(2, 2, {-prod, PolyQ(), PolyQ(), PolyQ(), PolyQ(), PolyQ::one()});
    auto rep = validate_branch(b);
    CHECK(rep.valid);
    CHECK(rep.reduced);
    REQUIRE(rep.irreducible.has_value());
    CHECK(*rep.irreducible);  // Eisenstein at t - 1
}

TEST_CASE("tangency of the two deltas on surface A") {
    auto A = surfA();
    Section s0 = sec("0", "6*t^2 - 12150*t");
    Section s1 = sec("-32*t", "2*t^2 - 6930*t");
    Section s2 = sec("-20*t", "4*t^2 - 4500*t");
    Section d1 = dbl(A, s0);
    Section d2 = add(A, s1, s2);
    for (const Section& s : {d1, d2}) {
        SplitInstance inst(BranchCurve::from_surface(A), s.x.num());
        auto rep = validate_tangency(inst);
        CHECK(rep.pass);
        CHECK(rep.geometric_points == 3);
        int total_mult = 0;
        for (auto& [pi, m] : rep.contacts) {
            CHECK(m % 2 == 0);
            total_mult += m * pi.deg();
        }
        CHECK(total_mult == 6);  // 3 points of multiplicity 2
    }
}

TEST_CASE("tangency failures") {
    // the odd model with f = 0: contact multiplicities all 1
    PolyQ prod = PolyQ::one();
    for (int i = 1; i <= 6; ++i) prod = prod * (parse_polynomial("t") - PolyQ(Rat(i)));
    BranchCurve b(1, 2, {-prod, PolyQ(), PolyQ(), PolyQ::one()});
    SplitInstance inst(b, PolyQ());
    auto rep = validate_tangency(inst);
    CHECK(!rep.pass);
    CHECK(!rep.even_multiplicities);
    // Delta a component of T
    WeierstrassSurface A = surfA();
    SplitInstance zero_inst(BranchCurve(1, 2, {PolyQ(), surfA().a4, surfA().a2, PolyQ::one()}),
                            PolyQ());
    CHECK_THROWS_AS(validate_tangency(zero_inst), user_error);
}

TEST_CASE("decompose reproduces the first split identity") {
    auto A = surfA();
    Section d1 = dbl(A, sec("0", "6*t^2 - 12150*t"));
    SplitInstance inst(BranchCurve::from_surface(A), d1.x.num());
    auto v = decompose(inst);
    REQUIRE(v.outcome == SplitOutcome::Splits);
    REQUIRE(v.dec.has_value());
    const auto& dec = *v.dec;
    CHECK(dec.sigma == 1);
    CHECK(dec.tower.height() == 0);
    // G = x in the x variable, i.e. u + f
    auto Gx = dec.G_in_x();
    REQUIRE(Gx.size() == 2);
    CHECK(Gx[0].is_zero());
    CHECK(Gx[1] == trf("1", dec.tower));
    // F = (t/12 - 5825/12) x + (6 t^2 - 12150 t)
    auto Fx = dec.F_in_x();
    REQUIRE(Fx.size() == 2);
    CHECK(Fx[1] == trf("t/12 - 5825/12", dec.tower));
    CHECK(Fx[0] == trf("6*t^2 - 12150*t", dec.tower));
    CHECK(verify_decomposition(inst, dec));
    CHECK(pullback_factor_check(inst, dec));
}

TEST_CASE("decompose reproduces the second split identity") {
    auto B = surfB();
    Section d1 = dbl(B, sec("0", "4*t^2"));
    SplitInstance inst(BranchCurve::from_surface(B), d1.x.num());
    auto v = decompose(inst);
    REQUIRE(v.outcome == SplitOutcome::Splits);
    const auto& dec = *v.dec;
    CHECK(dec.sigma == 1);
    // F = (1/8)((t + 144) x + 32 t^2), G = x
    auto Fx = dec.F_in_x();
    CHECK(Fx[1] == trf("(t + 144)/8", dec.tower));
    CHECK(Fx[0] == trf("4*t^2", dec.tower));
    auto Gx = dec.G_in_x();
    CHECK(Gx[0].is_zero());
    CHECK(verify_decomposition(inst, dec));
    CHECK(pullback_factor_check(inst, dec));
}

TEST_CASE("decompose refuses the non-splitting sections") {
    auto A = surfA();
    Section s12 = add(A, sec("-32*t", "2*t^2 - 6930*t"), sec("-20*t", "4*t^2 - 4500*t"));
    SplitInstance instA(BranchCurve::from_surface(A), s12.x.num());
    auto vA = decompose(instA);
    CHECK(vA.outcome == SplitOutcome::DoesNotSplit);
    CHECK(!vA.evidence.empty());

    auto B = surfB();
    Section s12B = add(B, sec("-16*t", "-48*t"), sec("-15*t", "t^2 + 45*t"));
    SplitInstance instB(BranchCurve::from_surface(B), s12B.x.num());
    auto vB = decompose(instB);
    CHECK(vB.outcome == SplitOutcome::DoesNotSplit);
}

TEST_CASE("decompose with bypassed validation still refuses odd tangency") {
    // failing tangency forces sigma a0^2 = c0 to be unsolvable
    PolyQ prod = PolyQ::one();
    for (int i = 1; i <= 6; ++i) prod = prod * (parse_polynomial("t") - PolyQ(Rat(i)));
    BranchCurve b(1, 2, {-prod, PolyQ(), PolyQ(), PolyQ::one()});
    SplitInstance inst(b, PolyQ());
    auto v = decompose(inst);
    CHECK(v.outcome == SplitOutcome::DoesNotSplit);
}

TEST_CASE("corrupted certificates fail the pullback check") {
    auto A = surfA();
    Section d1 = dbl(A, sec("0", "6*t^2 - 12150*t"));
    SplitInstance inst(BranchCurve::from_surface(A), d1.x.num());
    auto v = decompose(inst);
    REQUIRE(v.dec.has_value());
    auto dec = *v.dec;
    CHECK(pullback_factor_check(inst, dec));
    dec.G[0] = dec.G[0] + trf("1", dec.tower);  // perturb
    CHECK(!pullback_factor_check(inst, dec));
}

TEST_CASE("conjugate symmetry: negating F stays a valid certificate") {
    auto B = surfB();
    Section d1 = dbl(B, sec("0", "4*t^2"));
    SplitInstance inst(BranchCurve::from_surface(B), d1.x.num());
    auto v = decompose(inst);
    REQUIRE(v.dec.has_value());
    auto dec = *v.dec;
    for (auto& c : dec.F) c = -c;
    CHECK(verify_decomposition(inst, dec));
    CHECK(pullback_factor_check(inst, dec));
}

TEST_CASE("crosscheck agrees on all four principal instances") {
    auto A = surfA();
    auto B = surfB();
    Section s0A = sec("0", "6*t^2 - 12150*t");
    Section s1A = sec("-32*t", "2*t^2 - 6930*t");
    Section s2A = sec("-20*t", "4*t^2 - 4500*t");
    Section s0B = sec("0", "4*t^2");
    Section s1B = sec("-16*t", "-48*t");
    Section s2B = sec("-15*t", "t^2 + 45*t");
    auto r1 = crosscheck_verdicts(A, dbl(A, s0A));
    CHECK(r1.status == Agreement::Agree);
    CHECK(r1.divisibility == Divisibility::Divisible);
    auto r2 = crosscheck_verdicts(A, add(A, s1A, s2A));
    CHECK(r2.status == Agreement::Agree);
    CHECK(r2.divisibility == Divisibility::NotDivisible);
    auto r3 = crosscheck_verdicts(B, dbl(B, s0B));
    CHECK(r3.status == Agreement::Agree);
    CHECK(r3.divisibility == Divisibility::Divisible);
    auto r4 = crosscheck_verdicts(B, add(B, s1B, s2B));
    CHECK(r4.status == Agreement::Agree);
    CHECK(r4.divisibility == Divisibility::NotDivisible);
}

TEST_CASE("base change by the identity is the original surface") {
    auto A = surfA();
    Section s0 = sec("0", "6*t^2 - 12150*t");
    auto bc = base_change(A, parse_expression("t"), {s0});
    CHECK(bc.surface.a2 == A.a2);
    CHECK(bc.surface.a4 == A.a4);
    CHECK(bc.surface.a6 == A.a6);
    CHECK(bc.surface.d == 2);
    CHECK(bc.sections[0] == s0);
}

TEST_CASE("base change by t^2 doubles the degree and keeps verdicts") {
    auto A = surfA();
    Section s0 = sec("0", "6*t^2 - 12150*t");
    Section s1 = sec("-32*t", "2*t^2 - 6930*t");
    Section s2 = sec("-20*t", "4*t^2 - 4500*t");
    auto bc = base_change(A, parse_expression("t^2"), {dbl(A, s0), add(A, s1, s2)});
    CHECK(bc.surface.d == 4);
    for (auto& P : bc.sections) CHECK(on_curve(bc.surface, P));
    MWContext ctx(bc.surface, 3, false);
    CHECK(is_two_divisible(ctx, bc.sections[0]) == Divisibility::Divisible);
    CHECK(is_two_divisible(ctx, bc.sections[1]) == Divisibility::NotDivisible);
    // the ramified fiber at infinity became I0*
    auto inf = ctx.config.find(Place::infinity());
    REQUIRE(inf != nullptr);
    CHECK(inf->type == KodairaSymbol{KodairaKind::I0star, 0});
}

TEST_CASE("base change by 1/t is valid after rescaling") {
    auto A = surfA();
    Section s0 = sec("0", "6*t^2 - 12150*t");
    auto bc = base_change(A, parse_expression("1/t"), {s0, dbl(A, s0)});
    CHECK(bc.surface.d == 2);
    for (auto& P : bc.sections) CHECK(on_curve(bc.surface, P));
    auto cfg = classify_fibers(bc.surface);
    CHECK(cfg.euler_total == 12);
}

TEST_CASE("crosscheck stays in agreement over a spread of base changes") {
    auto A = surfA();
    auto B = surfB();
    Section s0A = sec("0", "6*t^2 - 12150*t");
    Section sumA = add(A, sec("-32*t", "2*t^2 - 6930*t"), sec("-20*t", "4*t^2 - 4500*t"));
    Section s0B = sec("0", "4*t^2");
    Section sumB = add(B, sec("-16*t", "-48*t"), sec("-15*t", "t^2 + 45*t"));
    std::vector<std::string> nus = {"t^2", "2*t+1", "3*t-1", "t^2+1", "t^2-t", "1/t"};
    int agrees = 0;
    for (const auto& nu : nus) {
        for (int which = 0; which < 2; ++which) {
            const auto& S = which ? B : A;
            Section plusd = which ? dbl(B, s0B) : dbl(A, s0A);
            Section minusd = which ? sumB : sumA;
            auto bc = base_change(S, parse_expression(nu), {plusd, minusd});
            auto r1 = crosscheck_verdicts(bc.surface, bc.sections[0]);
            CHECK(r1.status == Agreement::Agree);
            auto r2 = crosscheck_verdicts(bc.surface, bc.sections[1]);
            CHECK(r2.status == Agreement::Agree);
            agrees += 2;
        }
    }
    CHECK(agrees >= 20);
}

TEST_CASE("zariski comparison") {
    auto A = surfA();
    Section s0 = sec("0", "6*t^2 - 12150*t");
    Section s1 = sec("-32*t", "2*t^2 - 6930*t");
    Section s2 = sec("-20*t", "4*t^2 - 4500*t");
    Section d1 = dbl(A, s0), d2 = add(A, s1, s2);
    auto rep = zariski_compare(A, d1, A, d2);
    CHECK(rep.conclusion == ZariskiConclusion::Distinguished);
    CHECK(rep.d2n_family_first);
    CHECK(!rep.d2n_family_second);
    auto same = zariski_compare(A, d1, A, d1);
    CHECK(same.conclusion == ZariskiConclusion::NotDistinguished);
    // mismatched branch data rejected
    CHECK_THROWS_AS(zariski_compare(A, d1, surfB(), d1), user_error);
}
