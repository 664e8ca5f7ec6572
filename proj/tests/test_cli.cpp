// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "ellsplit/report.hpp"

using namespace ellsplit;

namespace {

const char* kSurfaceA = R"(
surface {
  g = 1
  d = 2
  a2 = 271350 - 98*t
  a4 = t*(t-5825)*(t-2025)
  a6 = 36*t^2*(t-2025)^2
}
section s0 {
  x = 0
  y = 6*t^2 - 12150*t
}
section s1 {
  x = -32*t
  y = 2*t^2 - 6930*t
}
section s2 {
  x = -20*t
  y = 4*t^2 - 4500*t
}
delta d1 {
  from = 2*s0
}
options {
  tower_cap = 3
}
)";

}  // namespace

TEST_CASE("expression parser golden values") {
    CHECK(parse_expression("36*t^2*(t-2025)^2") ==
          RF(Rat(36) * parse_polynomial("t^2") * parse_polynomial("(t-2025)^2")));
    CHECK(parse_expression("0").is_zero());
    CHECK(parse_expression("(25*t+9)") == RF(parse_polynomial("25*t+9")));
    CHECK(parse_expression("-t^2") == -RF(parse_polynomial("t^2")));
    CHECK(parse_expression("1/2 + 1/2") == RF(Rat(1)));
    CHECK(parse_expression("2^3") == RF(Rat(8)));
    CHECK(parse_expression("t/(t+1)") == RF(parse_polynomial("t"), parse_polynomial("t+1")));
    // left associativity of - and /
    CHECK(parse_expression("8 - 3 - 2") == RF(Rat(3)));
    CHECK(parse_expression("8/4/2") == RF(Rat(1)));
    // precedence: ^ above unary minus above * /
    CHECK(parse_expression("-2^2") == RF(Rat(-4)));
    CHECK(parse_expression("2*t^2") == RF(Rat(2) * parse_polynomial("t^2")));
}

TEST_CASE("expression parser errors carry byte offsets") {
    try {
        parse_expression("t + * 3");
        FAIL("expected parse error");
    } catch (const parse_error& e) {
        CHECK(e.offset == 4);
        CHECK(std::string(e.what()).find("byte 4") != std::string::npos);
    }
    try {
        parse_expression("t ^ x");  // the lexer rejects the foreign identifier
        FAIL("expected parse error");
    } catch (const parse_error& e) {
        CHECK(e.offset == 4);
        CHECK(e.expected.find("variable") != std::string::npos);
    }
    try {
        parse_expression("t ^ (2)");  // exponents must be integer literals
        FAIL("expected parse error");
    } catch (const parse_error& e) {
        CHECK(e.offset == 4);
        CHECK(e.expected.find("exponent") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_expression("u + 1"), parse_error);
    CHECK_THROWS_AS(parse_expression("(t"), parse_error);
    CHECK_THROWS_AS(parse_polynomial("1/t"), user_error);
}

TEST_CASE("instance files parse, validate and round-trip") {
    InstanceFile inst = parse_instance(kSurfaceA);
    CHECK(inst.d == 2);
    CHECK(inst.sections.size() == 3);
    REQUIRE(inst.deltas.size() == 1);
    CHECK(inst.tower_cap == 3);
    // round trip: serialize then reparse gives identical content
    std::string s1 = serialize_instance(inst);
    InstanceFile again = parse_instance(s1);
    CHECK(serialize_instance(again) == s1);
    CHECK(again.a6 == inst.a6);
    CHECK(again.sections[1].second == inst.sections[1].second);
}

TEST_CASE("instance validation failures") {
    CHECK_THROWS_AS(parse_instance("section s { x = 0\n y = 0\n}\n"), user_error);  // no surface
    std::string off_curve = R"(
surface {
  g = 1
  d = 2
  a2 = 0
  a4 = 0
  a6 = 1
}
section p {
  x = 1
  y = 1
}
)";
    CHECK_THROWS_AS(parse_instance(off_curve), user_error);
    CHECK_THROWS_AS(parse_instance("surface {\n  d = 2\n  a2 = 0\n  a4 = 0\n}\n"), user_error);
}

TEST_CASE("section expressions") {
    InstanceFile inst = parse_instance(kSurfaceA);
    WeierstrassSurface S = inst.surface();
    Section two_s0 = evaluate_section_expression(S, inst, "2*s0");
    CHECK(two_s0 == dbl(S, *inst.find_section("s0")));
    CHECK(evaluate_section_expression(S, inst, "s1+s2") ==
          add(S, *inst.find_section("s1"), *inst.find_section("s2")));
    CHECK(evaluate_section_expression(S, inst, "-s0") == neg(*inst.find_section("s0")));
    CHECK(evaluate_section_expression(S, inst, "0*s1").is_zero());
    CHECK(evaluate_section_expression(S, inst, "s0 - s0").is_zero());
    CHECK_THROWS_AS(evaluate_section_expression(S, inst, "nope"), user_error);
    CHECK_THROWS_AS(evaluate_section_expression(S, inst, "2 s0"), parse_error);
}

TEST_CASE("delta resolution") {
    InstanceFile inst = parse_instance(kSurfaceA);
    WeierstrassSurface S = inst.surface();
    PolyQ f = delta_polynomial(S, inst, inst.deltas[0]);
    CHECK(f == parse_polynomial("1/144*t^2 + 1231/72*t - 5143775/144"));
}

TEST_CASE("reports are deterministic") {
    InstanceFile inst = parse_instance(kSurfaceA);
    auto r1 = report_analyze(inst);
    auto r2 = report_analyze(inst);
    CHECK(r1.str(false) == r2.str(false));
    CHECK(r1.str(true) == r2.str(true));
    auto d1 = report_divisible(inst, "2*s0", true);
    auto d2 = report_divisible(inst, "2*s0", true);
    CHECK(d1.str(false) == d2.str(false));
}

TEST_CASE("structured output uses exact rational strings") {
    InstanceFile inst = parse_instance(kSurfaceA);
    auto rep = report_analyze(inst);
    auto j = rep.data;
    CHECK(j["sections"][0]["self_height"] == "1/2");
    CHECK(j["chi"] == 1);
    bool has_float = rep.str(true).find(".0") != std::string::npos;
    CHECK(!has_float);
}

TEST_CASE("arith report prints the evaluated coordinates") {
    InstanceFile inst = parse_instance(kSurfaceA);
    auto rep = report_arith(inst, "s1+s2");
    CHECK(rep.data["x"] == "1/36*t^2 + 435/2*t - 921375/4");
    auto zero = report_arith(inst, "0*s1");
    CHECK(zero.data["zero"] == true);
}

TEST_CASE("basechange output re-parses and passes validations") {
    InstanceFile inst = parse_instance(kSurfaceA);
    InstanceFile out;
    report_basechange(inst, "t^2", &out);
    std::string text = serialize_instance(out);
    InstanceFile back = parse_instance(text);
    CHECK(back.d == 4);
    CHECK(back.sections.size() == 3);
    WeierstrassSurface S2 = back.surface();
    for (auto& [n, sec] : back.sections) CHECK(on_curve(S2, sec));
    // identity base change reproduces the surface
    InstanceFile same;
    report_basechange(inst, "t", &same);
    CHECK(same.a2 == inst.a2);
    CHECK(same.a4 == inst.a4);
    CHECK(same.a6 == inst.a6);
    // the delta transported from "from" reference still resolves
    PolyQ f2 = delta_polynomial(S2, back, back.deltas[0]);
    CHECK(f2 == dbl(S2, *back.find_section("s0")).x.num());
}

TEST_CASE("linear base change relocates fibers") {
    InstanceFile inst = parse_instance(kSurfaceA);
    InstanceFile out;
    report_basechange(inst, "2*t+1", &out);
    CHECK(out.d == 2);
    auto cfg = classify_fibers(out.surface());
    // the I2 at t = 0 moved to 2t + 1 = 0
    bool found = false;
    for (auto& f : cfg.fibers)
        if (!f.place.is_infinity() && f.place.poly() == parse_polynomial("t + 1/2"))
            found = f.type == KodairaSymbol{KodairaKind::In, 2};
    CHECK(found);
}
