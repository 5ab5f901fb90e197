#include "doctest.h"

#include <random>

#include "kron/errors.hpp"
#include "kron/parse.hpp"

using namespace kron;

namespace {

const std::vector<Var> kCtx = {
    {"u1", VarKind::Line}, {"u2", VarKind::Line}, {"p1", VarKind::Line},
    {"q1", VarKind::Line}, {"w", VarKind::Angle}, {"v", VarKind::Angle}};

PolyExpr random_expr(std::mt19937& rng) {
    std::uniform_int_distribution<int> nterms(1, 5);
    std::uniform_int_distribution<int> nfactors(0, 3);
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 7);
    std::uniform_int_distribution<std::size_t> pick(0, kCtx.size() - 1);
    std::uniform_int_distribution<int> expo(1, 3);
    std::uniform_int_distribution<int> trig(0, 1);

    PolyExpr total;
    for (int t = nterms(rng); t > 0; --t) {
        PolyExpr factor = PolyExpr::constant(rat(num(rng), den(rng)));
        for (int f = nfactors(rng); f > 0; --f) {
            const Var& v = kCtx[pick(rng)];
            if (v.kind == VarKind::Line) {
                factor = factor * PolyExpr::variable(v.name).pow(expo(rng));
            } else {
                auto arg = std::vector<std::pair<std::string, int>>{{v.name, expo(rng)}};
                factor = factor * (trig(rng) ? PolyExpr::sin_of(arg) : PolyExpr::cos_of(arg));
            }
        }
        total = total + factor;
    }
    return total;
}

}  // namespace

TEST_SUITE("parse") {

TEST_CASE("grammar basics") {
    PolyExpr h = parse_expr("1*u1 + 3/2*u2", kCtx);
    CHECK(h == PolyExpr::variable("u1") + PolyExpr::variable("u2").scaled(rat(3, 2)));

    PolyExpr f = parse_expr("p1^3/3 - 2*q1", kCtx);
    CHECK(f == PolyExpr::variable("p1").pow(3).scaled(rat(1, 3)) -
                   PolyExpr::variable("q1").scaled(rat(2)));

    CHECK(parse_expr("sin(w)^2 + cos(w)^2", kCtx) == PolyExpr::constant(rat(1)));
    CHECK(parse_expr("sin(2*w - v)", kCtx) == PolyExpr::sin_of({{"w", 2}, {"v", -1}}));
    CHECK(parse_expr("-u1*(u2 - 4)", kCtx) ==
          -(PolyExpr::variable("u1") * (PolyExpr::variable("u2") - PolyExpr::constant(rat(4)))));
    CHECK(parse_expr("0", kCtx).is_zero());
}

TEST_CASE("environment lookup and definitions") {
    std::map<std::string, PolyExpr> env;
    auto [name, h] = parse_definition("h = 1*u1 + 3/2*u2", kCtx, env);
    CHECK(name == "h");
    env["h"] = h;
    env["x1"] = PolyExpr::constant(rat(5));
    PolyExpr big = parse_expr("h + x1*p1*q1^2 + p1^3/3", kCtx, env);
    CHECK(big == h + (PolyExpr::variable("p1") * PolyExpr::variable("q1").pow(2)).scaled(rat(5)) +
                     PolyExpr::variable("p1").pow(3).scaled(rat(1, 3)));
}

TEST_CASE("errors carry positions and the ParseError code") {
    auto expect_parse_error = [&](const std::string& text) {
        try {
            parse_expr(text, kCtx);
            FAIL_CHECK("expected ParseError for: " << text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
        }
    };
    expect_parse_error("u1 +");
    expect_parse_error("unknown_name");
    expect_parse_error("u1 / q1");      // division by non-constant
    expect_parse_error("u1 / 0");
    expect_parse_error("sin(u1)");      // line variable inside sin
    expect_parse_error("w");            // bare angle variable
    expect_parse_error("sin(2 w)");     // missing '*'
    expect_parse_error("(u1");
    expect_parse_error("u1 $ 3");
}

TEST_CASE("round trip is exact on random expressions") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        PolyExpr f = random_expr(rng);
        std::string text = print_expr(f);
        CAPTURE(text);
        PolyExpr g = parse_expr(text, kCtx);
        CHECK(f == g);
        CHECK(print_expr(g) == text);
    }
}

TEST_CASE("malformed input always fails cleanly") {
    std::mt19937 rng(404);
    const std::string alphabet = "u1q wv+-*/^()=sincos0123456789_$#.";
    std::uniform_int_distribution<std::size_t> len(1, 24);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    int parsed = 0, rejected = 0;
    for (int trial = 0; trial < 400; ++trial) {
        std::string text;
        for (std::size_t i = len(rng); i > 0; --i) text.push_back(alphabet[pick(rng)]);
        try {
            parse_expr(text, kCtx);
            ++parsed;
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 400);
    CHECK(rejected > 300);  // almost all random strings are garbage
}

TEST_CASE("printer output stays in the documented grammar") {
    PolyExpr f = (PolyExpr::variable("u1") * PolyExpr::sin_of({{"w", 1}})).scaled(rat(-7, 2)) +
                 PolyExpr::cos_of({{"w", 1}, {"v", 2}}) + PolyExpr::constant(rat(1, 3));
    std::string text = print_expr(f);
    CHECK(parse_expr(text, kCtx) == f);
}

}  // TEST_SUITE
