#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "teamlogic/syntax.hpp"

using namespace teamlogic;

TEST_SUITE("syntax") {

TEST_CASE("parse the valid sentence")
{
    auto f = parse_formula("forall x. forall y. exists z. (ind(z ;; x) and z = y)");
    auto expect = Formula::forall(
        "x", Formula::forall("y", Formula::exists("z", Formula::conj(Formula::ind({"z"}, {}, {"x"}),
                                                                      Formula::equal({"z"}, {"y"})))));
    CHECK(f == expect);
}

TEST_CASE("parse atoms")
{
    CHECK(parse_formula("dep(x y ; z)") == Formula::dep({"x", "y"}, {"z"}));
    CHECK(parse_formula("dep(; x)") == Formula::dep({}, {"x"}));
    CHECK(parse_formula("ind(x ; y ; z)") == Formula::ind({"x"}, {"y"}, {"z"}));
    CHECK(parse_formula("R(x, c)") == Formula::relation("R", {{"x"}, {"c"}}));
    CHECK(parse_formula("not x = y") == Formula::negate(Formula::equal({"x"}, {"y"})));
    CHECK(parse_formula("exists z/{x}. z = x") == Formula::slashed_exists("z", {"x"}, Formula::equal({"z"}, {"x"})));
}

TEST_CASE("precedence")
{
    auto f = parse_formula("a = b or c = d and not e = f");
    REQUIRE(f.kind() == FormulaKind::Or);
    CHECK(f.rhs().kind() == FormulaKind::And);
    auto g = parse_formula("exists x. x = y or x = z");
    REQUIRE(g.kind() == FormulaKind::Exists);
    CHECK(g.body().kind() == FormulaKind::Or);
}

TEST_CASE("parse errors carry positions")
{
    try {
        parse_formula("x = y and\n  not (x = y and y = z)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
        CHECK(std::string(e.what()).find("non-atom") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_formula("forall x/{y}. x = y"), ParseError);
    CHECK_THROWS_AS(parse_formula("x = y and exists z. z = z"), ParseError);
    CHECK_THROWS_AS(parse_formula("dep(x ; y"), ParseError);
    CHECK_THROWS_AS(parse_formula("x = "), ParseError);
    CHECK_THROWS_AS(parse_formula("x $ y"), ParseError);
    CHECK_THROWS_AS(parse_formula("branch{forall x exists y; forall x exists v}. x = v"), ParseError);
}

TEST_CASE("free variables")
{
    CHECK(free_vars(Formula::dep({"x"}, {"y"})) == std::vector<std::string>{"x", "y"});
    CHECK(free_vars(parse_formula("forall x. ind(z ;; x)")) == std::vector<std::string>{"z"});
    auto h = parse_formula("branch{forall x exists y; forall u exists v}. (R(x, y) and R(u, v) and R(z, w))");
    CHECK(free_vars(h) == std::vector<std::string>{"z", "w"});
}

TEST_CASE("slash desugaring")
{
    auto f = desugar_slash(parse_formula("forall x. exists y. exists z/{x}. z = x"));
    CHECK(to_string(f) == "forall x. exists y. exists z. (ind(x ; y ; z) and z = x)");
    auto g = desugar_slash(parse_formula("forall x. exists z/{x}. z = z"));
    CHECK(to_string(g) == "forall x. exists z. (ind(x ;; z) and z = z)");
    auto plain = parse_formula("forall x. x = x");
    CHECK(desugar_slash(plain) == plain);
    CHECK(desugar_slash(f) == f);
    CHECK_THROWS_AS(desugar_slash(parse_formula("exists z/{x}. z = z")), ScopeError);
}

TEST_CASE("henkin desugaring")
{
    auto f = desugar_henkin(parse_formula("branch{forall x exists y; forall u exists v}. R(x, y, u, v)"));
    CHECK(to_string(f) == "forall x. exists y. forall u. exists v. (ind(v ; u ; x) and R(x, y, u, v))");
    auto g = desugar_henkin(parse_formula("branch{forall x exists y; forall u exists v}. (R(x, y) and w = v)"));
    CHECK(to_string(g) == "forall x. exists y. forall u. exists v. (ind(v ; u w ; x) and (R(x, y) and w = v))");
    CHECK(desugar_henkin(g) == g);
    CHECK_THROWS_AS(desugar_henkin(parse_formula("branch{forall x exists y}. x = y")), Error);
    CHECK_THROWS_AS(
        desugar_henkin(parse_formula("branch{forall a exists b; forall c exists d; forall e exists f}. a = b")),
        Error);
}

TEST_CASE("printer round trip on examples")
{
    for (const char* text : {
             "forall x. forall y. exists z. (ind(z ;; x) and z = y)",
             "dep(x y ; z)",
             "dep(; x)",
             "ind(; ; x)",
             "ind(x ;; y z)",
             "x = y or (y = z and not R(x, y))",
             "(x = y or y = z) and z = x",
             "x = y and (y = z and z = x)",
             "exists z/{x y}. (z = x or dep(z ; x))",
             "branch{forall x exists y; forall u exists v}. not x = v",
             "(exists x. x = x) and (forall y. y = y)",
         }) {
        auto f = parse_formula(text);
        CHECK(parse_formula(to_string(f)) == f);
        CHECK(to_string(parse_formula(to_string(f))) == to_string(f));
    }
}

TEST_CASE("printer round trip on random formulas")
{
    std::mt19937_64 rng(7);
    oracle::FormulaGen gen{rng, {"x", "y", "z"}};
    for (int i = 0; i < 500; ++i) {
        auto f = gen(4);
        auto text = to_string(f);
        CHECK_MESSAGE(parse_formula(text) == f, text);
    }
}

TEST_CASE("classification")
{
    CHECK(is_first_order(parse_formula("forall x. R(x, y)")));
    CHECK_FALSE(is_first_order(parse_formula("forall x. dep(x ; y)")));
    CHECK(is_downward_closed(parse_formula("forall x. dep(x ; y) or not ind(x ;; y)")));
    CHECK_FALSE(is_downward_closed(parse_formula("forall x. ind(x ;; y)")));
    CHECK(contains_sugar(parse_formula("x = x and (exists y/{x}. y = y)")));
}

}
