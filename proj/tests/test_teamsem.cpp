#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "teamlogic/teamsem.hpp"

using namespace teamlogic;

namespace {

const Team coin({"x", "y"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});

bool eval_text(const Structure& st, const Team& t, const char* text, Semantics mode = Semantics::Lax)
{
    return evaluate(st, t, parse_formula(text), {mode});
}

}  // namespace

TEST_SUITE("teamsem") {

TEST_CASE("atom examples")
{
    auto m2 = Structure::of_size(2);
    CHECK(eval_text(m2, coin, "ind(x ;; y)"));
    Team xconst({"x", "y"}, {{1, 0}, {1, 1}});
    CHECK(eval_text(m2, xconst, "ind(x ;; y)"));
    CHECK(eval_text(m2, xconst, "ind(x ;; x)"));
    Team fork({"x", "y"}, {{0, 0}, {0, 1}});
    CHECK_FALSE(eval_text(m2, fork, "dep(x ; y)"));
    CHECK(eval_text(m2, Team({"x", "y"}), "dep(x ; y)"));
    CHECK(eval_text(m2, Team({"x", "y"}, {{0, 1}}), "dep(x ; y)"));
    Team diag({"x", "y"}, {{0, 0}, {1, 1}});
    CHECK_FALSE(eval_text(m2, diag, "ind(x ;; y)"));
    CHECK(oracle::ind(diag, {"x"}, {}, {"y"}) == false);
}

TEST_CASE("ind is not downward closed")
{
    auto m2 = Structure::of_size(2);
    Team minus({"x", "y"}, {{0, 0}, {0, 1}, {1, 0}});
    CHECK(eval_text(m2, coin, "ind(x ;; y)"));
    CHECK_FALSE(eval_text(m2, minus, "ind(x ;; y)"));
}

TEST_CASE("atom kernels agree with the definitions")
{
    const std::vector<VarTuple> tuples{{}, {"x"}, {"y"}, {"z"}, {"x", "y"}, {"y", "z"}, {"z", "x"}, {"x", "y", "z"}};
    std::size_t teams = 0;
    enumerate_teams({"x", "y", "z"}, 2, std::nullopt, [&](const Team& t) {
        ++teams;
        for (const auto& a : tuples)
            for (const auto& b : tuples) {
                REQUIRE(dep_holds(t, a, b) == oracle::dep(t, a, b));
                for (const auto& c : tuples) REQUIRE(ind_holds(t, a, b, c) == oracle::ind(t, a, b, c));
            }
        return true;
    });
    CHECK(teams == 256);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        auto t = oracle::random_team(rng, {"x", "y", "z"}, 3, 12);
        for (const auto& a : tuples)
            for (const auto& b : tuples) {
                REQUIRE(dep_holds(t, a, b) == oracle::dep(t, a, b));
                for (const auto& c : tuples) REQUIRE(ind_holds(t, a, b, c) == oracle::ind(t, a, b, c));
            }
    }
}

TEST_CASE("negated atoms")
{
    auto m2 = Structure::of_size(2);
    CHECK(eval_text(m2, Team({"x", "y"}), "not dep(x ; y)"));
    CHECK_FALSE(eval_text(m2, coin, "not ind(x ;; y)"));
    Team diag({"x", "y"}, {{0, 0}, {1, 1}});
    CHECK_FALSE(eval_text(m2, diag, "not dep(x ; y)"));
    Team off({"x", "y"}, {{0, 1}, {1, 0}});
    CHECK(eval_text(m2, off, "not x = y"));
    CHECK_FALSE(eval_text(m2, coin, "not x = y"));
}

TEST_CASE("constants")
{
    auto st = parse_structure("domain: a b\nconstant c = b\nrelation R/2: (a,b) (b,b)\n");
    Team t({"x"}, {{0}, {1}});
    CHECK(eval_text(st, t, "R(x, c)"));
    CHECK_FALSE(eval_text(st, t, "x = c"));
    CHECK(eval_text(st, t, "dep(x ; c)"));
    CHECK(eval_text(st, t, "ind(c ;; x)"));
    CHECK(eval_text(st, Team::unit(), "c = c"));
}

TEST_CASE("errors")
{
    auto st = parse_structure("domain: a b\nrelation R/2: (a,b)\n");
    Team t({"x"}, {{0}});
    CHECK_THROWS_AS(eval_text(st, t, "y = x"), ScopeError);
    CHECK_THROWS_AS(eval_text(st, t, "dep(x ; q)"), ScopeError);
    CHECK_THROWS_AS(eval_text(st, t, "S(x)"), Error);
    CHECK_THROWS_AS(eval_text(st, t, "R(x)"), Error);
    CHECK_THROWS_AS(eval_text(st, t, "exists z/{x}. z = x"), Error);
    CHECK_THROWS_AS(sentence_sat(st, parse_formula("x = x")), ScopeError);
}

TEST_CASE("budget")
{
    auto m3 = Structure::of_size(3);
    Team t({"a"}, {{0}, {1}, {2}});
    EvalOptions opts;
    opts.budget = 5;
    auto f = parse_formula("exists x. exists y. (ind(x ;; y) and ind(x ;; a) and dep(a ; a) and not x = x)");
    CHECK_THROWS_AS(evaluate(m3, duplicate(t, "b", m3), f, opts), SearchExhausted);
}

TEST_CASE("quantified independence sentences")
{
    auto valid = parse_formula("forall x. forall y. exists z. (ind(z ;; x) and z = y)");
    auto invalid = parse_formula("forall x. exists y. exists z. (ind(z ;; x) and z = x)");
    for (auto mode : {Semantics::Lax, Semantics::Strict}) {
        for (std::size_t n = 1; n <= 3; ++n) CHECK(sentence_sat(Structure::of_size(n), valid, {mode}));
        CHECK(sentence_sat(Structure::of_size(1), invalid, {mode}));
        CHECK_FALSE(sentence_sat(Structure::of_size(2), invalid, {mode}));
    }
}

TEST_CASE("validity search")
{
    auto valid = parse_formula("forall x. forall y. exists z. (ind(z ;; x) and z = y)");
    auto r = validity_search(valid, 4);
    CHECK(r.valid);
    CHECK(r.max_size == 4);
    auto invalid = parse_formula("forall x. exists y. exists z. (ind(z ;; x) and z = x)");
    auto c = validity_search(invalid, 4);
    CHECK_FALSE(c.valid);
    REQUIRE(c.countermodel);
    CHECK(c.countermodel->size() == 2);
    CHECK(validity_search(parse_formula("exists x. x = x"), 3).valid);
    auto rel = validity_search(parse_formula("forall x. R(x, x)"), 2);
    CHECK_FALSE(rel.valid);
    CHECK_THROWS_AS(validity_search(parse_formula("forall x. R(x, x)"), 9), CapExceeded);
}

TEST_CASE("pruned evaluator agrees with exhaustive search")
{
    std::mt19937_64 rng(11);
    for (auto mode : {Semantics::Lax, Semantics::Strict}) {
        oracle::FormulaGen gen{rng, {"x", "y"}};
        for (int i = 0; i < 400; ++i) {
            auto f = gen(3);
            auto st = oracle::random_structure(rng, 2);
            auto t = oracle::random_team(rng, {"x", "y"}, 2, 3);
            bool fast = evaluate(st, t, f, {mode});
            bool slow = oracle::naive_eval(st, t, f, mode);
            REQUIRE_MESSAGE(fast == slow, to_string(f), " mode ", to_string(mode));
        }
    }
}

TEST_CASE("memo and pruning do not change verdicts")
{
    std::mt19937_64 rng(5);
    oracle::FormulaGen gen{rng, {"x", "y"}};
    for (int i = 0; i < 200; ++i) {
        auto f = gen(3);
        auto st = oracle::random_structure(rng, 3);
        auto t = oracle::random_team(rng, {"x", "y"}, 3, 4);
        EvalOptions memo, plain;
        plain.memoize = false;
        CHECK(evaluate(st, t, f, memo) == evaluate(st, t, f, plain));
    }
}

TEST_CASE("empty team and flatness")
{
    std::mt19937_64 rng(13);
    oracle::FormulaGen gen{rng, {"x", "y"}};
    for (int i = 0; i < 200; ++i) {
        auto f = gen(3);
        auto st = oracle::random_structure(rng, 3);
        CHECK(evaluate(st, Team({"x", "y"}), f));
    }
    oracle::FormulaGen fo{rng, {"x", "y"}};
    fo.allow_dep = false;
    for (int i = 0; i < 100; ++i) {
        auto f = fo(3);
        auto st = oracle::random_structure(rng, 3);
        auto t = oracle::random_team(rng, {"x", "y"}, 3, 6);
        for (auto mode : {Semantics::Lax, Semantics::Strict}) {
            bool pointwise = true;
            for (const auto& r : t.rows()) pointwise &= evaluate(st, t.with_rows({r}), f, {mode});
            CHECK(evaluate(st, t, f, {mode}) == pointwise);
        }
    }
}

TEST_CASE("holds_at")
{
    auto st = parse_structure("domain: a b\nrelation R/2: (a,b)\n");
    Assignment s{{"x"}, {0}};
    CHECK(holds_at(st, s, parse_formula("exists y. R(x, y)")));
    CHECK_FALSE(holds_at(st, s, parse_formula("forall y. R(x, y)")));
    CHECK_THROWS_AS(holds_at(st, s, parse_formula("dep(x ; x)")), Error);
}

}
