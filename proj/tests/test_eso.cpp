#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "teamlogic/eso.hpp"
#include "teamlogic/sat.hpp"

using namespace teamlogic;

namespace {

const Team coin({"x", "y"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});

bool eso_text(const Structure& st, const Team& t, const char* text)
{
    return eval_eso(st, t, translate(parse_formula(text), VarTuple(t.scope())));
}

std::vector<VarTuple> subsets(const std::vector<std::string>& vars)
{
    std::vector<VarTuple> out;
    for (std::size_t m = 0; m < (std::size_t{1} << vars.size()); ++m) {
        std::vector<std::string> s;
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (m >> i & 1) s.push_back(vars[i]);
        out.emplace_back(s);
    }
    return out;
}

}  // namespace

TEST_SUITE("eso") {

TEST_CASE("sat solver agrees with truth-table search")
{
    std::mt19937_64 rng(7);
    for (int round = 0; round < 300; ++round) {
        const int n = 10;
        const int m = std::uniform_int_distribution<int>(20, 60)(rng);
        std::vector<std::vector<int>> cls;
        for (int i = 0; i < m; ++i) {
            std::vector<int> c;
            for (int k = 0; k < 3; ++k) {
                int v = std::uniform_int_distribution<int>(1, n)(rng);
                c.push_back(std::bernoulli_distribution(0.5)(rng) ? v : -v);
            }
            cls.push_back(c);
        }
        bool brute = false;
        for (int a = 0; a < (1 << n) && !brute; ++a) {
            bool ok = true;
            for (const auto& c : cls) {
                bool sat = false;
                for (int l : c) sat |= ((a >> (std::abs(l) - 1)) & 1) == (l > 0 ? 1 : 0);
                if (!sat) {
                    ok = false;
                    break;
                }
            }
            brute = ok;
        }
        SatSolver s;
        for (int i = 0; i < n; ++i) s.new_var();
        for (const auto& c : cls) s.add_clause(c);
        const bool got = s.solve();
        REQUIRE(got == brute);
        if (got)
            for (const auto& c : cls) {
                bool sat = false;
                for (int l : c) sat |= s.value(std::abs(l) - 1) == (l > 0);
                CHECK(sat);
            }
    }
}

TEST_CASE("pigeonhole is unsatisfiable")
{
    const int holes = 5, pigeons = 6;
    SatSolver s;
    auto var = [&](int p, int h) { return p * holes + h + 1; };
    for (int i = 0; i < pigeons * holes; ++i) s.new_var();
    for (int p = 0; p < pigeons; ++p) {
        std::vector<int> c;
        for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
        s.add_clause(c);
    }
    for (int h = 0; h < holes; ++h)
        for (int p = 0; p < pigeons; ++p)
            for (int q = p + 1; q < pigeons; ++q) s.add_clause({-var(p, h), -var(q, h)});
    CHECK_FALSE(s.solve());
}

TEST_CASE("independence clause shape")
{
    auto e = translate(parse_formula("ind(x1 ; x2 ; x3)"), {"x1", "x2", "x3"});
    CHECK(e.relvars.empty());
    CHECK(e.to_string() ==
          "forall y1. forall y2. forall y3. forall z1. forall z2. forall z3. "
          "(S(y1, y2, y3) and S(z1, z2, z3) and y2 = z2 -> "
          "exists u1. exists u2. exists u3. (S(u1, u2, u3) and u2 = y2 and u1 = y1 and u3 = z3))");
}

TEST_CASE("dependence translates through the independence clause")
{
    auto d = translate(parse_formula("dep(x1 ; x2)"), {"x1", "x2"});
    auto i = translate(parse_formula("ind(x2 ; x1 ; x2)"), {"x1", "x2"});
    CHECK(d.to_string() == i.to_string());
}

TEST_CASE("first-order formulas need no relation variables")
{
    auto e = translate(parse_formula("x = y and not R(x, y)"), {"x", "y"});
    CHECK(e.relvars.empty());
    CHECK(e.to_string() == "(forall y1. forall y2. (S(y1, y2) -> y1 = y2)) and "
                           "forall y1. forall y2. (S(y1, y2) -> not R(y1, y2))");
}

TEST_CASE("connectives introduce relation variables")
{
    auto e = translate(parse_formula("x = y or (exists z. z = x)"), {"x", "y"});
    REQUIRE(e.relvars.size() == 3);
    CHECK(e.relvars[0] == RelationVariable{"S1", 2});
    CHECK(e.relvars[2] == RelationVariable{"S3", 3});
    CHECK(e.to_string().rfind("exists2 S1/2 S2/2 S3/3 . ", 0) == 0);
}

TEST_CASE("names in the formula are never captured")
{
    auto e = translate(parse_formula("exists S. ind(S ;; y1)"), {"y1"});
    CHECK(e.team_relation == "S_");
    CHECK(e.to_string().find("y1_") != std::string::npos);
    auto m2 = Structure::of_size(2);
    CHECK(eval_eso(m2, Team({"y1"}, {{0}, {1}}), e));
}

TEST_CASE("evaluation examples")
{
    auto m2 = Structure::of_size(2);
    CHECK(eso_text(m2, coin, "ind(x ;; y)"));
    CHECK_FALSE(eso_text(m2, Team({"x", "y"}, {{0, 0}, {1, 1}}), "ind(x ;; y)"));
    for (const char* f : {"ind(x ;; y)", "not dep(x ; y)", "x = y or not x = y", "exists z. (z = x and not z = x)"})
        CHECK(eso_text(m2, Team({"x", "y"}), f));
}

TEST_CASE("atoms agree with team semantics on three variables")
{
    const std::vector<std::string> vars{"x", "y", "z"};
    auto m2 = Structure::of_size(2);
    const auto subs = subsets(vars);
    std::vector<Formula> atoms;
    for (const auto& a : subs)
        for (const auto& b : subs) atoms.push_back(Formula::dep(a, b));
    for (std::size_t i = 0; i < subs.size(); i += 3)
        for (const auto& b : subs)
            for (const auto& c : subs) atoms.push_back(Formula::ind(subs[i], b, c));
    std::size_t checked = 0;
    enumerate_teams(VarTuple(vars), 2, std::nullopt, [&](const Team& t) {
        if (t.size() % 3 != 1) return true;
        for (const auto& f : atoms) {
            const auto expected = evaluate(m2, t, f);
            REQUIRE(eval_eso(m2, t, translate(f, VarTuple(vars))) == expected);
            ++checked;
        }
        return true;
    });
    CHECK(checked > 10000);
}

TEST_CASE("grounded search agrees with brute-force enumeration")
{
    std::mt19937_64 rng(11);
    int compared = 0;
    for (int round = 0; round < 200 && compared < 60; ++round) {
        oracle::FormulaGen gen{rng, {"x"}, true, {"w"}};
        auto f = gen(2);
        auto st = oracle::random_structure(rng, 2);
        auto t = oracle::random_team(rng, {"x"}, 2, 2);
        auto e = translate(f, VarTuple(t.scope()));
        std::size_t bits = 0;
        for (const auto& r : e.relvars) bits += std::size_t{1} << r.arity;
        if (bits > 16) continue;
        const bool sat = eval_eso(st, t, e);
        CHECK(eval_eso_bruteforce(st, t, e) == sat);
        CHECK(eval_eso_bruteforce_parallel(st, t, e) == sat);
        CHECK(evaluate(st, t, f) == sat);
        ++compared;
    }
    CHECK(compared >= 30);
}

TEST_CASE("brute force respects its cap")
{
    auto e = translate(parse_formula("x = x or x = x"), {"x", "y", "z"});
    CHECK_THROWS_AS(eval_eso_bruteforce(Structure::of_size(3), Team({"x", "y", "z"}), e, 22), CapExceeded);
}

TEST_CASE("matrix evaluation under an explicit interpretation")
{
    auto e = translate(parse_formula("x = y or not x = y"), {"x", "y"});
    auto m2 = Structure::of_size(2);
    CHECK(eso_matrix_holds(m2, coin, e, {{{0, 0}, {1, 1}}, {{0, 1}, {1, 0}}}));
    CHECK_FALSE(eso_matrix_holds(m2, coin, e, {{{0, 0}}, {{0, 1}, {1, 0}}}));
}

TEST_CASE("random compound formulas agree in lax mode")
{
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 20; ++i) {
        oracle::FormulaGen gen{rng, {"x", "y"}, true, {"w1", "w2"}};
        auto f = gen(3);
        const auto n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
        auto st = oracle::random_structure(rng, n);
        auto t = oracle::random_team(rng, {"x", "y"}, n, 5);
        auto r = check_translation(st, t, f);
        INFO(to_string(f));
        CHECK(r.agree());
    }
}

TEST_CASE("translation size is polynomial")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        oracle::FormulaGen gen{rng, {"x", "y", "z"}, true, {"w1", "w2"}};
        auto f = gen(4);
        auto e = translate(f, {"x", "y", "z"});
        const std::size_t arity = 3 + 4;
        CHECK(e.size() <= 20 * f.size() * arity * arity);
    }
}

}  // TEST_SUITE
