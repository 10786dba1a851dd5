#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "teamlogic/branching.hpp"

using namespace teamlogic;

namespace {

Formula henkin(const char* matrix)
{
    return parse_formula(std::string("branch{forall x exists y; forall u exists v}. ") + matrix);
}

}  // namespace

TEST_SUITE("branching") {

TEST_CASE("skolem examples")
{
    for (std::size_t m = 1; m <= 4; ++m) {
        auto st = Structure::of_size(m);
        CHECK(henkin_eval_skolem(st, {}, henkin("y = x and v = u")));
        CHECK(henkin_eval_skolem(st, {}, henkin("v = x")) == (m == 1));
        CHECK(henkin_eval_skolem(st, {}, henkin("y = u")) == (m == 1));
    }
    CHECK_THROWS_AS(henkin_eval_skolem(Structure::of_size(6), {}, henkin("x = x")), CapExceeded);
    CHECK_THROWS_AS(henkin_eval_skolem(Structure::of_size(2), {}, henkin("dep(x ; y)")), Error);
}

TEST_CASE("skolem search reads the outer assignment")
{
    auto st = Structure::of_size(3);
    Assignment s{{"z"}, {2}};
    CHECK(henkin_eval_skolem(st, s, henkin("y = z and v = z")));
    CHECK(henkin_eval_skolem(st, s, henkin("y = z and not v = z")));
    CHECK_FALSE(henkin_eval_skolem(st, s, henkin("v = x and y = z")));
}

TEST_CASE("parallel and serial skolem search agree")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto m = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
        auto st = oracle::random_binary_structure(rng, m);
        auto h = Formula::henkin({{"x", "y"}, {"u", "v"}}, oracle::random_matrix(rng, 3));
        CHECK(henkin_eval_skolem(st, {}, h) == henkin_eval_skolem_serial(st, {}, h));
    }
}

TEST_CASE("skolem and compositional verdicts on small matrices")
{
    auto m2 = Structure::of_size(2);
    for (auto mode : {Semantics::Strict, Semantics::Lax}) {
        auto r = check_lemma14(m2, {}, henkin("v = x"), mode);
        CHECK_FALSE(r.skolem);
        CHECK_FALSE(r.compositional);
        r = check_lemma14(m2, {}, henkin("x = x or not x = x"), mode);
        CHECK(r.skolem);
        CHECK(r.compositional);
    }
}

TEST_CASE("skolem and compositional agreement on random matrices")
{
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
        const auto m = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
        auto st = oracle::random_binary_structure(rng, m);
        auto h = Formula::henkin({{"x", "y"}, {"u", "v"}}, oracle::random_matrix(rng, 3));
        INFO(to_string(h));
        CHECK(check_lemma14(st, {}, h, Semantics::Strict).agree());
        if (m <= 2) CHECK(check_lemma14(st, {}, h, Semantics::Lax).agree());
    }
}

TEST_CASE("skolem and compositional agreement with one unary relation")
{
    std::mt19937_64 rng(21);
    for (unsigned p = 0; p < 4; ++p) {
        auto st = Structure::of_size(2);
        std::set<std::vector<Elem>> rel;
        for (Elem a = 0; a < 2; ++a)
            if (p >> a & 1) rel.insert({a});
        st.add_relation("P", 1, rel);
        for (int i = 0; i < 25; ++i) {
            oracle::FormulaGen gen{rng, {"x", "y", "u", "v"}, false, {}};
            Formula matrix = gen.atom({"x", "y", "u", "v"});
            for (int k = 0; k < 3; ++k) {
                auto a = gen.atom({"x", "y", "u", "v"});
                if (a.kind() == FormulaKind::Relation && a.name() == "R") continue;
                if (a.kind() == FormulaKind::Not && a.child().kind() == FormulaKind::Relation) continue;
                matrix = std::bernoulli_distribution(0.5)(rng) ? Formula::conj(matrix, a) : Formula::disj(matrix, a);
            }
            if (to_string(matrix).find("R(") != std::string::npos) continue;
            auto h = Formula::henkin({{"x", "y"}, {"u", "v"}}, matrix);
            for (auto mode : {Semantics::Strict, Semantics::Lax}) CHECK(check_lemma14(st, {}, h, mode).agree());
        }
    }
}

TEST_CASE("key implication holds in every small team")
{
    std::size_t premise = 0;
    enumerate_teams({"x", "u", "v"}, 2, std::nullopt, [&](const Team& t) {
        auto k = key_implication_check(t);
        CHECK(k.premise == (oracle::dep(t, {"x", "u"}, {"v"}) && oracle::ind(t, {"v"}, {"u"}, {"x"})));
        CHECK(k.conclusion == oracle::dep(t, {"u"}, {"v"}));
        CHECK(k.respected());
        premise += k.premise;
        return true;
    });
    CHECK(premise > 0);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 2000; ++i) CHECK(key_implication_check(oracle::random_team(rng, {"x", "u", "v"}, 3, 12)).respected());
    CHECK_THROWS_AS(key_implication_check(Team({"x", "v"})), ScopeError);
}

TEST_CASE("weak-condition counterexample search")
{
    auto r = find_remark_counterexample(3, 27);
    REQUIRE(r.team);
    const auto& t = *r.team;
    CHECK(r.domain == 2);
    CHECK_FALSE(r.note.empty());
    CHECK(oracle::dep(t, {"x", "u"}, {"v"}));
    CHECK(oracle::ind(t, {"v"}, {}, {"x"}));
    CHECK_FALSE(oracle::dep(t, {"u"}, {"v"}));
    CHECK(t.size() == 4);
    auto s = find_remark_counterexample_serial(3, 27);
    CHECK(s.team == r.team);
    CHECK(s.candidates == r.candidates);

    CHECK_FALSE(find_remark_counterexample(3, 27, true).team);
    CHECK_FALSE(find_remark_counterexample_serial(2, 27, true).team);
    CHECK_FALSE(find_remark_counterexample(1, 27).team);
    CHECK_FALSE(find_remark_counterexample(3, 3).team);
    CHECK_THROWS_AS(find_remark_counterexample(3, 27, true, 1000), CapExceeded);
}

TEST_CASE("hierarchy of independence conditions")
{
    bool converse_fails = false, weak_not_implied = false;
    enumerate_teams({"x", "u", "v"}, 2, std::nullopt, [&](const Team& t) {
        const bool joint = ind_holds(t, {"u", "v"}, {}, {"x"});
        const bool cond = ind_holds(t, {"v"}, {"u"}, {"x"});
        const bool plain = ind_holds(t, {"v"}, {}, {"x"});
        CHECK((!joint || cond));
        CHECK((!joint || plain));
        converse_fails |= cond && !joint;
        weak_not_implied |= cond && !plain;
        return true;
    });
    CHECK(converse_fails);
    CHECK(weak_not_implied);
}

}  // TEST_SUITE
