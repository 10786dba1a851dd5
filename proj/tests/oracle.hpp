#pragma once

// Independent reference implementations used as test oracles. Everything
// here follows the definitions literally and favours clarity over speed.

#include <algorithm>
#include <functional>
#include <set>
#include <random>
#include <string>
#include <vector>

#include "teamlogic/core.hpp"
#include "teamlogic/syntax.hpp"

namespace oracle {

using teamlogic::Elem;
using teamlogic::Formula;
using teamlogic::FormulaKind;
using teamlogic::Semantics;
using teamlogic::Structure;
using teamlogic::Team;
using teamlogic::VarTuple;

inline std::vector<Elem> values_of(const Team& t, const Team::Row& r, const VarTuple& vars)
{
    std::vector<Elem> out;
    for (const auto& v : vars) out.push_back(r[t.column(v)]);
    return out;
}

/// for all s, s': s(det) = s'(det) implies s(detd) = s'(detd)
inline bool dep(const Team& t, const VarTuple& det, const VarTuple& detd)
{
    for (const auto& s : t.rows())
        for (const auto& s2 : t.rows())
            if (values_of(t, s, det) == values_of(t, s2, det) && values_of(t, s, detd) != values_of(t, s2, detd))
                return false;
    return true;
}

/// for all s, s' agreeing on cond there is s'' with s''(cond y) = s(cond y), s''(z) = s'(z)
inline bool ind(const Team& t, const VarTuple& y, const VarTuple& cond, const VarTuple& z)
{
    for (const auto& s : t.rows())
        for (const auto& s2 : t.rows()) {
            if (values_of(t, s, cond) != values_of(t, s2, cond)) continue;
            bool found = false;
            for (const auto& s3 : t.rows()) {
                if (values_of(t, s3, cond) == values_of(t, s, cond) && values_of(t, s3, y) == values_of(t, s, y) &&
                    values_of(t, s3, z) == values_of(t, s2, z)) {
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
    return true;
}

inline bool constant_on(const Team& t, const std::string& v)
{
    for (const auto& s : t.rows())
        if (s[t.column(v)] != t.rows().front()[t.column(v)]) return false;
    return true;
}

inline Elem term_value(const Structure& st, const Team& t, const Team::Row& r, const std::string& name)
{
    if (auto i = t.index_of(name)) return r[*i];
    return *st.find_constant(name);
}

inline bool fo_atom_row(const Structure& st, const Team& t, const Team::Row& r, const Formula& f)
{
    if (f.kind() == FormulaKind::Equal)
        return term_value(st, t, r, f.terms()[0].name) == term_value(st, t, r, f.terms()[1].name);
    std::vector<Elem> tuple;
    for (const auto& term : f.terms()) tuple.push_back(term_value(st, t, r, term.name));
    return st.find_relation(f.name())->contains(tuple);
}

inline VarTuple drop_constants(const Team& t, const VarTuple& vars)
{
    std::vector<std::string> out;
    for (const auto& v : vars)
        if (t.index_of(v)) out.push_back(v);
    return VarTuple(out);
}

/// Team semantics by exhaustive enumeration of all splits and all choice
/// functions, no pruning.
inline bool naive_eval(const Structure& st, const Team& t, const Formula& f, Semantics mode)
{
    switch (f.kind()) {
    case FormulaKind::Equal:
    case FormulaKind::Relation:
        for (const auto& r : t.rows())
            if (!fo_atom_row(st, t, r, f)) return false;
        return true;
    case FormulaKind::Not:
        if (f.child().is_fo_atom()) {
            for (const auto& r : t.rows())
                if (fo_atom_row(st, t, r, f.child())) return false;
            return true;
        }
        return t.empty();
    case FormulaKind::Dep:
        return dep(t, drop_constants(t, f.first()), drop_constants(t, f.second()));
    case FormulaKind::Ind:
        return ind(t, drop_constants(t, f.first()), drop_constants(t, f.second()), drop_constants(t, f.third()));
    case FormulaKind::And:
        return naive_eval(st, t, f.lhs(), mode) && naive_eval(st, t, f.rhs(), mode);
    case FormulaKind::Or: {
        const std::size_t n = t.size();
        const std::size_t base = mode == Semantics::Strict ? 2 : 3;
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= base;
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<Team::Row> a, b;
            std::size_t c = code;
            for (std::size_t i = 0; i < n; ++i, c /= base) {
                const auto d = c % base;
                if (d != 1) a.push_back(t.rows()[i]);
                if (d != 0) b.push_back(t.rows()[i]);
            }
            if (naive_eval(st, t.with_rows(a), f.lhs(), mode) && naive_eval(st, t.with_rows(b), f.rhs(), mode))
                return true;
        }
        return false;
    }
    case FormulaKind::Forall:
        return naive_eval(st, teamlogic::duplicate(t, f.var(), st), f.body(), mode);
    case FormulaKind::Exists: {
        const std::size_t n = t.size();
        const std::size_t m = st.size();
        const std::size_t per_row = mode == Semantics::Strict ? m : (std::size_t{1} << m) - 1;
        std::vector<std::size_t> digit(n, 0);
        for (;;) {
            std::vector<std::vector<Elem>> sets(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (mode == Semantics::Strict) {
                    sets[i] = {static_cast<Elem>(digit[i])};
                } else {
                    for (std::size_t a = 0; a < m; ++a)
                        if ((digit[i] + 1) >> a & 1) sets[i].push_back(static_cast<Elem>(a));
                }
            }
            std::size_t k = 0;
            auto choice = [&](const teamlogic::Assignment&) { return sets[k++]; };
            auto ext = teamlogic::supplement(t, f.var(), choice, mode);
            if (naive_eval(st, ext, f.body(), mode)) return true;
            std::size_t i = 0;
            while (i < n && ++digit[i] == per_row) digit[i++] = 0;
            if (i == n) return false;
        }
    }
    default:
        throw teamlogic::Error("naive_eval: unsupported node");
    }
}

/// Random formulas over the given variables, a binary R and a unary P.
struct FormulaGen {
    std::mt19937_64& rng;
    std::vector<std::string> vars;
    bool allow_dep = true;
    std::vector<std::string> fresh{"w1", "w2"};

    std::string pick(const std::vector<std::string>& from)
    {
        return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
    }

    VarTuple tuple(const std::vector<std::string>& scope, std::size_t max_len)
    {
        std::vector<std::string> out;
        const auto len = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
        for (std::size_t i = 0; i < len; ++i) out.push_back(pick(scope));
        return VarTuple(out);
    }

    Formula atom(const std::vector<std::string>& scope)
    {
        const int hi = allow_dep ? 6 : 3;
        switch (std::uniform_int_distribution<int>(0, hi)(rng)) {
        case 0:
            return Formula::equal({pick(scope)}, {pick(scope)});
        case 1:
            return Formula::relation("R", {{pick(scope)}, {pick(scope)}});
        case 2:
            return Formula::relation("P", {{pick(scope)}});
        case 3:
            return Formula::negate(std::uniform_int_distribution<int>(0, 1)(rng)
                                       ? Formula::equal({pick(scope)}, {pick(scope)})
                                       : Formula::relation("R", {{pick(scope)}, {pick(scope)}}));
        case 4:
            return Formula::dep(tuple(scope, 2), tuple(scope, 1));
        case 5:
            return Formula::ind(tuple(scope, 1), tuple(scope, 1), tuple(scope, 1));
        default:
            return Formula::ind(tuple(scope, 2), {}, tuple(scope, 1));
        }
    }

    Formula operator()(std::size_t depth) { return gen(depth, vars); }

    Formula gen(std::size_t depth, std::vector<std::string> scope)
    {
        if (depth == 0 || std::uniform_int_distribution<int>(0, 3)(rng) == 0) return atom(scope);
        switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0:
            return Formula::conj(gen(depth - 1, scope), gen(depth - 1, scope));
        case 1:
            return Formula::disj(gen(depth - 1, scope), gen(depth - 1, scope));
        default: {
            auto v = pick(std::uniform_int_distribution<int>(0, 2)(rng) == 0 ? scope : fresh);
            if (std::find(scope.begin(), scope.end(), v) == scope.end()) scope.push_back(v);
            auto body = gen(depth - 1, scope);
            return std::uniform_int_distribution<int>(0, 1)(rng) ? Formula::exists(v, body)
                                                                 : Formula::forall(v, body);
        }
        }
    }
};

inline Structure random_structure(std::mt19937_64& rng, std::size_t n)
{
    auto st = Structure::of_size(n);
    std::set<std::vector<Elem>> r, p;
    std::bernoulli_distribution coin(0.5);
    for (Elem a = 0; a < n; ++a) {
        if (coin(rng)) p.insert({a});
        for (Elem b = 0; b < n; ++b)
            if (coin(rng)) r.insert({a, b});
    }
    st.add_relation("R", 2, r);
    st.add_relation("P", 1, p);
    return st;
}

inline Team random_team(std::mt19937_64& rng, const std::vector<std::string>& scope, std::size_t n,
                        std::size_t max_rows)
{
    std::vector<Team::Row> rows;
    const auto k = std::uniform_int_distribution<std::size_t>(0, max_rows)(rng);
    std::uniform_int_distribution<Elem> val(0, static_cast<Elem>(n - 1));
    for (std::size_t i = 0; i < k; ++i) {
        Team::Row r;
        for (std::size_t j = 0; j < scope.size(); ++j) r.push_back(val(rng));
        rows.push_back(r);
    }
    return Team(scope, rows);
}

/// Random quantifier-free matrix over x, y, u, v with equality and a binary R.
inline Formula random_matrix(std::mt19937_64& rng, int depth)
{
    static const std::vector<std::string> vars{"x", "y", "u", "v"};
    auto pick = [&] { return vars[std::uniform_int_distribution<std::size_t>(0, 3)(rng)]; };
    if (depth == 0 || std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
        auto a = std::uniform_int_distribution<int>(0, 2)(rng) == 0 ? Formula::equal({pick()}, {pick()})
                                                                   : Formula::relation("R", {{pick()}, {pick()}});
        return std::bernoulli_distribution(0.5)(rng) ? Formula::negate(a) : a;
    }
    auto l = random_matrix(rng, depth - 1);
    auto r = random_matrix(rng, depth - 1);
    return std::bernoulli_distribution(0.5)(rng) ? Formula::conj(l, r) : Formula::disj(l, r);
}

/// Structure of size n with one random binary relation R.
inline Structure random_binary_structure(std::mt19937_64& rng, std::size_t n)
{
    auto st = Structure::of_size(n);
    std::set<std::vector<Elem>> r;
    std::bernoulli_distribution coin(0.5);
    for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b)
            if (coin(rng)) r.insert({a, b});
    st.add_relation("R", 2, r);
    return st;
}

}  // namespace oracle
