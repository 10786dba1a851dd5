#include <algorithm>
#include <set>
#include <sstream>

#include "teamlogic/atoms.hpp"
#include "teamlogic/teamsem.hpp"

namespace teamlogic {

AtomStatement AtomStatement::dep(VarTuple determiner, VarTuple determined)
{
    return {AtomKind::Dep, std::move(determiner), std::move(determined), {}};
}

AtomStatement AtomStatement::ind(VarTuple left, VarTuple condition, VarTuple right)
{
    return {AtomKind::Ind, std::move(left), std::move(condition), std::move(right)};
}

AtomStatement AtomStatement::canonical() const
{
    return {kind, VarTuple(a.as_set()), VarTuple(b.as_set()), VarTuple(c.as_set())};
}

std::vector<std::string> AtomStatement::vars() const
{
    std::set<std::string> s(a.begin(), a.end());
    s.insert(b.begin(), b.end());
    s.insert(c.begin(), c.end());
    return {s.begin(), s.end()};
}

bool AtomStatement::is_unconditional_simple() const
{
    return kind == AtomKind::Ind && b.empty() && a.size() == 1 && c.size() == 1;
}

Formula AtomStatement::to_formula() const
{
    return kind == AtomKind::Dep ? Formula::dep(a, b) : Formula::ind(a, b, c);
}

std::string AtomStatement::to_string() const { return teamlogic::to_string(to_formula()); }

AtomStatement parse_atom(std::string_view text)
{
    auto f = parse_formula(text);
    if (f.kind() == FormulaKind::Dep) return AtomStatement::dep(f.first(), f.second());
    if (f.kind() == FormulaKind::Ind) return AtomStatement::ind(f.first(), f.second(), f.third());
    throw Error("expected a dep(...) or ind(...) atom, got '" + std::string(text) + "'");
}

std::vector<AtomStatement> parse_atom_set(std::string_view text)
{
    std::vector<AtomStatement> out;
    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_atom(line));
        } catch (const Error& e) {
            throw Error("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::vector<std::string> universe_of(const std::vector<AtomStatement>& atoms, const AtomStatement* goal)
{
    std::set<std::string> s;
    for (const auto& t : atoms)
        for (auto& v : t.vars()) s.insert(v);
    if (goal)
        for (auto& v : goal->vars()) s.insert(v);
    return {s.begin(), s.end()};
}

bool holds(const Team& team, const AtomStatement& atom)
{
    return atom.kind == AtomKind::Dep ? dep_holds(team, atom.a, atom.b) : ind_holds(team, atom.a, atom.b, atom.c);
}

// Armstrong ---------------------------------------------------------------

std::vector<std::string> armstrong_closure(const std::vector<AtomStatement>& T, const VarTuple& start,
                                           const std::vector<std::string>& universe)
{
    std::set<std::string> closure(start.begin(), start.end());
    for (const auto& v : closure)
        if (std::find(universe.begin(), universe.end(), v) == universe.end())
            throw ScopeError("variable '" + v + "' is outside the universe");
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : T) {
            if (t.kind != AtomKind::Dep) throw Error("armstrong_closure expects dependence atoms only");
            if (!std::all_of(t.a.begin(), t.a.end(), [&](const auto& u) { return closure.count(u) > 0; })) continue;
            for (const auto& v : t.b) changed |= closure.insert(v).second;
        }
    }
    return {closure.begin(), closure.end()};
}

namespace {

VarTuple tuple_of(const std::set<std::string>& s) { return VarTuple(std::vector<std::string>(s.begin(), s.end())); }

std::size_t push(DerivationTrace& tr, Rule r, std::vector<std::size_t> premises, AtomStatement c)
{
    tr.steps.push_back({r, std::move(premises), std::move(c)});
    return tr.steps.size() - 1;
}

}  // namespace

Derivation armstrong_derives(const std::vector<AtomStatement>& T, const AtomStatement& goal)
{
    if (goal.kind != AtomKind::Dep) throw Error("armstrong_derives expects a dependence goal");
    for (const auto& t : T)
        if (t.kind != AtomKind::Dep) throw Error("armstrong_derives expects dependence atoms only");

    Derivation out;
    auto& tr = out.trace;
    std::vector<std::size_t> premise_step(T.size());
    for (std::size_t i = 0; i < T.size(); ++i) premise_step[i] = push(tr, Rule::Premise, {}, T[i]);

    // Invariant: step `current` derives =(Y ; C) for the closure-so-far C.
    const VarTuple Y(goal.a.as_set());
    std::set<std::string> C(Y.begin(), Y.end());
    std::size_t current = push(tr, Rule::DepReflexivity, {}, AtomStatement::dep(Y, Y));
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < T.size(); ++i) {
            const auto& t = T[i];
            if (!std::all_of(t.a.begin(), t.a.end(), [&](const auto& u) { return C.count(u) > 0; })) continue;
            if (std::all_of(t.b.begin(), t.b.end(), [&](const auto& v) { return C.count(v) > 0; })) continue;
            std::set<std::string> next = C;
            next.insert(t.b.begin(), t.b.end());
            // =(U;V) augmented by C gives =(C ; C V); compose with =(Y ; C).
            auto aug = push(tr, Rule::ArmstrongAugmentation, {premise_step[i]},
                            AtomStatement::dep(tuple_of(C), tuple_of(next)));
            current = push(tr, Rule::DepTransitivity, {current, aug}, AtomStatement::dep(Y, tuple_of(next)));
            C = std::move(next);
            changed = true;
        }
    }
    out.derived = std::all_of(goal.b.begin(), goal.b.end(), [&](const auto& v) { return C.count(v) > 0; });
    if (out.derived) {
        const VarTuple X(goal.b.as_set());
        auto refl = push(tr, Rule::DepReflexivity, {}, AtomStatement::dep(X, X));
        auto mono = push(tr, Rule::DepMonotonicity, {refl}, AtomStatement::dep(tuple_of(C), X));
        auto fin = push(tr, Rule::DepTransitivity, {current, mono}, AtomStatement::dep(Y, X));
        if (!(goal == tr.steps[fin].conclusion)) push(tr, Rule::DepPermutation, {fin}, goal);
    }
    return out;
}

// Independence axioms -----------------------------------------------------

Derivation independence_derives(const std::vector<AtomStatement>& T, const AtomStatement& goal)
{
    if (!goal.is_unconditional_simple()) throw Error("independence_derives expects a goal of the form ind(y ;; x)");
    for (const auto& t : T)
        if (!t.is_unconditional_simple())
            throw Error("independence_derives expects unconditional single-variable atoms, got " + t.to_string());

    Derivation out;
    auto& tr = out.trace;
    const auto& y = goal.a[0];
    const auto& x = goal.c[0];
    auto find = [&](const std::string& u, const std::string& v) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < T.size(); ++i)
            if (T[i].a[0] == u && T[i].c[0] == v) return i;
        return std::nullopt;
    };
    auto premise = [&](std::size_t i) { return push(tr, Rule::Premise, {}, T[i]); };
    const VarTuple Y{y}, X{x};

    if (auto i = find(y, x)) {
        premise(*i);
    } else if (auto j = find(x, y)) {
        auto p = premise(*j);
        push(tr, Rule::Symmetry, {p}, goal);
    } else if (auto k = find(x, x)) {
        // x ⊥ x gives x ⊥ y, then symmetry
        auto p = premise(*k);
        auto c = push(tr, Rule::Constancy, {p}, AtomStatement::ind(X, {}, Y));
        push(tr, Rule::Symmetry, {c}, goal);
    } else if (auto m = find(y, y)) {
        auto p = premise(*m);
        push(tr, Rule::Constancy, {p}, goal);
    } else {
        return out;
    }
    out.derived = true;
    return out;
}

// Counterexamples -----------------------------------------------------------

std::optional<Team> counterexample_armstrong(const std::vector<AtomStatement>& T, const AtomStatement& goal)
{
    if (armstrong_derives(T, goal).derived) return std::nullopt;
    const auto universe = universe_of(T, &goal);
    const auto closure = armstrong_closure(T, goal.a, universe);
    Team::Row s(universe.size(), 0), s2(universe.size(), 0);
    for (std::size_t i = 0; i < universe.size(); ++i)
        if (!std::binary_search(closure.begin(), closure.end(), universe[i])) s2[i] = 1;
    Team team(universe, {s, s2});
    for (const auto& t : T)
        if (!holds(team, t)) throw Error("internal: Armstrong counterexample violates " + t.to_string());
    if (holds(team, goal)) throw Error("internal: Armstrong counterexample satisfies the goal");
    return team;
}

std::optional<IndependenceCounterexample> counterexample_independence(const std::vector<AtomStatement>& T,
                                                                      const AtomStatement& goal)
{
    if (independence_derives(T, goal).derived) return std::nullopt;
    const auto universe = universe_of(T, &goal);
    const auto& y = goal.a[0];
    const auto& x = goal.c[0];

    // V: the self-independent (hence constant) variables of T.
    std::vector<std::string> V;
    for (const auto& t : T)
        if (t.a[0] == t.c[0] && std::find(V.begin(), V.end(), t.a[0]) == V.end()) V.push_back(t.a[0]);
    std::sort(V.begin(), V.end());

    // Domain: one element per v in V, then the two new elements 0 and 1.
    std::vector<std::string> names;
    for (const auto& v : V) names.push_back("v_" + v);
    names.push_back("0");
    names.push_back("1");
    Structure st(names);
    const Elem zero = static_cast<Elem>(V.size());
    const Elem one = zero + 1;
    const Elem m = static_cast<Elem>(names.size());

    std::vector<std::size_t> free_cols;
    Team::Row base(universe.size(), 0);
    std::size_t xcol = 0, ycol = 0;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        const auto& w = universe[i];
        if (auto it = std::find(V.begin(), V.end(), w); it != V.end()) {
            base[i] = static_cast<Elem>(it - V.begin());
        } else if (w == x || w == y) {
            if (w == x) xcol = i;
            if (w == y) ycol = i;
        } else {
            free_cols.push_back(i);
        }
    }

    std::vector<Team::Row> rows;
    for (Elem d : {zero, one}) {
        Team::Row r = base;
        r[xcol] = d;
        r[ycol] = d;
        std::vector<Elem> digit(free_cols.size(), 0);
        for (;;) {
            for (std::size_t k = 0; k < free_cols.size(); ++k) r[free_cols[k]] = digit[k];
            rows.push_back(r);
            std::size_t k = 0;
            while (k < digit.size() && ++digit[k] == m) digit[k++] = 0;
            if (k == digit.size()) break;
        }
    }
    Team team(universe, std::move(rows));
    for (const auto& t : T)
        if (!holds(team, t)) throw Error("internal: independence counterexample violates " + t.to_string());
    if (holds(team, goal)) throw Error("internal: independence counterexample satisfies the goal");
    return IndependenceCounterexample{std::move(st), std::move(team)};
}

}  // namespace teamlogic
