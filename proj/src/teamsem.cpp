#include "teamlogic/teamsem.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>
#include <unordered_map>

namespace teamlogic {

namespace {

/// Team columns of a variable tuple. Constants are constant columns and are
/// irrelevant to dependence and independence, so they are dropped.
std::vector<std::size_t> tuple_columns(const std::vector<std::string>& scope, const Structure* st, const VarTuple& t)
{
    std::vector<std::size_t> out;
    for (const auto& name : t) {
        auto it = std::find(scope.begin(), scope.end(), name);
        if (it != scope.end()) {
            out.push_back(static_cast<std::size_t>(it - scope.begin()));
        } else if (!st || !st->find_constant(name)) {
            throw ScopeError("unbound variable '" + name + "'");
        }
    }
    return out;
}

/// For every row an id such that equal projections get equal ids.
std::vector<std::uint32_t> projection_ids(const std::vector<Team::Row>& rows, const std::vector<std::size_t>& cols)
{
    std::vector<std::uint32_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0u);
    auto less = [&](std::uint32_t a, std::uint32_t b) {
        for (auto c : cols) {
            if (rows[a][c] != rows[b][c]) return rows[a][c] < rows[b][c];
        }
        return false;
    };
    std::sort(order.begin(), order.end(), less);
    std::vector<std::uint32_t> id(rows.size());
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && less(order[i - 1], order[i])) ++next;
        id[order[i]] = next;
    }
    return id;
}

bool dep_by_columns(const std::vector<Team::Row>& rows, const std::vector<std::size_t>& det,
                    const std::vector<std::size_t>& detd)
{
    if (rows.size() < 2) return true;
    auto a = projection_ids(rows, det);
    auto b = projection_ids(rows, detd);
    std::vector<std::uint32_t> image(rows.size(), UINT32_MAX);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (image[a[r]] == UINT32_MAX)
            image[a[r]] = b[r];
        else if (image[a[r]] != b[r])
            return false;
    }
    return true;
}

/// Within every class of equal `cond` values, the (cond+left)-patterns and
/// right-patterns must combine freely: the number of distinct pairs equals
/// the product of the distinct counts.
bool ind_by_columns(const std::vector<Team::Row>& rows, const std::vector<std::size_t>& left,
                    const std::vector<std::size_t>& cond, const std::vector<std::size_t>& right)
{
    if (rows.size() < 2) return true;
    std::vector<std::size_t> cond_left = cond;
    cond_left.insert(cond_left.end(), left.begin(), left.end());
    auto cx = projection_ids(rows, cond);
    auto ca = projection_ids(rows, cond_left);
    auto cb = projection_ids(rows, right);
    std::vector<std::array<std::uint32_t, 3>> triples(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) triples[r] = {cx[r], ca[r], cb[r]};
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

    std::vector<std::uint32_t> bs;
    for (std::size_t i = 0; i < triples.size();) {
        std::size_t j = i;
        std::size_t distinct_a = 0;
        bs.clear();
        for (; j < triples.size() && triples[j][0] == triples[i][0]; ++j) {
            if (j == i || triples[j][1] != triples[j - 1][1]) ++distinct_a;
            bs.push_back(triples[j][2]);
        }
        std::sort(bs.begin(), bs.end());
        const auto distinct_b = static_cast<std::size_t>(std::unique(bs.begin(), bs.end()) - bs.begin());
        if (j - i != distinct_a * distinct_b) return false;
        i = j;
    }
    return true;
}

// Tarskian evaluation ------------------------------------------------------

bool tarski(const Structure& st, const Formula& f, std::vector<std::string>& scope, std::vector<Elem>& vals);

Elem term_value(const Structure& st, const Term& t, const std::vector<std::string>& scope, const std::vector<Elem>& vals)
{
    // innermost binding wins
    for (std::size_t i = scope.size(); i-- > 0;)
        if (scope[i] == t.name) return vals[i];
    if (auto c = st.find_constant(t.name)) return *c;
    throw ScopeError("unbound variable '" + t.name + "'");
}

bool fo_atom(const Structure& st, const Formula& f, const std::vector<std::string>& scope,
             const std::vector<Elem>& vals)
{
    if (f.kind() == FormulaKind::Equal)
        return term_value(st, f.terms()[0], scope, vals) == term_value(st, f.terms()[1], scope, vals);
    const Relation* rel = st.find_relation(f.name());
    if (!rel) throw Error("unknown relation '" + f.name() + "'");
    if (rel->arity != f.terms().size()) throw Error("arity mismatch for relation '" + f.name() + "'");
    std::vector<Elem> tuple;
    tuple.reserve(f.terms().size());
    for (const auto& t : f.terms()) tuple.push_back(term_value(st, t, scope, vals));
    return rel->tuples.count(tuple) > 0;
}

bool tarski(const Structure& st, const Formula& f, std::vector<std::string>& scope, std::vector<Elem>& vals)
{
    switch (f.kind()) {
    case FormulaKind::Equal:
    case FormulaKind::Relation:
        return fo_atom(st, f, scope, vals);
    case FormulaKind::Not:
        if (!f.child().is_fo_atom()) throw Error("pointwise evaluation needs a first-order formula");
        return !fo_atom(st, f.child(), scope, vals);
    case FormulaKind::And:
        return tarski(st, f.lhs(), scope, vals) && tarski(st, f.rhs(), scope, vals);
    case FormulaKind::Or:
        return tarski(st, f.lhs(), scope, vals) || tarski(st, f.rhs(), scope, vals);
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
        const bool want = f.kind() == FormulaKind::Exists;
        scope.push_back(f.var());
        vals.push_back(0);
        bool result = !want;
        for (Elem a = 0; a < st.size(); ++a) {
            vals.back() = a;
            if (tarski(st, f.body(), scope, vals) == want) {
                result = want;
                break;
            }
        }
        scope.pop_back();
        vals.pop_back();
        return result;
    }
    default:
        throw Error("pointwise evaluation needs a first-order formula");
    }
}

// Validation ----------------------------------------------------------------

void validate(const Structure& st, const Formula& f, std::vector<std::string>& bound)
{
    auto check_name = [&](const std::string& n) {
        if (std::find(bound.begin(), bound.end(), n) != bound.end()) return;
        if (st.find_constant(n)) return;
        throw ScopeError("unbound variable '" + n + "'");
    };
    switch (f.kind()) {
    case FormulaKind::Equal:
        for (const auto& t : f.terms()) check_name(t.name);
        return;
    case FormulaKind::Relation: {
        const Relation* rel = st.find_relation(f.name());
        if (!rel) throw Error("unknown relation '" + f.name() + "'");
        if (rel->arity != f.terms().size())
            throw Error("relation '" + f.name() + "' has arity " + std::to_string(rel->arity) + ", used with " +
                        std::to_string(f.terms().size()) + " arguments");
        for (const auto& t : f.terms()) check_name(t.name);
        return;
    }
    case FormulaKind::Dep:
    case FormulaKind::Ind:
        for (const auto& v : f.first()) check_name(v);
        for (const auto& v : f.second()) check_name(v);
        if (f.kind() == FormulaKind::Ind)
            for (const auto& v : f.third()) check_name(v);
        return;
    case FormulaKind::Not:
        validate(st, f.child(), bound);
        return;
    case FormulaKind::And:
    case FormulaKind::Or:
        validate(st, f.lhs(), bound);
        validate(st, f.rhs(), bound);
        return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
        bound.push_back(f.var());
        validate(st, f.body(), bound);
        bound.pop_back();
        return;
    case FormulaKind::SlashedExists:
    case FormulaKind::Henkin:
        throw Error("slashed quantifiers and branching prefixes must be desugared before evaluation");
    }
}

void flat_conjuncts(const Formula& f, std::vector<Formula>& out)
{
    if (f.kind() == FormulaKind::And) {
        flat_conjuncts(f.lhs(), out);
        flat_conjuncts(f.rhs(), out);
    } else if (is_first_order(f)) {
        out.push_back(f);
    }
}

/// An independence atom whose left or right side is empty or inside the
/// condition holds in every team.
bool trivial_ind(const Formula& f)
{
    auto inside = [&](const VarTuple& t) {
        for (const auto& v : t)
            if (!f.second().contains(v)) return false;
        return true;
    };
    return f.kind() == FormulaKind::Ind && (inside(f.first()) || inside(f.third()));
}

/// is_downward_closed, also accepting trivially valid independence atoms.
bool closed_downward(const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::Ind:
        return trivial_ind(f);
    case FormulaKind::SlashedExists:
    case FormulaKind::Henkin:
        return false;
    case FormulaKind::Not:
        return true;
    default:
        for (std::size_t i = 0; i < f.num_children(); ++i)
            if (!closed_downward(f.child(i))) return false;
        return true;
    }
}

/// Non-empty subsets of `values`: the full set, then singletons, then the
/// rest by decreasing size.
std::vector<std::vector<Elem>> lax_options(const std::vector<Elem>& values)
{
    const std::size_t k = values.size();
    std::vector<std::uint32_t> masks;
    const std::uint32_t full = (k >= 32) ? ~0u : ((1u << k) - 1);
    for (std::uint32_t m = 1; m <= full && m != 0; ++m) masks.push_back(m);
    auto rank = [&](std::uint32_t m) {
        if (m == full) return 0;
        if (std::popcount(m) == 1) return 1;
        return 2;
    };
    std::stable_sort(masks.begin(), masks.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (rank(a) != rank(b)) return rank(a) < rank(b);
        return std::popcount(a) > std::popcount(b);
    });
    std::vector<std::vector<Elem>> out;
    out.reserve(masks.size());
    for (auto m : masks) {
        std::vector<Elem> s;
        for (std::size_t i = 0; i < k; ++i)
            if (m & (1u << i)) s.push_back(values[i]);
        out.push_back(std::move(s));
    }
    return out;
}

class Evaluator {
public:
    Evaluator(const Structure& st, const EvalOptions& opts) : st_(st), opts_(opts) {}

    bool eval(const Formula& f, const Team& X)
    {
        switch (f.kind()) {
        case FormulaKind::Equal:
        case FormulaKind::Relation:
            return all_rows(f, X, true);
        case FormulaKind::Not:
            if (f.child().is_fo_atom()) return all_rows(f.child(), X, false);
            return X.empty();
        case FormulaKind::Dep:
            return dep_by_columns(X.rows(), tuple_columns(X.scope(), &st_, f.first()),
                                  tuple_columns(X.scope(), &st_, f.second()));
        case FormulaKind::Ind:
            return ind_by_columns(X.rows(), tuple_columns(X.scope(), &st_, f.first()),
                                  tuple_columns(X.scope(), &st_, f.second()),
                                  tuple_columns(X.scope(), &st_, f.third()));
        case FormulaKind::And:
            return eval(f.lhs(), X) && eval(f.rhs(), X);
        case FormulaKind::Forall:
            return eval(f.body(), duplicate(X, f.var(), st_));
        case FormulaKind::Exists:
        case FormulaKind::Or:
            return memoized(f, X);
        case FormulaKind::SlashedExists:
        case FormulaKind::Henkin:
            break;
        }
        throw Error("slashed quantifiers and branching prefixes must be desugared before evaluation");
    }

private:
    struct Key {
        const void* node;
        std::vector<std::string> scope;
        std::vector<Elem> flat;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const
        {
            std::size_t h = std::hash<const void*>{}(k.node);
            auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
            mix(k.scope.size());
            for (const auto& s : k.scope) mix(std::hash<std::string>{}(s));
            for (Elem e : k.flat) mix(e);
            return h;
        }
    };

    const Structure& st_;
    EvalOptions opts_;
    std::uint64_t spent_ = 0;
    std::unordered_map<Key, bool, KeyHash> memo_;
    std::unordered_map<const void*, std::vector<std::string>> free_cache_;

    void spend()
    {
        if (++spent_ > opts_.budget)
            throw SearchExhausted("search exhausted after " + std::to_string(opts_.budget) + " candidate extensions");
    }

    const std::vector<std::string>& free_of(const Formula& f)
    {
        auto it = free_cache_.find(f.id());
        if (it == free_cache_.end()) it = free_cache_.emplace(f.id(), free_vars(f)).first;
        return it->second;
    }

    // Lax semantics is local: only the columns free in f matter.
    std::optional<Team> localize(const Formula& f, const Team& X)
    {
        if (opts_.semantics != Semantics::Lax) return std::nullopt;
        const auto& fv = free_of(f);
        std::vector<std::string> keep;
        for (const auto& v : X.scope())
            if (std::find(fv.begin(), fv.end(), v) != fv.end()) keep.push_back(v);
        if (keep.size() == X.scope().size()) return std::nullopt;
        return X.project(keep);
    }

    bool memoized(const Formula& f, const Team& X)
    {
        if (auto local = localize(f, X)) return memoized(f, *local);
        if (!opts_.memoize) return f.kind() == FormulaKind::Exists ? eval_exists(f, X) : eval_or(f, X);
        Key key{f.id(), X.scope(), {}};
        key.flat.reserve(X.size() * X.scope().size() + 1);
        key.flat.push_back(static_cast<Elem>(X.size()));
        for (const auto& r : X.rows()) key.flat.insert(key.flat.end(), r.begin(), r.end());
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const bool result = f.kind() == FormulaKind::Exists ? eval_exists(f, X) : eval_or(f, X);
        memo_.emplace(std::move(key), result);
        return result;
    }

    bool all_rows(const Formula& atom, const Team& X, bool want)
    {
        std::vector<std::string> scope = X.scope();
        for (const auto& r : X.rows()) {
            std::vector<Elem> vals = r;
            if (fo_atom(st_, atom, scope, vals) != want) return false;
        }
        return true;
    }

    bool pointwise(const Formula& f, std::vector<std::string>& scope, std::vector<Elem>& vals)
    {
        return tarski(st_, f, scope, vals);
    }

    bool eval_exists(const Formula& f, const Team& X)
    {
        const auto& var = f.var();
        std::vector<std::string> scope = X.scope();
        std::size_t col = scope.size();
        if (auto i = X.index_of(var))
            col = *i;
        else
            scope.push_back(var);

        if (X.empty()) return eval(f.body(), Team(scope));
        if (opts_.semantics == Semantics::Lax) {
            const auto& fv = free_of(f.body());
            if (std::find(fv.begin(), fv.end(), var) == fv.end()) {
                // the witness is never read, so any single value will do
                std::vector<std::string> rest;
                for (const auto& v : X.scope())
                    if (v != var) rest.push_back(v);
                return eval(f.body(), X.project(rest));
            }
        }

        std::vector<Formula> flat;
        flat_conjuncts(f.body(), flat);
        const bool singletons = opts_.semantics == Semantics::Strict || closed_downward(f.body());

        std::vector<std::vector<std::vector<Elem>>> options(X.size());
        std::vector<Elem> vals;
        for (std::size_t i = 0; i < X.size(); ++i) {
            vals = X.rows()[i];
            if (col == vals.size()) vals.push_back(0);
            std::vector<Elem> allowed;
            for (Elem a = 0; a < st_.size(); ++a) {
                vals[col] = a;
                bool ok = true;
                for (const auto& c : flat) {
                    if (!pointwise(c, scope, vals)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) allowed.push_back(a);
            }
            if (allowed.empty()) return false;
            if (singletons) {
                for (Elem a : allowed) options[i].push_back({a});
            } else {
                options[i] = lax_options(allowed);
            }
        }

        std::vector<std::size_t> digit(X.size(), 0);
        for (;;) {
            std::vector<Team::Row> rows;
            for (std::size_t i = 0; i < X.size(); ++i) {
                for (Elem a : options[i][digit[i]]) {
                    Team::Row r = X.rows()[i];
                    if (col == r.size())
                        r.push_back(a);
                    else
                        r[col] = a;
                    rows.push_back(std::move(r));
                }
            }
            spend();
            if (eval(f.body(), Team(scope, std::move(rows)))) return true;
            std::size_t i = 0;
            while (i < digit.size() && ++digit[i] == options[i].size()) digit[i++] = 0;
            if (i == digit.size()) return false;
        }
    }

    bool eval_or(const Formula& f, const Team& X)
    {
        const Formula& lhs = f.lhs();
        const Formula& rhs = f.rhs();
        if (X.empty()) return eval(lhs, X) && eval(rhs, X);

        const bool lflat = is_first_order(lhs);
        const bool rflat = is_first_order(rhs);
        const bool ldc = closed_downward(lhs);
        const bool rdc = closed_downward(rhs);
        const bool strict = opts_.semantics == Semantics::Strict;

        // Per row: list of (in_left, in_right) placements worth trying.
        using Placement = std::pair<bool, bool>;
        std::vector<std::vector<Placement>> options(X.size());
        std::vector<std::string> scope = X.scope();
        std::vector<Elem> vals;
        for (std::size_t i = 0; i < X.size(); ++i) {
            vals = X.rows()[i];
            const bool can_l = !lflat || pointwise(lhs, scope, vals);
            const bool can_r = !rflat || pointwise(rhs, scope, vals);
            if (!can_l && !can_r) return false;
            std::vector<Placement> opts;
            if (can_l) opts.push_back({true, false});
            if (can_r) opts.push_back({false, true});
            if (!strict && can_l && can_r) opts.push_back({true, true});

            if (strict) {
                // With a flat satisfied side and a downward-closed other side,
                // sending the row to the flat side is never worse.
                if (can_l && can_r) {
                    if (lflat && rdc)
                        opts = {{true, false}};
                    else if (rflat && ldc)
                        opts = {{false, true}};
                }
            } else {
                // Membership in a flat side the row satisfies is irrelevant; keep it in.
                if (lflat && can_l)
                    for (auto& p : opts) p.first = true;
                if (rflat && can_r)
                    for (auto& p : opts) p.second = true;
                std::sort(opts.begin(), opts.end());
                opts.erase(std::unique(opts.begin(), opts.end()), opts.end());
                // A downward-closed side never needs a row the other side already covers.
                auto drop_if_dominated = [&](bool left_side) {
                    std::vector<Placement> kept;
                    for (const auto& p : opts) {
                        const bool in_side = left_side ? p.first : p.second;
                        Placement without = left_side ? Placement{false, p.second} : Placement{p.first, false};
                        if (in_side && (without.first || without.second) &&
                            std::find(opts.begin(), opts.end(), without) != opts.end())
                            continue;
                        kept.push_back(p);
                    }
                    opts = std::move(kept);
                };
                if (ldc && !lflat) drop_if_dominated(true);
                if (rdc && !rflat) drop_if_dominated(false);
            }
            options[i] = std::move(opts);
        }

        std::vector<std::size_t> digit(X.size(), 0);
        for (;;) {
            std::vector<Team::Row> left, right;
            for (std::size_t i = 0; i < X.size(); ++i) {
                auto [l, r] = options[i][digit[i]];
                if (l) left.push_back(X.rows()[i]);
                if (r) right.push_back(X.rows()[i]);
            }
            spend();
            if (eval(lhs, X.with_rows(std::move(left))) && eval(rhs, X.with_rows(std::move(right)))) return true;
            std::size_t i = 0;
            while (i < digit.size() && ++digit[i] == options[i].size()) digit[i++] = 0;
            if (i == digit.size()) return false;
        }
    }
};

}  // namespace

bool dep_holds_columns(const std::vector<Team::Row>& rows, const std::vector<std::size_t>& determiner,
                       const std::vector<std::size_t>& determined)
{
    return dep_by_columns(rows, determiner, determined);
}

bool ind_holds_columns(const std::vector<Team::Row>& rows, const std::vector<std::size_t>& left,
                       const std::vector<std::size_t>& condition, const std::vector<std::size_t>& right)
{
    return ind_by_columns(rows, left, condition, right);
}

bool dep_holds(const Team& team, const VarTuple& determiner, const VarTuple& determined)
{
    return dep_by_columns(team.rows(), tuple_columns(team.scope(), nullptr, determiner),
                          tuple_columns(team.scope(), nullptr, determined));
}

bool ind_holds(const Team& team, const VarTuple& left, const VarTuple& condition, const VarTuple& right)
{
    return ind_by_columns(team.rows(), tuple_columns(team.scope(), nullptr, left),
                          tuple_columns(team.scope(), nullptr, condition),
                          tuple_columns(team.scope(), nullptr, right));
}

bool evaluate(const Structure& structure, const Team& team, const Formula& f, const EvalOptions& opts)
{
    std::vector<std::string> bound = team.scope();
    validate(structure, f, bound);
    for (const auto& r : team.rows())
        for (Elem e : r)
            if (e >= structure.size()) throw Error("team value outside the structure's domain");
    return Evaluator(structure, opts).eval(f, team);
}

bool holds_at(const Structure& structure, const Assignment& s, const Formula& f)
{
    std::vector<std::string> scope = s.scope;
    std::vector<Elem> vals = s.values;
    return tarski(structure, f, scope, vals);
}

bool sentence_sat(const Structure& structure, const Formula& sentence, const EvalOptions& opts)
{
    auto f = contains_sugar(sentence) ? desugar(sentence) : sentence;
    for (const auto& v : free_vars(f))
        if (!structure.find_constant(v)) throw ScopeError("not a sentence: '" + v + "' is free");
    return evaluate(structure, Team::unit(), f, opts);
}

// Validity search -----------------------------------------------------------

namespace {

void collect_symbols(const Formula& f, std::map<std::string, std::size_t>& relations)
{
    if (f.kind() == FormulaKind::Relation) {
        auto [it, fresh] = relations.emplace(f.name(), f.terms().size());
        if (!fresh && it->second != f.terms().size())
            throw Error("relation '" + f.name() + "' used with two different arities");
    }
    for (std::size_t i = 0; i < f.num_children(); ++i) collect_symbols(f.child(i), relations);
}

}  // namespace

ValidityReport validity_search(const Formula& sentence, std::size_t max_size, const ValidityOptions& opts)
{
    auto f = contains_sugar(sentence) ? desugar(sentence) : sentence;
    std::map<std::string, std::size_t> relations;
    collect_symbols(f, relations);
    const auto constants = free_vars(f);

    // Budget check before any work.
    std::uint64_t total = 0;
    for (std::size_t n = 1; n <= max_size; ++n) {
        std::uint64_t count = 1;
        for (const auto& [name, arity] : relations) {
            std::uint64_t cells = 1;
            for (std::size_t k = 0; k < arity; ++k) cells *= n;
            if (cells >= 40) throw CapExceeded("validity search: too many relation interpretations");
            count *= std::uint64_t{1} << cells;
            if (count > opts.structure_cap) throw CapExceeded("validity search: too many relation interpretations");
        }
        for (std::size_t c = 0; c < constants.size(); ++c) count *= n;
        total += count;
        if (total > opts.structure_cap) throw CapExceeded("validity search: too many structures");
    }

    ValidityReport report;
    for (std::size_t n = 1; n <= max_size; ++n) {
        report.max_size = n;
        std::vector<std::pair<std::string, std::size_t>> rels(relations.begin(), relations.end());
        std::vector<std::uint64_t> cells(rels.size());
        for (std::size_t r = 0; r < rels.size(); ++r) {
            cells[r] = 1;
            for (std::size_t k = 0; k < rels[r].second; ++k) cells[r] *= n;
        }
        // odometer over relation bitmasks, then constants
        std::vector<std::uint64_t> rel_digit(rels.size(), 0);
        std::vector<Elem> const_digit(constants.size(), 0);
        for (;;) {
            Structure st = Structure::of_size(n);
            for (std::size_t r = 0; r < rels.size(); ++r) {
                std::set<std::vector<Elem>> tuples;
                for (std::uint64_t c = 0; c < cells[r]; ++c) {
                    if (!(rel_digit[r] >> c & 1)) continue;
                    std::vector<Elem> t(rels[r].second);
                    std::uint64_t x = c;
                    for (std::size_t k = t.size(); k-- > 0;) {
                        t[k] = static_cast<Elem>(x % n);
                        x /= n;
                    }
                    tuples.insert(std::move(t));
                }
                st.add_relation(rels[r].first, rels[r].second, std::move(tuples));
            }
            for (std::size_t c = 0; c < constants.size(); ++c) st.set_constant(constants[c], const_digit[c]);

            ++report.structures_checked;
            if (!sentence_sat(st, f, opts.eval)) {
                report.valid = false;
                report.countermodel = std::move(st);
                return report;
            }

            std::size_t i = 0;
            for (; i < const_digit.size(); ++i) {
                if (++const_digit[i] < n) break;
                const_digit[i] = 0;
            }
            if (i < const_digit.size()) continue;
            std::size_t r = 0;
            for (; r < rel_digit.size(); ++r) {
                if (++rel_digit[r] < (std::uint64_t{1} << cells[r])) break;
                rel_digit[r] = 0;
            }
            if (r == rel_digit.size()) break;
        }
    }
    return report;
}

}  // namespace teamlogic
