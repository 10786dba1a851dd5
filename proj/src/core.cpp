#include "teamlogic/core.hpp"

#include <algorithm>
#include <limits>

namespace teamlogic {

std::string_view to_string(Semantics s) { return s == Semantics::Strict ? "strict" : "lax"; }

Semantics parse_semantics(std::string_view text)
{
    if (text == "strict") return Semantics::Strict;
    if (text == "lax") return Semantics::Lax;
    throw Error("unknown semantics '" + std::string(text) + "' (expected strict or lax)");
}

// VarTuple ----------------------------------------------------------------

bool VarTuple::contains(std::string_view var) const
{
    return std::find(vars_.begin(), vars_.end(), var) != vars_.end();
}

std::vector<std::string> VarTuple::as_set() const
{
    std::vector<std::string> out = vars_;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool VarTuple::same_set(const VarTuple& other) const { return as_set() == other.as_set(); }

VarTuple VarTuple::concat(const VarTuple& other) const
{
    std::vector<std::string> out = vars_;
    out.insert(out.end(), other.vars_.begin(), other.vars_.end());
    return VarTuple(std::move(out));
}

std::string VarTuple::to_string() const
{
    std::string out;
    for (const auto& v : vars_) {
        if (!out.empty()) out += ' ';
        out += v;
    }
    return out;
}

VarTuple set_intersection(const VarTuple& a, const VarTuple& b)
{
    auto sa = a.as_set();
    auto sb = b.as_set();
    std::vector<std::string> out;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
    return VarTuple(std::move(out));
}

VarTuple set_union(const VarTuple& a, const VarTuple& b)
{
    auto sa = a.as_set();
    auto sb = b.as_set();
    std::vector<std::string> out;
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
    return VarTuple(std::move(out));
}

// Structure ---------------------------------------------------------------

bool Relation::contains(std::span<const Elem> tuple) const
{
    return tuples.count(std::vector<Elem>(tuple.begin(), tuple.end())) > 0;
}

Structure::Structure(std::vector<std::string> element_names) : names_(std::move(element_names))
{
    if (names_.empty()) throw Error("structure domain must be non-empty");
    auto sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error("duplicate domain element name");
    for (const auto& n : names_)
        if (n.empty()) throw Error("empty domain element name");
}

Structure Structure::of_size(std::size_t n)
{
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return Structure(std::move(names));
}

const std::string& Structure::element_name(Elem e) const
{
    if (e >= names_.size()) throw Error("element id out of range");
    return names_[e];
}

std::optional<Elem> Structure::find_element(std::string_view name) const
{
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<Elem>(it - names_.begin());
}

Elem Structure::element(std::string_view name) const
{
    if (auto e = find_element(name)) return *e;
    throw Error("unknown domain element '" + std::string(name) + "'");
}

void Structure::add_relation(std::string name, std::size_t arity, std::set<std::vector<Elem>> tuples)
{
    if (find_relation(name)) throw Error("relation '" + name + "' declared twice");
    for (const auto& t : tuples) {
        if (t.size() != arity) throw Error("tuple arity mismatch in relation '" + name + "'");
        for (Elem e : t)
            if (e >= size()) throw Error("tuple element outside the domain in relation '" + name + "'");
    }
    relations_.push_back(Relation{std::move(name), arity, std::move(tuples)});
}

void Structure::set_constant(std::string name, Elem value)
{
    if (value >= size()) throw Error("constant '" + name + "' interpreted outside the domain");
    for (auto& [n, v] : constants_) {
        if (n == name) {
            v = value;
            return;
        }
    }
    constants_.emplace_back(std::move(name), value);
}

const Relation* Structure::find_relation(std::string_view name) const
{
    for (const auto& r : relations_)
        if (r.name == name) return &r;
    return nullptr;
}

std::optional<Elem> Structure::find_constant(std::string_view name) const
{
    for (const auto& [n, v] : constants_)
        if (n == name) return v;
    return std::nullopt;
}

// Assignment / Team -------------------------------------------------------

Elem Assignment::at(std::string_view var) const
{
    for (std::size_t i = 0; i < scope.size(); ++i)
        if (scope[i] == var) return values[i];
    throw ScopeError("variable '" + std::string(var) + "' not in assignment scope");
}

namespace {

void check_scope(const std::vector<std::string>& scope)
{
    auto sorted = scope;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ScopeError("team scope lists a variable twice");
}

}  // namespace

Team::Team(std::vector<std::string> scope) : scope_(std::move(scope)) { check_scope(scope_); }

Team::Team(std::vector<std::string> scope, std::vector<Row> rows)
    : scope_(std::move(scope)), rows_(std::move(rows))
{
    check_scope(scope_);
    for (const auto& r : rows_)
        if (r.size() != scope_.size()) throw Error("team row width does not match its scope");
    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
}

Team Team::unit() { return Team({}, {Row{}}); }

std::optional<std::size_t> Team::index_of(std::string_view var) const
{
    for (std::size_t i = 0; i < scope_.size(); ++i)
        if (scope_[i] == var) return i;
    return std::nullopt;
}

std::size_t Team::column(std::string_view var) const
{
    if (auto i = index_of(var)) return *i;
    throw ScopeError("variable '" + std::string(var) + "' not in team scope");
}

std::vector<std::size_t> Team::columns(const VarTuple& vars) const
{
    std::vector<std::size_t> out;
    out.reserve(vars.size());
    for (const auto& v : vars) out.push_back(column(v));
    return out;
}

bool Team::covers(const VarTuple& vars) const
{
    return std::all_of(vars.begin(), vars.end(), [&](const std::string& v) { return index_of(v).has_value(); });
}

Assignment Team::assignment(std::size_t i) const { return Assignment{scope_, rows_.at(i)}; }

bool Team::contains(const Row& row) const { return std::binary_search(rows_.begin(), rows_.end(), row); }

Team Team::project(const std::vector<std::string>& vars) const
{
    auto cols = columns(VarTuple(vars));
    std::vector<Row> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) {
        Row p;
        p.reserve(cols.size());
        for (auto c : cols) p.push_back(r[c]);
        out.push_back(std::move(p));
    }
    return Team(vars, std::move(out));
}

// Team algebra ------------------------------------------------------------

namespace {

/// Scope after binding `var`, and the column that receives its value.
std::pair<std::vector<std::string>, std::size_t> extended_scope(const Team& team, const std::string& var)
{
    auto scope = team.scope();
    if (auto i = team.index_of(var)) return {scope, *i};
    scope.push_back(var);
    return {scope, scope.size() - 1};
}

Team::Row with_value(const Team::Row& row, std::size_t col, Elem value)
{
    Team::Row out = row;
    if (col == out.size())
        out.push_back(value);
    else
        out[col] = value;
    return out;
}

}  // namespace

Team duplicate(const Team& team, const std::string& var, const Structure& structure)
{
    auto [scope, col] = extended_scope(team, var);
    std::vector<Team::Row> rows;
    rows.reserve(team.size() * structure.size());
    for (const auto& r : team.rows())
        for (Elem a = 0; a < structure.size(); ++a) rows.push_back(with_value(r, col, a));
    return Team(std::move(scope), std::move(rows));
}

Team supplement(const Team& team, const std::string& var, const ChoiceFunction& choice, Semantics mode)
{
    auto [scope, col] = extended_scope(team, var);
    std::vector<Team::Row> rows;
    for (std::size_t i = 0; i < team.size(); ++i) {
        auto values = choice(team.assignment(i));
        if (values.empty()) throw Error("supplement: empty choice set");
        if (mode == Semantics::Strict && values.size() != 1)
            throw Error("supplement: strict semantics needs exactly one value per row");
        for (Elem a : values) rows.push_back(with_value(team.rows()[i], col, a));
    }
    return Team(std::move(scope), std::move(rows));
}

std::uint64_t split_count(std::size_t rows, Semantics mode)
{
    const std::uint64_t base = mode == Semantics::Strict ? 2 : 3;
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < rows; ++i) {
        if (n > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
        n *= base;
    }
    return n;
}

std::uint64_t for_each_split(const Team& team, Semantics mode,
                             const std::function<bool(const Team&, const Team&)>& visit)
{
    const std::size_t n = team.size();
    const unsigned base = mode == Semantics::Strict ? 2 : 3;
    // Per row: 0 -> left only, 1 -> right only, 2 -> both.
    std::vector<unsigned> digit(n, 0);
    std::uint64_t visited = 0;
    for (;;) {
        std::vector<Team::Row> left, right;
        for (std::size_t i = 0; i < n; ++i) {
            if (digit[i] != 1) left.push_back(team.rows()[i]);
            if (digit[i] != 0) right.push_back(team.rows()[i]);
        }
        ++visited;
        if (!visit(team.with_rows(std::move(left)), team.with_rows(std::move(right)))) return visited;
        std::size_t i = 0;
        while (i < n && ++digit[i] == base) digit[i++] = 0;
        if (i == n) return visited;
    }
}

std::uint64_t team_count(std::uint64_t assignments, std::uint64_t max_rows)
{
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    max_rows = std::min(max_rows, assignments);
    std::uint64_t total = 0;
    std::uint64_t binom = 1;  // C(assignments, k)
    for (std::uint64_t k = 0; k <= max_rows; ++k) {
        if (k > 0) {
            // binom * (n - k + 1) / k without overflow for the sizes we accept
            const std::uint64_t num = assignments - k + 1;
            if (binom > kMax / num) return kMax;
            binom = binom * num / k;
        }
        if (total > kMax - binom) return kMax;
        total += binom;
    }
    return total;
}

std::uint64_t enumerate_teams(const VarTuple& vars, std::size_t domain_size, std::optional<std::size_t> max_rows,
                              const std::function<bool(const Team&)>& visit, std::uint64_t cap)
{
    if (domain_size == 0) throw Error("enumerate_teams: domain must be non-empty");
    std::vector<std::string> scope = vars.vars();
    check_scope(scope);

    std::uint64_t assignments = 1;
    for (std::size_t i = 0; i < scope.size(); ++i) {
        if (assignments > cap / domain_size + 1) throw CapExceeded("search space too large");
        assignments *= domain_size;
    }
    const std::uint64_t rows_bound = max_rows ? std::min<std::uint64_t>(*max_rows, assignments) : assignments;
    if (team_count(assignments, rows_bound) > cap) throw CapExceeded("search space too large");

    std::vector<Team::Row> all(assignments);
    for (std::uint64_t i = 0; i < assignments; ++i) {
        Team::Row r(scope.size());
        std::uint64_t x = i;
        for (std::size_t c = scope.size(); c-- > 0;) {
            r[c] = static_cast<Elem>(x % domain_size);
            x /= domain_size;
        }
        all[i] = std::move(r);
    }

    std::uint64_t visited = 0;
    for (std::uint64_t k = 0; k <= rows_bound; ++k) {
        std::vector<std::size_t> idx(k);
        for (std::size_t j = 0; j < k; ++j) idx[j] = j;
        for (;;) {
            std::vector<Team::Row> rows;
            rows.reserve(k);
            for (auto j : idx) rows.push_back(all[j]);
            ++visited;
            if (!visit(Team(scope, std::move(rows)))) return visited;
            // next k-combination of [0, assignments)
            std::size_t j = k;
            while (j > 0 && idx[j - 1] == assignments - k + j - 1) --j;
            if (j == 0) break;
            ++idx[j - 1];
            for (std::size_t t = j; t < k; ++t) idx[t] = idx[t - 1] + 1;
        }
    }
    return visited;
}

std::set<std::vector<Elem>> team_to_relation(const Team& team, const VarTuple& vars)
{
    auto cols = team.columns(vars);
    std::set<std::vector<Elem>> out;
    for (const auto& r : team.rows()) {
        std::vector<Elem> t;
        t.reserve(cols.size());
        for (auto c : cols) t.push_back(r[c]);
        out.insert(std::move(t));
    }
    return out;
}

Team relation_to_team(const std::set<std::vector<Elem>>& relation, const VarTuple& vars)
{
    std::vector<Team::Row> rows;
    for (const auto& t : relation) {
        if (t.size() != vars.size()) throw Error("relation arity does not match variable list");
        rows.push_back(t);
    }
    return Team(vars.vars(), std::move(rows));
}

}  // namespace teamlogic
