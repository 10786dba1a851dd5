#pragma once

// Finite structures, assignments and teams.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace teamlogic {

using Elem = std::uint32_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A formula or query mentions a variable the team does not cover.
class ScopeError : public Error {
public:
    using Error::Error;
};

/// Raised when an enumeration would exceed its configured hard cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// Strict: one value per row on existentials and disjoint disjunction splits.
/// Lax: non-empty value sets and overlapping splits.
enum class Semantics { Strict, Lax };

std::string_view to_string(Semantics s);
Semantics parse_semantics(std::string_view text);

/// Ordered sequence of variable names, repetitions allowed. Set-view helpers
/// ignore order and multiplicity.
class VarTuple {
public:
    VarTuple() = default;
    VarTuple(std::initializer_list<std::string> vars) : vars_(vars) {}
    explicit VarTuple(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    const std::vector<std::string>& vars() const { return vars_; }
    std::size_t size() const { return vars_.size(); }
    bool empty() const { return vars_.empty(); }
    const std::string& operator[](std::size_t i) const { return vars_[i]; }
    auto begin() const { return vars_.begin(); }
    auto end() const { return vars_.end(); }

    bool contains(std::string_view var) const;
    /// Sorted, duplicate-free view.
    std::vector<std::string> as_set() const;
    bool same_set(const VarTuple& other) const;
    VarTuple concat(const VarTuple& other) const;
    std::string to_string() const;

    friend bool operator==(const VarTuple&, const VarTuple&) = default;
    friend auto operator<=>(const VarTuple&, const VarTuple&) = default;

private:
    std::vector<std::string> vars_;
};

/// Sorted set intersection of the two tuples' set views.
VarTuple set_intersection(const VarTuple& a, const VarTuple& b);
VarTuple set_union(const VarTuple& a, const VarTuple& b);

struct Relation {
    std::string name;
    std::size_t arity = 0;
    std::set<std::vector<Elem>> tuples;

    bool contains(std::span<const Elem> tuple) const;
    friend bool operator==(const Relation&, const Relation&) = default;
};

/// Finite relational structure. Elements are interned to dense ids
/// 0..size()-1 in declaration order; equality is built in and never stored.
class Structure {
public:
    explicit Structure(std::vector<std::string> element_names);
    /// Domain {"0", ..., "n-1"}.
    static Structure of_size(std::size_t n);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& element_names() const { return names_; }
    const std::string& element_name(Elem e) const;
    std::optional<Elem> find_element(std::string_view name) const;
    Elem element(std::string_view name) const;

    void add_relation(std::string name, std::size_t arity,
                      std::set<std::vector<Elem>> tuples = {});
    void set_constant(std::string name, Elem value);

    const Relation* find_relation(std::string_view name) const;
    std::optional<Elem> find_constant(std::string_view name) const;
    const std::vector<Relation>& relations() const { return relations_; }
    const std::vector<std::pair<std::string, Elem>>& constants() const { return constants_; }

    friend bool operator==(const Structure&, const Structure&) = default;

private:
    std::vector<std::string> names_;
    std::vector<Relation> relations_;
    std::vector<std::pair<std::string, Elem>> constants_;
};

struct Assignment {
    std::vector<std::string> scope;
    std::vector<Elem> values;

    Elem at(std::string_view var) const;
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// A set of assignments over one ordered scope. Rows are kept sorted and
/// duplicate-free so that equality is structural.
class Team {
public:
    using Row = std::vector<Elem>;

    /// Empty scope, no rows.
    Team() = default;
    explicit Team(std::vector<std::string> scope);
    Team(std::vector<std::string> scope, std::vector<Row> rows);

    /// The team over the empty scope holding the single empty assignment.
    static Team unit();

    const std::vector<std::string>& scope() const { return scope_; }
    const std::vector<Row>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }

    std::optional<std::size_t> index_of(std::string_view var) const;
    /// Column of `var`; throws ScopeError when absent.
    std::size_t column(std::string_view var) const;
    std::vector<std::size_t> columns(const VarTuple& vars) const;
    bool covers(const VarTuple& vars) const;

    Assignment assignment(std::size_t i) const;
    bool contains(const Row& row) const;
    /// Keep only the listed columns (in the given order); rows are re-deduplicated.
    Team project(const std::vector<std::string>& vars) const;
    Team with_rows(std::vector<Row> rows) const { return Team(scope_, std::move(rows)); }

    friend bool operator==(const Team&, const Team&) = default;

private:
    std::vector<std::string> scope_;
    std::vector<Row> rows_;
};

// Team algebra ----------------------------------------------------------

/// X[M/var]: every row extended (or overwritten) with every domain element.
Team duplicate(const Team& team, const std::string& var, const Structure& structure);

using ChoiceFunction = std::function<std::vector<Elem>(const Assignment&)>;

/// X[F/var] for a choice function returning a non-empty value set per row.
/// In strict mode every set must be a singleton.
Team supplement(const Team& team, const std::string& var, const ChoiceFunction& choice,
                Semantics mode = Semantics::Lax);

/// Calls `visit(Y, Z)` for every split Y ∪ Z = team (disjoint when strict).
/// Stops early when `visit` returns false. Returns the number of splits visited.
std::uint64_t for_each_split(const Team& team, Semantics mode,
                             const std::function<bool(const Team&, const Team&)>& visit);

/// 2^n (strict) or 3^n (lax), saturating.
std::uint64_t split_count(std::size_t rows, Semantics mode);

inline constexpr std::uint64_t kDefaultTeamCap = std::uint64_t{1} << 24;

/// Number of teams with at most `max_rows` rows drawn from `assignments`
/// candidate rows; saturates at UINT64_MAX.
std::uint64_t team_count(std::uint64_t assignments, std::uint64_t max_rows);

/// Every team over `vars` with entries in {0..domain_size-1} and at most
/// `max_rows` rows (nullopt: unlimited), each exactly once, ordered by row
/// count and then lexicographically by row index. Throws CapExceeded when the
/// number of teams exceeds `cap`.
std::uint64_t enumerate_teams(const VarTuple& vars, std::size_t domain_size,
                              std::optional<std::size_t> max_rows,
                              const std::function<bool(const Team&)>& visit,
                              std::uint64_t cap = kDefaultTeamCap);

/// rel(X) for the listed variables.
std::set<std::vector<Elem>> team_to_relation(const Team& team, const VarTuple& vars);
Team relation_to_team(const std::set<std::vector<Elem>>& relation, const VarTuple& vars);

// Text formats ----------------------------------------------------------

Structure parse_structure(std::string_view text);
std::string to_text(const Structure& structure);

Team parse_team(std::string_view text, const Structure& structure);
std::string to_text(const Team& team, const Structure& structure);

}  // namespace teamlogic
