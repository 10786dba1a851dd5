#pragma once

// Team semantics for independence logic.

#include <cstdint>
#include <optional>

#include "teamlogic/core.hpp"
#include "teamlogic/syntax.hpp"

namespace teamlogic {

/// The existential/disjunction search ran out of its candidate budget.
class SearchExhausted : public Error {
public:
    using Error::Error;
};

struct EvalOptions {
    Semantics semantics = Semantics::Lax;
    /// Upper bound on candidate supplementations and splits tried per call.
    std::uint64_t budget = 10'000'000;
    bool memoize = true;
};

/// M ⊨_X f. The formula must be desugared and its free names must be team
/// variables or constants of the structure.
bool evaluate(const Structure& structure, const Team& team, const Formula& f, const EvalOptions& opts = {});

/// Tarskian satisfaction of a first-order formula by a single assignment.
bool holds_at(const Structure& structure, const Assignment& s, const Formula& f);

/// M ⊨ sentence, i.e. satisfaction by the team {∅}. Sugar is expanded first.
bool sentence_sat(const Structure& structure, const Formula& sentence, const EvalOptions& opts = {});

/// =(det, detd) on a team; every name must be in the team scope.
bool dep_holds(const Team& team, const VarTuple& determiner, const VarTuple& determined);
/// left ⊥_cond right on a team; every name must be in the team scope.
bool ind_holds(const Team& team, const VarTuple& left, const VarTuple& condition, const VarTuple& right);

/// Column-index forms of the two atom kernels, for callers that hold raw rows.
bool dep_holds_columns(const std::vector<Team::Row>& rows, const std::vector<std::size_t>& determiner,
                       const std::vector<std::size_t>& determined);
bool ind_holds_columns(const std::vector<Team::Row>& rows, const std::vector<std::size_t>& left,
                       const std::vector<std::size_t>& condition, const std::vector<std::size_t>& right);

struct ValidityOptions {
    EvalOptions eval{};
    /// Hard cap on the number of structures examined across all sizes.
    std::uint64_t structure_cap = std::uint64_t{1} << 16;
};

struct ValidityReport {
    bool valid = true;
    /// Largest domain size examined.
    std::size_t max_size = 0;
    std::optional<Structure> countermodel;
    std::uint64_t structures_checked = 0;
};

/// Checks the sentence on every structure with 1..max_size elements. Relation
/// symbols of the sentence are enumerated over all interpretations, free names
/// are treated as constants; pure-equality sentences need one structure per
/// size. Returns the first countermodel in order of increasing size.
ValidityReport validity_search(const Formula& sentence, std::size_t max_size, const ValidityOptions& opts = {});

}  // namespace teamlogic
