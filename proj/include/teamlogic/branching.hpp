#pragma once

// Skolem semantics of the two-row branching prefix and the checks around
// its independence-logic definition.

#include <cstdint>
#include <optional>
#include <string>

#include "teamlogic/core.hpp"
#include "teamlogic/syntax.hpp"
#include "teamlogic/teamsem.hpp"

namespace teamlogic {

/// True iff there are f, g : M -> M with the first-order matrix of
/// `branch{forall x exists y; forall u exists v}. matrix` holding at
/// s(a/x, f(a)/y, b/u, g(b)/v) for all a, b. Enumerates function pairs with
/// early exit; |M| above `max_domain` throws CapExceeded.
bool henkin_eval_skolem(const Structure& structure, const Assignment& s, const Formula& h,
                        std::size_t max_domain = 5);
/// Serial reference for the same search.
bool henkin_eval_skolem_serial(const Structure& structure, const Assignment& s, const Formula& h,
                               std::size_t max_domain = 5);

struct BranchingReport {
    bool skolem = false;
    bool compositional = false;
    bool agree() const { return skolem == compositional; }
};

/// Skolem verdict against evaluate(structure, {s}, desugar_henkin(h), mode).
BranchingReport check_lemma14(const Structure& structure, const Assignment& s, const Formula& h,
                              Semantics mode = Semantics::Lax, std::size_t max_domain = 5);

struct KeyImplication {
    bool premise = false;     // dep(x u ; v) and ind(v ; u ; x)
    bool conclusion = false;  // dep(u ; v)
    bool respected() const { return !premise || conclusion; }
};

/// dep(x u ; v) and ind(v ; u ; x) imply dep(u ; v); the team must cover x, u and v.
KeyImplication key_implication_check(const Team& team);

struct CounterexampleSearch {
    std::optional<Team> team;
    /// Domain size of the returned team (0 when none).
    std::size_t domain = 0;
    std::uint64_t candidates = 0;
    std::string note;
};

/// Searches teams over (x, u, v) with at most `max_rows` rows for one with
/// dep(x u ; v) and ind(v ;; x) but not dep(u ; v); with `strong` the
/// condition is ind(v ; u ; x) instead. Domains 2..domain_size are tried in
/// order, each in increasing row count. Candidates are the partial functions
/// (x, u) -> v, since dep(x u ; v) admits nothing else. The returned team is
/// rechecked with evaluate.
CounterexampleSearch find_remark_counterexample(std::size_t domain_size, std::size_t max_rows, bool strong = false,
                                                 std::uint64_t cap = std::uint64_t{1} << 26);
/// Serial reference for the same search.
CounterexampleSearch find_remark_counterexample_serial(std::size_t domain_size, std::size_t max_rows, bool strong = false,
                                                        std::uint64_t cap = std::uint64_t{1} << 26);

}  // namespace teamlogic
