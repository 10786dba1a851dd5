#pragma once

// A small CDCL SAT solver: two watched literals, first-UIP learning,
// activity-ordered decisions with phase saving, Luby restarts.

#include <cstdint>
#include <vector>

namespace teamlogic {

class SatSolver {
public:
    /// Returns a fresh variable index (0-based).
    int new_var();
    int num_vars() const { return static_cast<int>(assign_.size()); }

    /// Literals are DIMACS-style: +(v+1) for v, -(v+1) for not v.
    void add_clause(const std::vector<int>& lits);

    /// Throws CapExceeded when more than `conflict_budget` conflicts occur.
    bool solve(std::uint64_t conflict_budget = 50'000'000);

    /// Model value after a satisfiable solve().
    bool value(int var) const { return assign_[var] == 1; }

    std::uint64_t conflicts() const { return conflicts_; }

private:
    using Lit = std::uint32_t;  // 2*var + sign
    struct Clause {
        std::vector<Lit> lits;
    };

    std::vector<Clause> clauses_;
    std::vector<std::vector<std::uint32_t>> watches_;  // literal -> clause ids watching its negation
    std::vector<std::int8_t> assign_;                  // -1 unassigned, 0 false, 1 true
    std::vector<int> level_;
    std::vector<std::int64_t> reason_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<double> activity_;
    double var_inc_ = 1.0;
    std::vector<std::int8_t> phase_;
    std::vector<int> heap_;
    std::vector<int> heap_pos_;
    bool unsat_ = false;
    std::uint64_t conflicts_ = 0;
    std::vector<std::int8_t> seen_;

    static Lit to_lit(int dimacs);
    std::int8_t lit_value(Lit l) const;
    void enqueue(Lit l, std::int64_t reason);
    std::int64_t propagate();
    void analyze(std::int64_t confl, std::vector<Lit>& learnt, int& back_level);
    void backtrack(int level);
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }
    void attach(std::uint32_t cid);
    void bump(int var);
    void heap_insert(int var);
    void heap_up(int i);
    void heap_down(int i);
    int heap_pop();
};

}  // namespace teamlogic
