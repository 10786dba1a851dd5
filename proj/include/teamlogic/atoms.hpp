#pragma once

// Atom-level reasoning: Armstrong's axioms, the independence axioms, the
// conditional rule inventory, and semantic entailment by team search.

#include <cstdint>
#include <optional>
#include <string>
#include <functional>
#include <map>
#include <vector>

#include "teamlogic/core.hpp"
#include "teamlogic/syntax.hpp"

namespace teamlogic {

enum class AtomKind { Dep, Ind };

/// A standalone dependence atom =(a ; b) or independence atom a ⊥_b c.
struct AtomStatement {
    AtomKind kind = AtomKind::Dep;
    VarTuple a;  // determiner | left
    VarTuple b;  // determined | condition
    VarTuple c;  // unused     | right

    static AtomStatement dep(VarTuple determiner, VarTuple determined);
    static AtomStatement ind(VarTuple left, VarTuple condition, VarTuple right);

    /// Same atom with every tuple replaced by its sorted set view.
    AtomStatement canonical() const;
    /// Equality up to order and multiplicity inside each tuple.
    bool same_as(const AtomStatement& other) const { return canonical() == other.canonical(); }
    /// All variables, sorted and duplicate-free.
    std::vector<std::string> vars() const;
    /// Ind with empty condition and single variables on both sides.
    bool is_unconditional_simple() const;

    Formula to_formula() const;
    std::string to_string() const;

    friend bool operator==(const AtomStatement&, const AtomStatement&) = default;
    friend auto operator<=>(const AtomStatement&, const AtomStatement&) = default;
};

AtomStatement parse_atom(std::string_view text);
/// One atom per line; blank lines and '#' comments are skipped.
std::vector<AtomStatement> parse_atom_set(std::string_view text);
std::vector<std::string> universe_of(const std::vector<AtomStatement>& atoms, const AtomStatement* goal = nullptr);

bool holds(const Team& team, const AtomStatement& atom);

// Derivations -----------------------------------------------------------

enum class Rule {
    Premise,
    // Armstrong's axioms
    DepReflexivity,
    DepMonotonicity,
    DepPermutation,
    DepTransitivity,
    // conditional independence rules
    Reflexivity,
    Symmetry,
    Weakening,
    Permutation,
    FixedParameter,
    FirstTransitivity,
    SecondTransitivity,
    Constancy,
    DepToInd,
    IndToDep,
    ArmstrongAugmentation,
};

std::string_view to_string(Rule r);

/// The eleven rules used by rule_closure.
const std::vector<Rule>& closure_rules();

struct DerivationStep {
    Rule rule;
    std::vector<std::size_t> premises;
    AtomStatement conclusion;
};

struct DerivationTrace {
    std::vector<DerivationStep> steps;
    std::string to_string() const;
};

/// Rechecks every step: premises precede it, Premise steps are members of T
/// and every other step is an instance of its rule.
bool check_trace(const DerivationTrace& trace, const std::vector<AtomStatement>& T);

/// Whether `conclusion` follows from `premises` by one application of `rule`.
/// Atoms are compared in canonical form.
bool is_rule_instance(Rule rule, const std::vector<AtomStatement>& premises, const AtomStatement& conclusion);

struct Derivation {
    bool derived = false;
    DerivationTrace trace;
};

/// Least set containing `start` and closed under the dependences of T.
std::vector<std::string> armstrong_closure(const std::vector<AtomStatement>& T, const VarTuple& start,
                                           const std::vector<std::string>& universe);
Derivation armstrong_derives(const std::vector<AtomStatement>& T, const AtomStatement& goal);
Derivation independence_derives(const std::vector<AtomStatement>& T, const AtomStatement& goal);

// Bitmask form, shared by the closure engine and the soundness sweeps -----

/// Canonical atom over a universe of at most 16 variables. Sets are bitmasks.
struct MaskAtom {
    AtomKind kind;
    std::uint32_t a, b, c;
    friend bool operator==(const MaskAtom&, const MaskAtom&) = default;
    friend auto operator<=>(const MaskAtom&, const MaskAtom&) = default;
};

MaskAtom to_mask(const AtomStatement& atom, const std::vector<std::string>& universe);
AtomStatement from_mask(const MaskAtom& atom, const std::vector<std::string>& universe);

/// Calls cb(premises, conclusion) for every instance of `rule` over a universe
/// of n variables. Permutation instances are the identity on canonical forms.
void for_each_instance(Rule rule, std::size_t n,
                       const std::function<void(const std::vector<MaskAtom>&, const MaskAtom&)>& cb);

/// All instances of the given rules over n variables, with trivial ones
/// (conclusion equal to a premise) and duplicates within a rule removed.
struct RuleInstance {
    Rule rule;
    std::vector<MaskAtom> premises;
    MaskAtom conclusion;
};
std::vector<RuleInstance> rule_instances(std::size_t n, const std::vector<Rule>& rules = closure_rules());

struct ClosureResult {
    std::vector<std::string> universe;
    DerivationTrace trace;
    bool truncated = false;

    bool contains(const AtomStatement& atom) const;
    /// The steps needed to derive `atom`, renumbered; empty if absent.
    DerivationTrace derivation_of(const AtomStatement& atom) const;
    std::vector<AtomStatement> atoms() const;

    std::map<MaskAtom, std::size_t> index;  // canonical atom -> step
};

/// Forward chaining under closure_rules() with tuples restricted to subsets
/// of the universe (default: the variables of T). At most max_steps new
/// atoms are derived; beyond that the result is flagged as truncated.
ClosureResult rule_closure(const std::vector<AtomStatement>& T, std::size_t max_steps = 1'000'000,
                           std::vector<std::string> universe = {});

// Semantic entailment -----------------------------------------------------

struct EntailConfig {
    /// Domain sizes to search; empty means {2, |V|+2}.
    std::vector<std::size_t> domain_sizes;
    /// Row bound for the exhaustive enumeration.
    std::size_t max_rows = 4;
    /// Cap on enumerated row sequences per domain size; beyond it, sampling.
    std::uint64_t cap = std::uint64_t{1} << 22;
    std::size_t samples = 20'000;
    std::uint64_t seed = 1;
    bool parallel = true;
};

struct EntailmentVerdict {
    bool entailed = true;
    /// True when the verdict is a theorem rather than "no countermodel found":
    /// pure dependence sets, and unconditional single-variable independence.
    bool exact = false;
    std::optional<Team> countermodel;
    std::size_t countermodel_domain = 0;
    std::string bound;
    std::uint64_t teams_checked = 0;
};

EntailmentVerdict semantic_entails(const std::vector<AtomStatement>& T, const AtomStatement& goal,
                                   const EntailConfig& cfg = {});

/// Counterexample from the Armstrong completeness proof: two rows over {0,1}.
/// nullopt when the goal is derivable. The team is verified before return.
std::optional<Team> counterexample_armstrong(const std::vector<AtomStatement>& T, const AtomStatement& goal);

struct IndependenceCounterexample {
    Structure structure;
    Team team;
};

/// The X_0 ∪ X_1 team of the independence completeness proof over the domain
/// V ∪ {0,1}. nullopt when the goal is derivable. Verified before return.
std::optional<IndependenceCounterexample> counterexample_independence(const std::vector<AtomStatement>& T,
                                                                      const AtomStatement& goal);

// Soundness sweeps ----------------------------------------------------------

/// Truth values of every canonical atom over n variables on one team, from
/// packed rows. Ind(a;b;c) sits at (a*N+b)*N+c and Dep(a;b) at N^3+a*N+b, with
/// N = 2^n.
class PackedTruthTable {
public:
    PackedTruthTable(std::size_t n, std::size_t domain_size);
    void load(const std::vector<Team::Row>& rows);
    bool holds(const MaskAtom& atom) const { return truth_[index(atom)] != 0; }
    std::size_t index(const MaskAtom& atom) const
    {
        return atom.kind == AtomKind::Ind ? (std::size_t{atom.a} * N_ + atom.b) * N_ + atom.c
                                          : std::size_t{N_} * N_ * N_ + std::size_t{atom.a} * N_ + atom.b;
    }
    const std::vector<std::uint8_t>& truth() const { return truth_; }

private:
    std::size_t n_, bits_;
    std::uint32_t N_;
    std::vector<std::uint32_t> expand_;                  // variable mask -> packed bit mask
    std::vector<std::vector<std::uint32_t>> proj_;       // sorted distinct projections per mask
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> groups_;  // (W,X) -> (x, count)
    std::vector<std::uint8_t> truth_;

    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& group(std::uint32_t w, std::uint32_t x) const
    {
        return groups_[std::size_t{w} * N_ + x];
    }
};

struct SoundnessReport {
    std::uint64_t teams = 0;
    std::uint64_t instances = 0;
    std::uint64_t violations = 0;
    std::map<Rule, std::uint64_t> violations_by_rule;
    std::optional<Team> witness;
    std::optional<RuleInstance> witness_instance;
};

/// Every team with at most max_rows rows over n variables and the given
/// domain, checked against every rule instance.
SoundnessReport soundness_exhaustive(std::size_t n, std::size_t domain_size, std::size_t max_rows,
                                     const std::vector<Rule>& rules = closure_rules(), bool parallel = true);
/// `count` random non-empty teams with at most max_rows rows.
SoundnessReport soundness_random(std::size_t n, std::size_t domain_size, std::size_t count, std::size_t max_rows,
                                 std::uint64_t seed, const std::vector<Rule>& rules = closure_rules(),
                                 bool parallel = true);
/// Serial reference: evaluates each instance with holds() on the given teams.
SoundnessReport soundness_reference(const std::vector<Team>& teams, std::size_t n,
                                    const std::vector<Rule>& rules = closure_rules());

}  // namespace teamlogic
