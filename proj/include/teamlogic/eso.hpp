#pragma once

// Existential second-order translation of independence-logic formulas and
// an evaluator for the resulting sentences.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "teamlogic/core.hpp"
#include "teamlogic/syntax.hpp"
#include "teamlogic/teamsem.hpp"

namespace teamlogic {

enum class FoKind { True, False, Equal, Relation, Not, And, Or, Implies, Exists, Forall };

/// First-order formula with unrestricted negation over structure relations,
/// the team relation and relation variables. And/Or are n-ary.
class Fo {
public:
    static Fo top();
    static Fo bottom();
    static Fo equal(std::string a, std::string b);
    static Fo relation(std::string name, std::vector<std::string> args);
    static Fo negate(Fo f);
    /// Empty list gives top; a single element is returned unchanged.
    static Fo conj(std::vector<Fo> kids);
    /// Empty list gives bottom; a single element is returned unchanged.
    static Fo disj(std::vector<Fo> kids);
    static Fo implies(Fo a, Fo b);
    static Fo exists(std::string var, Fo body);
    static Fo forall(std::string var, Fo body);
    /// Quantifier block, innermost last.
    static Fo exists(const std::vector<std::string>& vars, Fo body);
    static Fo forall(const std::vector<std::string>& vars, Fo body);

    FoKind kind() const { return node_->kind; }
    /// Relation name or bound variable.
    const std::string& name() const { return node_->name; }
    const std::string& var() const { return node_->name; }
    /// Terms of Equal/Relation.
    const std::vector<std::string>& args() const { return node_->args; }
    const std::vector<Fo>& kids() const { return node_->kids; }
    const Fo& body() const { return node_->kids[0]; }

    std::size_t size() const;

private:
    struct Node {
        FoKind kind;
        std::string name;
        std::vector<std::string> args;
        std::vector<Fo> kids;
    };
    explicit Fo(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Fo make(Node n);
    std::shared_ptr<const Node> node_;
};

std::string to_string(const Fo& f);

struct RelationVariable {
    std::string name;
    std::size_t arity = 0;
    friend bool operator==(const RelationVariable&, const RelationVariable&) = default;
};

/// exists2 R1 ... Rk . matrix, where the team relation names the team
/// restricted to `scope`, in scope order.
struct EsoSentence {
    std::vector<RelationVariable> relvars;
    Fo matrix = Fo::top();
    std::string team_relation = "S";
    std::vector<std::string> scope;

    std::size_t size() const { return matrix.size(); }
    std::string to_string() const;
};

/// The translation tau_f(S) for lax semantics. `f` must be desugared and its
/// free variables must lie in `scope`; other free names are kept as constants.
EsoSentence translate(const Formula& f, const VarTuple& scope);

struct EsoOptions {
    /// Cap on gates of the ground circuit.
    std::uint64_t ground_cap = 20'000'000;
    std::uint64_t conflict_budget = 50'000'000;
};

/// M, rel(X) |= sentence, decided by grounding the matrix over the domain and
/// running a CDCL search on the relation-variable atoms. The team must cover
/// the sentence scope. Throws CapExceeded("ESO search too large").
bool eval_eso(const Structure& structure, const Team& team, const EsoSentence& sentence,
              const EsoOptions& opts = {});

/// Reference evaluator: enumerates every interpretation of the relation
/// variables, fewest tuples first, and checks the matrix by Tarskian
/// recursion. Total bits sum |M|^arity are capped at `max_bits` (<= 30).
bool eval_eso_bruteforce(const Structure& structure, const Team& team, const EsoSentence& sentence,
                         std::size_t max_bits = 22);
/// Same enumeration split across OpenMP threads.
bool eval_eso_bruteforce_parallel(const Structure& structure, const Team& team, const EsoSentence& sentence,
                                  std::size_t max_bits = 22);

/// Tarskian truth of `f` with the given relation-variable interpretations
/// (one tuple set per entry of `sentence.relvars`).
bool eso_matrix_holds(const Structure& structure, const Team& team, const EsoSentence& sentence,
                      const std::vector<std::set<std::vector<Elem>>>& interpretation);

struct TranslationReport {
    bool team_value = false;
    bool eso_value = false;
    bool agree() const { return team_value == eso_value; }
};

TranslationReport check_translation(const Structure& structure, const Team& team, const Formula& f,
                                    Semantics mode = Semantics::Lax, const EsoOptions& opts = {});

}  // namespace teamlogic
