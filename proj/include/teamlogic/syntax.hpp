#pragma once

// Formula language of independence logic: AST, parser, printer, desugaring.

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "teamlogic/core.hpp"

namespace teamlogic {

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& msg);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A term is a bare name: a variable when bound by a quantifier or present
/// in the evaluation scope, otherwise a constant of the structure.
struct Term {
    std::string name;
    friend bool operator==(const Term&, const Term&) = default;
};

enum class FormulaKind {
    Equal,          // t1 = t2
    Relation,       // R(t1, ..., tn)
    Not,            // not <atom>
    Dep,            // dep(determiner ; determined)
    Ind,            // ind(left ; condition ; right)
    And,
    Or,
    Exists,
    Forall,
    SlashedExists,  // exists x/{ys}. f
    Henkin,         // branch{forall x exists y; forall u exists v}. f
};

struct HenkinRow {
    std::string universal;
    std::string existential;
    friend bool operator==(const HenkinRow&, const HenkinRow&) = default;
};

/// Immutable formula tree with shared subterms. Negation is only ever placed
/// directly over an atom.
class Formula {
public:
    static Formula equal(Term a, Term b);
    static Formula relation(std::string name, std::vector<Term> args);
    static Formula negate(Formula atom);
    static Formula dep(VarTuple determiner, VarTuple determined);
    static Formula ind(VarTuple left, VarTuple condition, VarTuple right);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula exists(std::string var, Formula body);
    static Formula forall(std::string var, Formula body);
    static Formula slashed_exists(std::string var, VarTuple slashed, Formula body);
    static Formula henkin(std::vector<HenkinRow> rows, Formula matrix);

    FormulaKind kind() const { return node_->kind; }
    bool is_atom() const;
    /// Equality or relation atom.
    bool is_fo_atom() const { return kind() == FormulaKind::Equal || kind() == FormulaKind::Relation; }

    /// Relation name (Relation).
    const std::string& name() const { return node_->name; }
    /// Bound variable (Exists/Forall/SlashedExists).
    const std::string& var() const { return node_->name; }
    const std::vector<Term>& terms() const { return node_->terms; }
    /// Dep: determiner; Ind: left; SlashedExists: slashed variables.
    const VarTuple& first() const { return node_->tuples[0]; }
    /// Dep: determined; Ind: condition.
    const VarTuple& second() const { return node_->tuples[1]; }
    /// Ind: right.
    const VarTuple& third() const { return node_->tuples[2]; }
    const std::vector<HenkinRow>& henkin_rows() const { return node_->rows; }

    const Formula& child(std::size_t i = 0) const { return node_->children[i]; }
    const Formula& body() const { return node_->children[0]; }
    const Formula& lhs() const { return node_->children[0]; }
    const Formula& rhs() const { return node_->children[1]; }
    std::size_t num_children() const { return node_->children.size(); }

    /// Stable identity of the shared node (used for memo tables).
    const void* id() const { return node_.get(); }
    /// Number of nodes in the tree.
    std::size_t size() const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node {
        FormulaKind kind;
        std::string name;
        std::vector<Term> terms;
        VarTuple tuples[3];
        std::vector<HenkinRow> rows;
        std::vector<Formula> children;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(Node node);

    std::shared_ptr<const Node> node_;
};

Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);

/// Free names in order of first occurrence. Quantifiers bind; every variable
/// of a dependence or independence atom is a free occurrence.
std::vector<std::string> free_vars(const Formula& f);

/// Rewrites every `exists x/{ys}. f` to `exists x. (ind(ys ; zs ; x) and f)`
/// where zs are the variables bound above the node, in binding order, minus
/// ys and x.
Formula desugar_slash(const Formula& f);

/// Rewrites the two-row prefix `branch{forall x exists y; forall u exists v}. f`
/// to `forall x. exists y. forall u. exists v. (ind(v ; u zs ; x) and f)` with
/// zs = free_vars(f) minus {x, y, u, v}.
Formula desugar_henkin(const Formula& f);

/// Both rewrites.
Formula desugar(const Formula& f);

bool contains_sugar(const Formula& f);

/// Formula without dependence or independence atoms (negated ones included).
bool is_first_order(const Formula& f);

/// No positive independence atom; such formulas are closed downward.
bool is_downward_closed(const Formula& f);

}  // namespace teamlogic
