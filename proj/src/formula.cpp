#include <algorithm>
#include <set>

#include "teamlogic/syntax.hpp"

namespace teamlogic {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& msg)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column)
{
}

Formula Formula::make(Node node) { return Formula(std::make_shared<const Node>(std::move(node))); }

Formula Formula::equal(Term a, Term b)
{
    Node n{FormulaKind::Equal, {}, {std::move(a), std::move(b)}, {}, {}, {}};
    return make(std::move(n));
}

Formula Formula::relation(std::string name, std::vector<Term> args)
{
    if (args.empty()) throw Error("relation atom needs at least one argument");
    return make(Node{FormulaKind::Relation, std::move(name), std::move(args), {}, {}, {}});
}

Formula Formula::negate(Formula atom)
{
    if (!atom.is_atom()) throw Error("negation is only allowed in front of atomic formulas");
    return make(Node{FormulaKind::Not, {}, {}, {}, {}, {std::move(atom)}});
}

Formula Formula::dep(VarTuple determiner, VarTuple determined)
{
    Node n{FormulaKind::Dep, {}, {}, {}, {}, {}};
    n.tuples[0] = std::move(determiner);
    n.tuples[1] = std::move(determined);
    return make(std::move(n));
}

Formula Formula::ind(VarTuple left, VarTuple condition, VarTuple right)
{
    Node n{FormulaKind::Ind, {}, {}, {}, {}, {}};
    n.tuples[0] = std::move(left);
    n.tuples[1] = std::move(condition);
    n.tuples[2] = std::move(right);
    return make(std::move(n));
}

Formula Formula::conj(Formula a, Formula b)
{
    return make(Node{FormulaKind::And, {}, {}, {}, {}, {std::move(a), std::move(b)}});
}

Formula Formula::disj(Formula a, Formula b)
{
    return make(Node{FormulaKind::Or, {}, {}, {}, {}, {std::move(a), std::move(b)}});
}

Formula Formula::exists(std::string var, Formula body)
{
    return make(Node{FormulaKind::Exists, std::move(var), {}, {}, {}, {std::move(body)}});
}

Formula Formula::forall(std::string var, Formula body)
{
    return make(Node{FormulaKind::Forall, std::move(var), {}, {}, {}, {std::move(body)}});
}

Formula Formula::slashed_exists(std::string var, VarTuple slashed, Formula body)
{
    Node n{FormulaKind::SlashedExists, std::move(var), {}, {}, {}, {std::move(body)}};
    n.tuples[0] = std::move(slashed);
    return make(std::move(n));
}

Formula Formula::henkin(std::vector<HenkinRow> rows, Formula matrix)
{
    if (rows.empty()) throw Error("branching prefix needs at least one row");
    std::set<std::string> seen;
    for (const auto& r : rows) {
        if (!seen.insert(r.universal).second || !seen.insert(r.existential).second)
            throw Error("branching prefix binds a variable twice");
    }
    return make(Node{FormulaKind::Henkin, {}, {}, {}, std::move(rows), {std::move(matrix)}});
}

bool Formula::is_atom() const
{
    switch (kind()) {
    case FormulaKind::Equal:
    case FormulaKind::Relation:
    case FormulaKind::Dep:
    case FormulaKind::Ind:
        return true;
    default:
        return false;
    }
}

std::size_t Formula::size() const
{
    std::size_t n = 1;
    for (const auto& c : node_->children) n += c.size();
    return n;
}

bool operator==(const Formula& a, const Formula& b)
{
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.kind == y.kind && x.name == y.name && x.terms == y.terms && x.tuples[0] == y.tuples[0] &&
           x.tuples[1] == y.tuples[1] && x.tuples[2] == y.tuples[2] && x.rows == y.rows && x.children == y.children;
}

// Free variables ----------------------------------------------------------

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out)
{
    auto note = [&](const std::string& v) {
        if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    switch (f.kind()) {
    case FormulaKind::Equal:
    case FormulaKind::Relation:
        for (const auto& t : f.terms()) note(t.name);
        return;
    case FormulaKind::Dep:
        for (const auto& v : f.first()) note(v);
        for (const auto& v : f.second()) note(v);
        return;
    case FormulaKind::Ind:
        for (const auto& v : f.first()) note(v);
        for (const auto& v : f.second()) note(v);
        for (const auto& v : f.third()) note(v);
        return;
    case FormulaKind::Not:
        collect_free(f.child(), bound, out);
        return;
    case FormulaKind::And:
    case FormulaKind::Or:
        collect_free(f.lhs(), bound, out);
        collect_free(f.rhs(), bound, out);
        return;
    case FormulaKind::SlashedExists:
        for (const auto& v : f.first()) note(v);
        [[fallthrough]];
    case FormulaKind::Exists:
    case FormulaKind::Forall:
        bound.push_back(f.var());
        collect_free(f.body(), bound, out);
        bound.pop_back();
        return;
    case FormulaKind::Henkin: {
        const auto mark = bound.size();
        for (const auto& r : f.henkin_rows()) {
            bound.push_back(r.universal);
            bound.push_back(r.existential);
        }
        collect_free(f.body(), bound, out);
        bound.resize(mark);
        return;
    }
    }
}

}  // namespace

std::vector<std::string> free_vars(const Formula& f)
{
    std::vector<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

// Classification ----------------------------------------------------------

bool contains_sugar(const Formula& f)
{
    if (f.kind() == FormulaKind::SlashedExists || f.kind() == FormulaKind::Henkin) return true;
    for (std::size_t i = 0; i < f.num_children(); ++i)
        if (contains_sugar(f.child(i))) return true;
    return false;
}

bool is_first_order(const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::Dep:
    case FormulaKind::Ind:
        return false;
    default:
        for (std::size_t i = 0; i < f.num_children(); ++i)
            if (!is_first_order(f.child(i))) return false;
        return true;
    }
}

bool is_downward_closed(const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::Ind:
    case FormulaKind::SlashedExists:
    case FormulaKind::Henkin:
        return false;
    case FormulaKind::Not:
        return true;
    default:
        for (std::size_t i = 0; i < f.num_children(); ++i)
            if (!is_downward_closed(f.child(i))) return false;
        return true;
    }
}

// Desugaring --------------------------------------------------------------

namespace {

Formula rebuild(const Formula& f, std::vector<Formula> kids)
{
    switch (f.kind()) {
    case FormulaKind::Not:
        return Formula::negate(std::move(kids[0]));
    case FormulaKind::And:
        return Formula::conj(std::move(kids[0]), std::move(kids[1]));
    case FormulaKind::Or:
        return Formula::disj(std::move(kids[0]), std::move(kids[1]));
    case FormulaKind::Exists:
        return Formula::exists(f.var(), std::move(kids[0]));
    case FormulaKind::Forall:
        return Formula::forall(f.var(), std::move(kids[0]));
    case FormulaKind::SlashedExists:
        return Formula::slashed_exists(f.var(), f.first(), std::move(kids[0]));
    case FormulaKind::Henkin:
        return Formula::henkin(f.henkin_rows(), std::move(kids[0]));
    default:
        return f;
    }
}

Formula slash_rec(const Formula& f, std::vector<std::string>& bound)
{
    switch (f.kind()) {
    case FormulaKind::SlashedExists: {
        for (const auto& y : f.first()) {
            if (std::find(bound.begin(), bound.end(), y) == bound.end())
                throw ScopeError("slashed variable '" + y + "' is not bound by an enclosing quantifier");
        }
        std::vector<std::string> rest;
        for (const auto& v : bound) {
            if (v == f.var() || f.first().contains(v)) continue;
            if (std::find(rest.begin(), rest.end(), v) == rest.end()) rest.push_back(v);
        }
        bound.push_back(f.var());
        auto body = slash_rec(f.body(), bound);
        bound.pop_back();
        auto atom = Formula::ind(f.first(), VarTuple(std::move(rest)), VarTuple{f.var()});
        return Formula::exists(f.var(), Formula::conj(std::move(atom), std::move(body)));
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
        bound.push_back(f.var());
        auto body = slash_rec(f.body(), bound);
        bound.pop_back();
        return rebuild(f, {std::move(body)});
    }
    case FormulaKind::Henkin: {
        const auto mark = bound.size();
        for (const auto& r : f.henkin_rows()) {
            bound.push_back(r.universal);
            bound.push_back(r.existential);
        }
        auto body = slash_rec(f.body(), bound);
        bound.resize(mark);
        return rebuild(f, {std::move(body)});
    }
    case FormulaKind::And:
    case FormulaKind::Or:
        return rebuild(f, {slash_rec(f.lhs(), bound), slash_rec(f.rhs(), bound)});
    default:
        return f;
    }
}

}  // namespace

Formula desugar_slash(const Formula& f)
{
    std::vector<std::string> bound;
    return slash_rec(f, bound);
}

Formula desugar_henkin(const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::Henkin: {
        const auto& rows = f.henkin_rows();
        if (rows.size() != 2) throw Error("only two-row branching prefixes are supported");
        const auto& x = rows[0].universal;
        const auto& y = rows[0].existential;
        const auto& u = rows[1].universal;
        const auto& v = rows[1].existential;
        auto matrix = desugar_henkin(f.body());
        std::vector<std::string> cond{u};
        for (const auto& w : free_vars(matrix))
            if (w != x && w != y && w != u && w != v) cond.push_back(w);
        auto core = Formula::conj(Formula::ind(VarTuple{v}, VarTuple(std::move(cond)), VarTuple{x}), matrix);
        return Formula::forall(x, Formula::exists(y, Formula::forall(u, Formula::exists(v, std::move(core)))));
    }
    case FormulaKind::And:
    case FormulaKind::Or:
        return rebuild(f, {desugar_henkin(f.lhs()), desugar_henkin(f.rhs())});
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::SlashedExists:
        return rebuild(f, {desugar_henkin(f.body())});
    default:
        return f;
    }
}

Formula desugar(const Formula& f) { return desugar_slash(desugar_henkin(f)); }

}  // namespace teamlogic
