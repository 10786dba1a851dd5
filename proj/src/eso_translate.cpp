#include <algorithm>
#include <set>

#include "teamlogic/eso.hpp"

namespace teamlogic {

// Fo ----------------------------------------------------------------------

Fo Fo::make(Node n) { return Fo(std::make_shared<const Node>(std::move(n))); }

Fo Fo::top() { return make({FoKind::True, {}, {}, {}}); }
Fo Fo::bottom() { return make({FoKind::False, {}, {}, {}}); }

Fo Fo::equal(std::string a, std::string b) { return make({FoKind::Equal, {}, {std::move(a), std::move(b)}, {}}); }

Fo Fo::relation(std::string name, std::vector<std::string> args)
{
    return make({FoKind::Relation, std::move(name), std::move(args), {}});
}

Fo Fo::negate(Fo f) { return make({FoKind::Not, {}, {}, {std::move(f)}}); }

Fo Fo::conj(std::vector<Fo> kids)
{
    if (kids.empty()) return top();
    if (kids.size() == 1) return kids[0];
    return make({FoKind::And, {}, {}, std::move(kids)});
}

Fo Fo::disj(std::vector<Fo> kids)
{
    if (kids.empty()) return bottom();
    if (kids.size() == 1) return kids[0];
    return make({FoKind::Or, {}, {}, std::move(kids)});
}

Fo Fo::implies(Fo a, Fo b) { return make({FoKind::Implies, {}, {}, {std::move(a), std::move(b)}}); }
Fo Fo::exists(std::string var, Fo body) { return make({FoKind::Exists, std::move(var), {}, {std::move(body)}}); }
Fo Fo::forall(std::string var, Fo body) { return make({FoKind::Forall, std::move(var), {}, {std::move(body)}}); }

Fo Fo::exists(const std::vector<std::string>& vars, Fo body)
{
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(*it, std::move(body));
    return body;
}

Fo Fo::forall(const std::vector<std::string>& vars, Fo body)
{
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = forall(*it, std::move(body));
    return body;
}

std::size_t Fo::size() const
{
    std::size_t n = 1;
    for (const auto& k : node_->kids) n += k.size();
    return n;
}

namespace {

int precedence(FoKind k)
{
    switch (k) {
    case FoKind::Implies: return 1;
    case FoKind::Or: return 2;
    case FoKind::And: return 3;
    case FoKind::Exists:
    case FoKind::Forall: return 0;
    default: return 4;
    }
}

std::string print(const Fo& f);

// A quantifier in the last operand position extends to the end unbracketed.
std::string wrap(const Fo& f, int min_prec, bool last = false)
{
    auto s = print(f);
    if (last && precedence(f.kind()) == 0) return s;
    return precedence(f.kind()) < min_prec ? "(" + s + ")" : s;
}

std::string print(const Fo& f)
{
    switch (f.kind()) {
    case FoKind::True: return "true";
    case FoKind::False: return "false";
    case FoKind::Equal: return f.args()[0] + " = " + f.args()[1];
    case FoKind::Relation: {
        std::string s = f.name() + "(";
        for (std::size_t i = 0; i < f.args().size(); ++i) s += (i ? ", " : "") + f.args()[i];
        return s + ")";
    }
    case FoKind::Not: return "not " + wrap(f.body(), 4);
    case FoKind::And:
    case FoKind::Or: {
        const int p = precedence(f.kind());
        std::string s;
        for (std::size_t i = 0; i < f.kids().size(); ++i) {
            if (i) s += f.kind() == FoKind::And ? " and " : " or ";
            s += wrap(f.kids()[i], p + 1, i + 1 == f.kids().size());
        }
        return s;
    }
    case FoKind::Implies: return wrap(f.kids()[0], 2) + " -> " + wrap(f.kids()[1], 2, true);
    case FoKind::Exists:
    case FoKind::Forall: {
        const auto& b = f.body();
        const bool chain = b.kind() == FoKind::Exists || b.kind() == FoKind::Forall || precedence(b.kind()) == 4;
        return std::string(f.kind() == FoKind::Exists ? "exists " : "forall ") + f.var() + ". " +
               (chain ? print(b) : "(" + print(b) + ")");
    }
    }
    return {};
}

}  // namespace

std::string to_string(const Fo& f) { return print(f); }

std::string EsoSentence::to_string() const
{
    std::string s;
    if (!relvars.empty()) {
        s = "exists2";
        for (const auto& r : relvars) s += " " + r.name + "/" + std::to_string(r.arity);
        s += " . ";
    }
    return s + teamlogic::to_string(matrix);
}

// Translation -------------------------------------------------------------

namespace {

void collect_names(const Formula& f, std::set<std::string>& out)
{
    for (const auto& t : f.terms()) out.insert(t.name);
    for (const auto* tup : {&f.first(), &f.second(), &f.third()})
        for (const auto& v : *tup) out.insert(v);
    if (f.kind() == FormulaKind::Relation || f.kind() == FormulaKind::Exists || f.kind() == FormulaKind::Forall)
        out.insert(f.name());
    for (std::size_t i = 0; i < f.num_children(); ++i) collect_names(f.child(i), out);
}

class Translator {
public:
    Translator(const Formula& f, const VarTuple& scope)
    {
        collect_names(f, reserved_);
        for (const auto& v : scope) reserved_.insert(v);
        team_relation_ = "S";
        while (reserved_.count(team_relation_)) team_relation_ += "_";
        reserved_.insert(team_relation_);
    }

    EsoSentence run(const Formula& f, const VarTuple& scope)
    {
        std::vector<std::string> sc = scope.vars();
        EsoSentence out;
        out.team_relation = team_relation_;
        out.scope = sc;
        out.matrix = tr(f, team_relation_, sc);
        out.relvars = std::move(relvars_);
        return out;
    }

private:
    std::set<std::string> reserved_;
    std::string team_relation_;
    std::vector<RelationVariable> relvars_;
    std::size_t next_rel_ = 1;

    std::string fresh_relation(std::size_t arity)
    {
        std::string name;
        do {
            name = team_relation_ + std::to_string(next_rel_++);
        } while (reserved_.count(name));
        relvars_.push_back({name, arity});
        return name;
    }

    std::string name(const std::string& base, std::size_t i) const
    {
        auto s = base + std::to_string(i + 1);
        while (reserved_.count(s)) s += "_";
        return s;
    }

    std::vector<std::string> names(const std::string& base, std::size_t n) const
    {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(name(base, i));
        return out;
    }

    std::string single(const std::string& base) const
    {
        auto s = base;
        while (reserved_.count(s)) s += "_";
        return s;
    }

    static std::optional<std::size_t> position(const std::vector<std::string>& scope, const std::string& v)
    {
        auto it = std::find(scope.begin(), scope.end(), v);
        if (it == scope.end()) return std::nullopt;
        return static_cast<std::size_t>(it - scope.begin());
    }

    static std::vector<std::size_t> positions(const std::vector<std::string>& scope, const VarTuple& t)
    {
        std::vector<std::size_t> out;
        for (const auto& v : t) {
            auto p = position(scope, v);
            if (p && std::find(out.begin(), out.end(), *p) == out.end()) out.push_back(*p);
        }
        return out;
    }

    // forall y. (S(y) -> alpha(y)) with the scope variables renamed to y.
    Fo pointwise(const Formula& atom, bool negated, const std::string& S, const std::vector<std::string>& scope)
    {
        const auto ys = names("y", scope.size());
        std::vector<std::string> args;
        for (const auto& t : atom.terms()) {
            auto p = position(scope, t.name);
            args.push_back(p ? ys[*p] : t.name);
        }
        Fo a = atom.kind() == FormulaKind::Equal ? Fo::equal(args[0], args[1]) : Fo::relation(atom.name(), args);
        if (negated) a = Fo::negate(std::move(a));
        return Fo::forall(ys, Fo::implies(Fo::relation(S, ys), std::move(a)));
    }

    // Clause for x_I independent of x_K given x_J, index sets in J, I, K order.
    Fo independence(const VarTuple& left, const VarTuple& cond, const VarTuple& right, const std::string& S,
                    const std::vector<std::string>& scope)
    {
        const auto I = positions(scope, left);
        const auto J = positions(scope, cond);
        const auto K = positions(scope, right);
        const auto n = scope.size();
        const auto ys = names("y", n), zs = names("z", n), us = names("u", n);
        std::vector<Fo> pre{Fo::relation(S, ys), Fo::relation(S, zs)};
        for (auto j : J) pre.push_back(Fo::equal(ys[j], zs[j]));
        std::vector<Fo> post{Fo::relation(S, us)};
        for (auto j : J) post.push_back(Fo::equal(us[j], ys[j]));
        for (auto i : I) post.push_back(Fo::equal(us[i], ys[i]));
        for (auto k : K) post.push_back(Fo::equal(us[k], zs[k]));
        auto body = Fo::implies(Fo::conj(std::move(pre)), Fo::exists(us, Fo::conj(std::move(post))));
        std::vector<std::string> all = ys;
        all.insert(all.end(), zs.begin(), zs.end());
        return Fo::forall(all, std::move(body));
    }

    Fo tr(const Formula& f, const std::string& S, const std::vector<std::string>& scope)
    {
        const auto n = scope.size();
        switch (f.kind()) {
        case FormulaKind::Equal:
        case FormulaKind::Relation:
            return pointwise(f, false, S, scope);
        case FormulaKind::Not:
            if (f.child().is_fo_atom()) return pointwise(f.child(), true, S, scope);
            {
                // a negated dependence or independence atom holds only in the empty team
                const auto ys = names("y", n);
                return Fo::forall(ys, Fo::negate(Fo::relation(S, ys)));
            }
        case FormulaKind::Dep:
            return independence(f.second(), f.first(), f.second(), S, scope);
        case FormulaKind::Ind:
            return independence(f.first(), f.second(), f.third(), S, scope);
        case FormulaKind::And:
            return Fo::conj({tr(f.lhs(), S, scope), tr(f.rhs(), S, scope)});
        // The clauses below follow the standard dependence-logic construction:
        // each connective gets fresh relation variables tied to S by axioms.
        case FormulaKind::Or: {
            const auto s1 = fresh_relation(n);
            const auto s2 = fresh_relation(n);
            const auto ys = names("y", n);
            auto cover = Fo::forall(
                ys, Fo::implies(Fo::relation(S, ys), Fo::disj({Fo::relation(s1, ys), Fo::relation(s2, ys)})));
            auto sub1 = Fo::forall(ys, Fo::implies(Fo::relation(s1, ys), Fo::relation(S, ys)));
            auto sub2 = Fo::forall(ys, Fo::implies(Fo::relation(s2, ys), Fo::relation(S, ys)));
            return Fo::conj({cover, sub1, sub2, tr(f.lhs(), s1, scope), tr(f.rhs(), s2, scope)});
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            const bool ex = f.kind() == FormulaKind::Exists;
            const auto ys = names("y", n);
            const auto w = single("w");
            auto p = position(scope, f.var());
            std::vector<std::string> inner = scope;
            std::vector<std::string> with_w = ys;  // ys with w at the quantified column
            if (p)
                with_w[*p] = w;
            else {
                inner.push_back(f.var());
                with_w.push_back(w);
            }
            const auto s2 = fresh_relation(inner.size());
            std::vector<Fo> axioms;
            if (p) {
                // column overwritten: S' agrees with S up to the quantified column
                if (ex)
                    axioms.push_back(Fo::forall(
                        ys, Fo::implies(Fo::relation(S, ys), Fo::exists(w, Fo::relation(s2, with_w)))));
                else
                    axioms.push_back(Fo::forall(
                        ys, Fo::forall(w, Fo::implies(Fo::relation(S, with_w), Fo::relation(s2, ys)))));
                axioms.push_back(
                    Fo::forall(ys, Fo::implies(Fo::relation(s2, ys), Fo::exists(w, Fo::relation(S, with_w)))));
            } else {
                if (ex)
                    axioms.push_back(Fo::forall(
                        ys, Fo::implies(Fo::relation(S, ys), Fo::exists(w, Fo::relation(s2, with_w)))));
                else
                    axioms.push_back(Fo::forall(
                        ys, Fo::forall(w, Fo::implies(Fo::relation(S, ys), Fo::relation(s2, with_w)))));
                axioms.push_back(
                    Fo::forall(ys, Fo::forall(w, Fo::implies(Fo::relation(s2, with_w), Fo::relation(S, ys)))));
            }
            axioms.push_back(tr(f.body(), s2, inner));
            return Fo::conj(std::move(axioms));
        }
        case FormulaKind::SlashedExists:
        case FormulaKind::Henkin:
            throw Error("translate: desugar slashed and branching quantifiers first");
        }
        throw Error("translate: unknown formula kind");
    }
};

}  // namespace

EsoSentence translate(const Formula& f, const VarTuple& scope)
{
    const auto sorted = scope.as_set();
    if (sorted.size() != scope.size()) throw ScopeError("scope mismatch: scope lists a variable twice");
    return Translator(f, scope).run(f, scope);
}

}  // namespace teamlogic
