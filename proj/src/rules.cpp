#include <algorithm>
#include <bit>
#include <deque>
#include <set>
#include <sstream>

#include "teamlogic/atoms.hpp"

namespace teamlogic {

std::string_view to_string(Rule r)
{
    switch (r) {
    case Rule::Premise: return "Premise";
    case Rule::DepReflexivity: return "DepReflexivity";
    case Rule::DepMonotonicity: return "DepMonotonicity";
    case Rule::DepPermutation: return "DepPermutation";
    case Rule::DepTransitivity: return "DepTransitivity";
    case Rule::Reflexivity: return "Reflexivity";
    case Rule::Symmetry: return "Symmetry";
    case Rule::Weakening: return "Weakening";
    case Rule::Permutation: return "Permutation";
    case Rule::FixedParameter: return "FixedParameter";
    case Rule::FirstTransitivity: return "FirstTransitivity";
    case Rule::SecondTransitivity: return "SecondTransitivity";
    case Rule::Constancy: return "Constancy";
    case Rule::DepToInd: return "DepToInd";
    case Rule::IndToDep: return "IndToDep";
    case Rule::ArmstrongAugmentation: return "ArmstrongAugmentation";
    }
    return "?";
}

const std::vector<Rule>& closure_rules()
{
    static const std::vector<Rule> rules{
        Rule::Reflexivity,       Rule::Symmetry,           Rule::Weakening, Rule::Permutation,
        Rule::FixedParameter,    Rule::FirstTransitivity,  Rule::SecondTransitivity,
        Rule::Constancy,         Rule::DepToInd,           Rule::IndToDep, Rule::ArmstrongAugmentation,
    };
    return rules;
}

std::string DerivationTrace::to_string() const
{
    std::ostringstream out;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        out << "  " << i << ". " << steps[i].conclusion.to_string() << "   [" << teamlogic::to_string(steps[i].rule);
        for (std::size_t k = 0; k < steps[i].premises.size(); ++k) out << (k ? ", " : " ") << steps[i].premises[k];
        out << "]\n";
    }
    return out.str();
}

// Masks -------------------------------------------------------------------

namespace {

std::uint32_t mask_of(const VarTuple& t, const std::vector<std::string>& universe)
{
    std::uint32_t m = 0;
    for (const auto& v : t) {
        auto it = std::lower_bound(universe.begin(), universe.end(), v);
        if (it == universe.end() || *it != v) throw ScopeError("variable '" + v + "' is outside the universe");
        m |= std::uint32_t{1} << (it - universe.begin());
    }
    return m;
}

VarTuple tuple_of(std::uint32_t m, const std::vector<std::string>& universe)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < universe.size(); ++i)
        if (m >> i & 1) out.push_back(universe[i]);
    return VarTuple(std::move(out));
}

bool subset(std::uint32_t a, std::uint32_t b) { return (a & ~b) == 0; }

MaskAtom ind(std::uint32_t a, std::uint32_t b, std::uint32_t c) { return {AtomKind::Ind, a, b, c}; }
MaskAtom dep(std::uint32_t a, std::uint32_t b) { return {AtomKind::Dep, a, b, 0}; }

bool mask_instance(Rule rule, const std::vector<MaskAtom>& p, const MaskAtom& c)
{
    auto is_ind = [](const MaskAtom& m) { return m.kind == AtomKind::Ind; };
    auto is_dep = [](const MaskAtom& m) { return m.kind == AtomKind::Dep; };
    auto arity = [&](std::size_t n, auto kind_ok) {
        if (p.size() != n) return false;
        for (const auto& q : p)
            if (!kind_ok(q)) return false;
        return true;
    };
    switch (rule) {
    case Rule::Premise:
        return false;
    case Rule::DepReflexivity:
        return p.empty() && is_dep(c) && c.a == c.b;
    case Rule::DepMonotonicity:
        return arity(1, is_dep) && is_dep(c) && subset(p[0].a, c.a) && c.b == p[0].b;
    case Rule::DepPermutation:
        return arity(1, is_dep) && c == p[0];
    case Rule::DepTransitivity:
        return arity(2, is_dep) && is_dep(c) && p[0].b == p[1].a && c.a == p[0].a && c.b == p[1].b;
    case Rule::Reflexivity:
        return p.empty() && is_ind(c) && c.a == c.b;
    case Rule::Symmetry:
        return arity(1, is_ind) && c == ind(p[0].c, p[0].b, p[0].a);
    case Rule::Weakening:
        return arity(1, is_ind) && is_ind(c) && c.b == p[0].b && subset(c.a, p[0].a) && subset(c.c, p[0].c);
    case Rule::Permutation:
        return arity(1, is_ind) && c == p[0];
    case Rule::FixedParameter:
        return arity(1, is_ind) && c == ind(p[0].c | p[0].b, p[0].b, p[0].a | p[0].b);
    case Rule::FirstTransitivity:
        // X ⊥_Z Y and U ⊥_{ZX} Y give U ⊥_Z Y
        return arity(2, is_ind) && p[1].b == (p[0].b | p[0].a) && p[1].c == p[0].c &&
               c == ind(p[1].a, p[0].b, p[0].c);
    case Rule::SecondTransitivity:
        // Y ⊥_Z Y and ZX ⊥_Y U give X ⊥_Z U
        return arity(2, is_ind) && p[0].a == p[0].c && p[1].b == p[0].a && is_ind(c) && c.b == p[0].b &&
               c.c == p[1].c && p[1].a == (p[0].b | c.a);
    case Rule::Constancy:
        return arity(1, is_ind) && p[0].a == p[0].c && is_ind(c) && c.a == p[0].a && c.b == p[0].b;
    case Rule::DepToInd:
        return arity(1, is_dep) && is_ind(c) && c.a == p[0].b && c.b == p[0].a;
    case Rule::IndToDep:
        return arity(1, is_ind) && c == dep(p[0].b, p[0].a & p[0].c);
    case Rule::ArmstrongAugmentation:
        return arity(1, is_dep) && is_dep(c) && subset(p[0].a, c.a) && subset(p[0].b, c.b) &&
               subset(c.a & ~p[0].a, c.b) && subset(c.b & ~p[0].b, c.a);
    }
    return false;
}

struct MaskHash {
    std::size_t operator()(const MaskAtom& m) const
    {
        return (static_cast<std::size_t>(m.a) * 0x9e3779b1u) ^ (static_cast<std::size_t>(m.b) << 20) ^
               (static_cast<std::size_t>(m.c) << 40) ^ static_cast<std::size_t>(m.kind);
    }
};

}  // namespace

MaskAtom to_mask(const AtomStatement& atom, const std::vector<std::string>& universe)
{
    if (universe.size() > 16) throw Error("universes are limited to 16 variables");
    return {atom.kind, mask_of(atom.a, universe), mask_of(atom.b, universe),
            atom.kind == AtomKind::Ind ? mask_of(atom.c, universe) : 0};
}

AtomStatement from_mask(const MaskAtom& atom, const std::vector<std::string>& universe)
{
    if (atom.kind == AtomKind::Dep) return AtomStatement::dep(tuple_of(atom.a, universe), tuple_of(atom.b, universe));
    return AtomStatement::ind(tuple_of(atom.a, universe), tuple_of(atom.b, universe), tuple_of(atom.c, universe));
}

bool is_rule_instance(Rule rule, const std::vector<AtomStatement>& premises, const AtomStatement& conclusion)
{
    std::vector<AtomStatement> all = premises;
    all.push_back(conclusion);
    const auto universe = universe_of(all);
    std::vector<MaskAtom> p;
    for (const auto& q : premises) p.push_back(to_mask(q, universe));
    return mask_instance(rule, p, to_mask(conclusion, universe));
}

bool check_trace(const DerivationTrace& trace, const std::vector<AtomStatement>& T)
{
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        for (auto j : s.premises)
            if (j >= i) return false;
        if (s.rule == Rule::Premise) {
            if (!s.premises.empty()) return false;
            if (std::none_of(T.begin(), T.end(), [&](const auto& t) { return t.same_as(s.conclusion); })) return false;
            continue;
        }
        std::vector<AtomStatement> prem;
        for (auto j : s.premises) prem.push_back(trace.steps[j].conclusion);
        if (!is_rule_instance(s.rule, prem, s.conclusion)) return false;
    }
    return true;
}

// Instance enumeration ----------------------------------------------------

void for_each_instance(Rule rule, std::size_t n,
                       const std::function<void(const std::vector<MaskAtom>&, const MaskAtom&)>& cb)
{
    const std::uint32_t N = std::uint32_t{1} << n;
    std::vector<MaskAtom> p;
    auto emit0 = [&](const MaskAtom& c) {
        p.clear();
        cb(p, c);
    };
    auto emit1 = [&](const MaskAtom& a, const MaskAtom& c) {
        p.assign({a});
        cb(p, c);
    };
    auto emit2 = [&](const MaskAtom& a, const MaskAtom& b, const MaskAtom& c) {
        p.assign({a, b});
        cb(p, c);
    };
    // Submasks of m, including 0 and m.
    auto for_sub = [](std::uint32_t m, auto&& f) {
        for (std::uint32_t s = m;; s = (s - 1) & m) {
            f(s);
            if (s == 0) break;
        }
    };
    switch (rule) {
    case Rule::Premise:
        return;
    case Rule::DepReflexivity:
        for (std::uint32_t x = 0; x < N; ++x) emit0(dep(x, x));
        return;
    case Rule::DepMonotonicity:
        for (std::uint32_t y = 0; y < N; ++y)
            for (std::uint32_t x = 0; x < N; ++x)
                for (std::uint32_t z = 0; z < N; ++z)
                    if (subset(y, z)) emit1(dep(y, x), dep(z, x));
        return;
    case Rule::DepPermutation:
        for (std::uint32_t x = 0; x < N; ++x)
            for (std::uint32_t y = 0; y < N; ++y) emit1(dep(x, y), dep(x, y));
        return;
    case Rule::DepTransitivity:
        for (std::uint32_t y = 0; y < N; ++y)
            for (std::uint32_t z = 0; z < N; ++z)
                for (std::uint32_t x = 0; x < N; ++x) emit2(dep(y, z), dep(z, x), dep(y, x));
        return;
    case Rule::Reflexivity:
        for (std::uint32_t x = 0; x < N; ++x)
            for (std::uint32_t y = 0; y < N; ++y) emit0(ind(x, x, y));
        return;
    case Rule::Symmetry:
        for (std::uint32_t z = 0; z < N; ++z)
            for (std::uint32_t x = 0; x < N; ++x)
                for (std::uint32_t y = 0; y < N; ++y) emit1(ind(z, x, y), ind(y, x, z));
        return;
    case Rule::Weakening:
        for (std::uint32_t y = 0; y < N; ++y)
            for (std::uint32_t x = 0; x < N; ++x)
                for (std::uint32_t z = 0; z < N; ++z)
                    for_sub(y, [&](std::uint32_t ys) {
                        for_sub(z, [&](std::uint32_t zs) { emit1(ind(y, x, z), ind(ys, x, zs)); });
                    });
        return;
    case Rule::Permutation:
        for (std::uint32_t y = 0; y < N; ++y)
            for (std::uint32_t x = 0; x < N; ++x)
                for (std::uint32_t z = 0; z < N; ++z) emit1(ind(y, x, z), ind(y, x, z));
        return;
    case Rule::FixedParameter:
        for (std::uint32_t z = 0; z < N; ++z)
            for (std::uint32_t x = 0; x < N; ++x)
                for (std::uint32_t y = 0; y < N; ++y) emit1(ind(z, x, y), ind(y | x, x, z | x));
        return;
    case Rule::FirstTransitivity:
        for (std::uint32_t x = 0; x < N; ++x)
            for (std::uint32_t z = 0; z < N; ++z)
                for (std::uint32_t y = 0; y < N; ++y)
                    for (std::uint32_t u = 0; u < N; ++u) emit2(ind(x, z, y), ind(u, z | x, y), ind(u, z, y));
        return;
    case Rule::SecondTransitivity:
        for (std::uint32_t y = 0; y < N; ++y)
            for (std::uint32_t z = 0; z < N; ++z)
                for (std::uint32_t x = 0; x < N; ++x)
                    for (std::uint32_t u = 0; u < N; ++u) emit2(ind(y, z, y), ind(z | x, y, u), ind(x, z, u));
        return;
    case Rule::Constancy:
        for (std::uint32_t y = 0; y < N; ++y)
            for (std::uint32_t x = 0; x < N; ++x)
                for (std::uint32_t z = 0; z < N; ++z) emit1(ind(y, x, y), ind(y, x, z));
        return;
    case Rule::DepToInd:
        for (std::uint32_t x = 0; x < N; ++x)
            for (std::uint32_t y = 0; y < N; ++y)
                for (std::uint32_t z = 0; z < N; ++z) emit1(dep(x, y), ind(y, x, z));
        return;
    case Rule::IndToDep:
        for (std::uint32_t y = 0; y < N; ++y)
            for (std::uint32_t x = 0; x < N; ++x)
                for (std::uint32_t z = 0; z < N; ++z) emit1(ind(y, x, z), dep(x, y & z));
        return;
    case Rule::ArmstrongAugmentation:
        for (std::uint32_t x = 0; x < N; ++x)
            for (std::uint32_t y = 0; y < N; ++y)
                for (std::uint32_t z = 0; z < N; ++z) emit1(dep(x, y), dep(x | z, y | z));
        return;
    }
}

std::vector<RuleInstance> rule_instances(std::size_t n, const std::vector<Rule>& rules)
{
    std::vector<RuleInstance> out;
    for (Rule r : rules) {
        std::set<std::pair<std::vector<MaskAtom>, MaskAtom>> seen;
        for_each_instance(r, n, [&](const std::vector<MaskAtom>& p, const MaskAtom& c) {
            if (std::find(p.begin(), p.end(), c) != p.end()) return;
            if (seen.emplace(p, c).second) out.push_back({r, p, c});
        });
    }
    return out;
}

// Closure -----------------------------------------------------------------

bool ClosureResult::contains(const AtomStatement& atom) const
{
    for (const auto& v : atom.vars())
        if (!std::binary_search(universe.begin(), universe.end(), v)) return false;
    return index.count(to_mask(atom, universe)) > 0;
}

std::vector<AtomStatement> ClosureResult::atoms() const
{
    std::vector<AtomStatement> out;
    for (const auto& s : trace.steps) out.push_back(s.conclusion);
    return out;
}

DerivationTrace ClosureResult::derivation_of(const AtomStatement& atom) const
{
    DerivationTrace out;
    if (!contains(atom)) return out;
    std::set<std::size_t> needed;
    std::vector<std::size_t> stack{index.at(to_mask(atom, universe))};
    while (!stack.empty()) {
        auto i = stack.back();
        stack.pop_back();
        if (!needed.insert(i).second) continue;
        for (auto j : trace.steps[i].premises) stack.push_back(j);
    }
    std::map<std::size_t, std::size_t> renum;
    for (auto i : needed) {
        renum[i] = out.steps.size();
        auto step = trace.steps[i];
        for (auto& j : step.premises) j = renum.at(j);
        out.steps.push_back(std::move(step));
    }
    return out;
}

namespace {

class ClosureEngine {
public:
    ClosureEngine(std::size_t n, std::size_t max_steps, ClosureResult& out)
        : N_(std::uint32_t{1} << n), max_steps_(max_steps), out_(out), by_cond_(N_)
    {
    }

    bool add(const MaskAtom& m, Rule r, std::vector<std::size_t> premises)
    {
        if (seen_.count(m)) return true;
        if (derived_ >= max_steps_ && r != Rule::Premise) {
            out_.truncated = true;
            return false;
        }
        if (r != Rule::Premise) ++derived_;
        const auto i = out_.trace.steps.size();
        out_.trace.steps.push_back({r, std::move(premises), from_mask(m, out_.universe)});
        seen_.emplace(m, i);
        masks_.push_back(m);
        queue_.push_back(i);
        return true;
    }

    void run()
    {
        for (std::uint32_t x = 0; x < N_; ++x)
            for (std::uint32_t y = 0; y < N_; ++y)
                if (!add(ind(x, x, y), Rule::Reflexivity, {})) return;
        while (!queue_.empty() && !out_.truncated) {
            const auto i = queue_.front();
            queue_.pop_front();
            if (!process(i)) return;
        }
    }

private:
    std::uint32_t N_;
    std::size_t max_steps_;
    std::size_t derived_ = 0;
    ClosureResult& out_;
    std::unordered_map<MaskAtom, std::size_t, MaskHash> seen_;
    std::vector<MaskAtom> masks_;
    std::deque<std::size_t> queue_;
    std::vector<std::vector<std::size_t>> by_cond_;

    template <class F>
    static bool for_sub(std::uint32_t m, F&& f)
    {
        for (std::uint32_t s = m;; s = (s - 1) & m) {
            if (!f(s)) return false;
            if (s == 0) return true;
        }
    }

    // every X with X ∪ Z = L, given Z ⊆ L
    template <class F>
    static bool for_completion(std::uint32_t L, std::uint32_t Z, F&& f)
    {
        return for_sub(Z, [&](std::uint32_t w) { return f((L & ~Z) | w); });
    }

    bool process(std::size_t i)
    {
        const MaskAtom p = masks_[i];
        if (p.kind == AtomKind::Dep) {
            for (std::uint32_t z = 0; z < N_; ++z)
                if (!add(ind(p.b, p.a, z), Rule::DepToInd, {i})) return false;
            for (std::uint32_t z = 0; z < N_; ++z)
                if (!add(dep(p.a | z, p.b | z), Rule::ArmstrongAugmentation, {i})) return false;
            return true;
        }
        by_cond_[p.b].push_back(i);
        if (!add(ind(p.c, p.b, p.a), Rule::Symmetry, {i})) return false;
        const bool ok = for_sub(p.a, [&](std::uint32_t ys) {
            return for_sub(p.c, [&](std::uint32_t zs) { return add(ind(ys, p.b, zs), Rule::Weakening, {i}); });
        });
        if (!ok) return false;
        if (!add(ind(p.c | p.b, p.b, p.a | p.b), Rule::FixedParameter, {i})) return false;
        if (p.a == p.c)
            for (std::uint32_t z = 0; z < N_; ++z)
                if (!add(ind(p.a, p.b, z), Rule::Constancy, {i})) return false;
        if (!add(dep(p.b, p.a & p.c), Rule::IndToDep, {i})) return false;

        // FirstTransitivity, p as X ⊥_Z Y
        for (auto j : by_cond_[p.b | p.a]) {
            const auto& q = masks_[j];
            if (q.c == p.c && !add(ind(q.a, p.b, p.c), Rule::FirstTransitivity, {i, j})) return false;
        }
        // FirstTransitivity, p as U ⊥_{ZX} Y
        if (!for_sub(p.b, [&](std::uint32_t z) {
                for (auto j : by_cond_[z]) {
                    const auto& q = masks_[j];
                    if (q.c == p.c && (z | q.a) == p.b && !add(ind(p.a, z, p.c), Rule::FirstTransitivity, {j, i}))
                        return false;
                }
                return true;
            }))
            return false;
        // SecondTransitivity, p as Y ⊥_Z Y
        if (p.a == p.c) {
            for (auto j : by_cond_[p.a]) {
                const auto q = masks_[j];
                if (!subset(p.b, q.a)) continue;
                if (!for_completion(q.a, p.b, [&](std::uint32_t x) {
                        return add(ind(x, p.b, q.c), Rule::SecondTransitivity, {i, j});
                    }))
                    return false;
            }
        }
        // SecondTransitivity, p as ZX ⊥_Y U
        return for_sub(p.a, [&](std::uint32_t z) {
            for (auto j : by_cond_[z]) {
                const auto q = masks_[j];
                if (q.a != q.c || q.a != p.b) continue;
                if (!for_completion(p.a, z, [&](std::uint32_t x) {
                        return add(ind(x, z, p.c), Rule::SecondTransitivity, {j, i});
                    }))
                    return false;
            }
            return true;
        });
    }
};

}  // namespace

ClosureResult rule_closure(const std::vector<AtomStatement>& T, std::size_t max_steps, std::vector<std::string> universe)
{
    ClosureResult out;
    if (universe.empty()) universe = universe_of(T);
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    if (universe.size() > 10) throw CapExceeded("rule_closure: universe larger than 10 variables");
    out.universe = universe;
    ClosureEngine engine(universe.size(), max_steps, out);
    for (const auto& t : T) engine.add(to_mask(t, universe), Rule::Premise, {});
    engine.run();
    for (std::size_t i = 0; i < out.trace.steps.size(); ++i)
        out.index.emplace(to_mask(out.trace.steps[i].conclusion, universe), i);
    return out;
}

}  // namespace teamlogic
