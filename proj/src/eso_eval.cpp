#include <algorithm>
#include <atomic>
#include <bit>
#include <map>
#include <unordered_map>

#include <omp.h>

#include "teamlogic/eso.hpp"
#include "teamlogic/sat.hpp"

namespace teamlogic {

namespace {

// Dense truth table over M^arity, indexed in mixed radix with the first
// argument most significant.
struct Table {
    std::size_t arity = 0;
    std::vector<char> bits;
};

std::uint64_t table_size(std::size_t m, std::size_t arity)
{
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < arity; ++i) {
        n *= m;
        if (n > (std::uint64_t{1} << 26)) throw CapExceeded("ESO search too large");
    }
    return n;
}

Table make_table(std::size_t m, std::size_t arity, const std::set<std::vector<Elem>>& tuples)
{
    Table t{arity, std::vector<char>(table_size(m, arity), 0)};
    for (const auto& tup : tuples) {
        std::size_t idx = 0;
        for (auto e : tup) idx = idx * m + e;
        t.bits[idx] = 1;
    }
    return t;
}

enum class RelSort { Structure, Team, Variable };

// Matrix with names resolved: terms become slots (bound variables) or
// elements (constants), relation names become table references.
struct CNode {
    FoKind kind;
    RelSort sort = RelSort::Structure;
    std::size_t rel = 0;
    std::vector<std::int64_t> args;  // >= 0: slot, < 0: constant -(e+1)
    std::size_t slot = 0;
    std::vector<CNode> kids;
};

struct Compiled {
    CNode root;
    std::size_t slots = 0;
    std::vector<Table> fixed;  // structure relations then the team relation
    std::size_t team_table = 0;
    std::vector<std::size_t> relvar_size;
    std::size_t m = 0;
};

class Compiler {
public:
    Compiler(const Structure& st, const Team& team, const EsoSentence& sentence) : st_(st), sentence_(sentence)
    {
        out_.m = st.size();
        if (out_.m == 0) throw Error("ESO: empty domain");
        for (const auto& v : sentence.scope)
            if (!team.index_of(v)) throw ScopeError("scope mismatch: team does not cover '" + v + "'");
        for (const auto& r : st.relations()) {
            fixed_index_[r.name] = out_.fixed.size();
            out_.fixed.push_back(make_table(out_.m, r.arity, r.tuples));
        }
        out_.team_table = out_.fixed.size();
        out_.fixed.push_back(
            make_table(out_.m, sentence.scope.size(), team_to_relation(team, VarTuple(sentence.scope))));
        for (std::size_t i = 0; i < sentence.relvars.size(); ++i) {
            relvar_index_[sentence.relvars[i].name] = i;
            out_.relvar_size.push_back(table_size(out_.m, sentence.relvars[i].arity));
        }
    }

    Compiled run()
    {
        out_.root = compile(sentence_.matrix);
        return std::move(out_);
    }

private:
    const Structure& st_;
    const EsoSentence& sentence_;
    Compiled out_;
    std::map<std::string, std::size_t> fixed_index_, relvar_index_;
    std::vector<std::pair<std::string, std::size_t>> env_;

    std::int64_t term(const std::string& name)
    {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
            if (it->first == name) return static_cast<std::int64_t>(it->second);
        if (auto c = st_.find_constant(name)) return -static_cast<std::int64_t>(*c) - 1;
        throw ScopeError("ESO: unbound name '" + name + "'");
    }

    CNode compile(const Fo& f)
    {
        CNode n{f.kind(), RelSort::Structure, 0, {}, 0, {}};
        switch (f.kind()) {
        case FoKind::Equal:
            n.args = {term(f.args()[0]), term(f.args()[1])};
            break;
        case FoKind::Relation: {
            std::size_t arity;
            if (f.name() == sentence_.team_relation) {
                n.sort = RelSort::Team;
                n.rel = out_.team_table;
                arity = sentence_.scope.size();
            } else if (auto it = relvar_index_.find(f.name()); it != relvar_index_.end()) {
                n.sort = RelSort::Variable;
                n.rel = it->second;
                arity = sentence_.relvars[it->second].arity;
            } else if (auto jt = fixed_index_.find(f.name()); jt != fixed_index_.end()) {
                n.rel = jt->second;
                arity = out_.fixed[jt->second].arity;
            } else {
                throw Error("ESO: unknown relation '" + f.name() + "'");
            }
            if (arity != f.args().size()) throw Error("ESO: arity mismatch for '" + f.name() + "'");
            for (const auto& a : f.args()) n.args.push_back(term(a));
            break;
        }
        case FoKind::Exists:
        case FoKind::Forall:
            n.slot = out_.slots++;
            env_.emplace_back(f.var(), n.slot);
            n.kids.push_back(compile(f.body()));
            env_.pop_back();
            break;
        default:
            for (const auto& k : f.kids()) n.kids.push_back(compile(k));
        }
        return n;
    }
};

std::size_t tuple_index(const CNode& n, const std::vector<Elem>& env, std::size_t m)
{
    std::size_t idx = 0;
    for (auto a : n.args) idx = idx * m + (a >= 0 ? env[a] : static_cast<Elem>(-a - 1));
    return idx;
}

Elem term_value(std::int64_t a, const std::vector<Elem>& env) { return a >= 0 ? env[a] : static_cast<Elem>(-a - 1); }

// Tarskian recursion; relation variables read from `vars` at the given offsets.
bool tarski(const Compiled& c, const CNode& n, std::vector<Elem>& env, const std::vector<char>& vars,
            const std::vector<std::size_t>& offset)
{
    switch (n.kind) {
    case FoKind::True: return true;
    case FoKind::False: return false;
    case FoKind::Equal: return term_value(n.args[0], env) == term_value(n.args[1], env);
    case FoKind::Relation: {
        const auto idx = tuple_index(n, env, c.m);
        if (n.sort == RelSort::Variable) return vars[offset[n.rel] + idx] != 0;
        return c.fixed[n.rel].bits[idx] != 0;
    }
    case FoKind::Not: return !tarski(c, n.kids[0], env, vars, offset);
    case FoKind::And:
        for (const auto& k : n.kids)
            if (!tarski(c, k, env, vars, offset)) return false;
        return true;
    case FoKind::Or:
        for (const auto& k : n.kids)
            if (tarski(c, k, env, vars, offset)) return true;
        return false;
    case FoKind::Implies:
        return !tarski(c, n.kids[0], env, vars, offset) || tarski(c, n.kids[1], env, vars, offset);
    case FoKind::Exists:
    case FoKind::Forall: {
        const bool ex = n.kind == FoKind::Exists;
        for (Elem e = 0; e < c.m; ++e) {
            env[n.slot] = e;
            if (tarski(c, n.kids[0], env, vars, offset) == ex) return ex;
        }
        return !ex;
    }
    }
    return false;
}

// And-inverter graph with structural hashing. Literal = 2*node + negated;
// node 0 is the constant true.
class Circuit {
public:
    static constexpr std::uint32_t kTrue = 0, kFalse = 1;

    explicit Circuit(std::uint64_t cap) : cap_(cap)
    {
        kids_.emplace_back();
        var_.push_back(-1);
    }

    std::uint32_t input(int var_id)
    {
        kids_.emplace_back();
        var_.push_back(var_id);
        return static_cast<std::uint32_t>(2 * (kids_.size() - 1));
    }

    std::uint32_t conj(std::vector<std::uint32_t> lits)
    {
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        std::vector<std::uint32_t> kept;
        for (auto l : lits) {
            if (l == kTrue) continue;
            if (l == kFalse) return kFalse;
            if (!kept.empty() && kept.back() == (l ^ 1)) return kFalse;
            kept.push_back(l);
        }
        if (kept.empty()) return kTrue;
        if (kept.size() == 1) return kept[0];
        auto it = cache_.find(kept);
        if (it != cache_.end()) return it->second;
        if (kids_.size() >= cap_) throw CapExceeded("ESO search too large");
        kids_.push_back(kept);
        var_.push_back(-1);
        const auto lit = static_cast<std::uint32_t>(2 * (kids_.size() - 1));
        cache_.emplace(std::move(kept), lit);
        return lit;
    }

    std::uint32_t disj(std::vector<std::uint32_t> lits)
    {
        for (auto& l : lits) l ^= 1;
        return conj(std::move(lits)) ^ 1;
    }

    std::size_t nodes() const { return kids_.size(); }
    const std::vector<std::uint32_t>& kids(std::size_t node) const { return kids_[node]; }
    int input_var(std::size_t node) const { return var_[node]; }

private:
    struct Hash {
        std::size_t operator()(const std::vector<std::uint32_t>& v) const
        {
            std::size_t h = v.size();
            for (auto x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        }
    };
    std::uint64_t cap_;
    std::vector<std::vector<std::uint32_t>> kids_;
    std::vector<int> var_;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, Hash> cache_;
};

class Grounder {
public:
    Grounder(const Compiled& c, Circuit& circuit) : c_(c), circuit_(circuit), env_(c.slots, 0)
    {
        std::size_t total = 0;
        for (auto s : c.relvar_size) {
            offset_.push_back(total);
            total += s;
        }
        input_lit_.assign(total, kUnset);
    }

    std::uint32_t ground(const CNode& n)
    {
        switch (n.kind) {
        case FoKind::True: return Circuit::kTrue;
        case FoKind::False: return Circuit::kFalse;
        case FoKind::Equal:
            return term_value(n.args[0], env_) == term_value(n.args[1], env_) ? Circuit::kTrue : Circuit::kFalse;
        case FoKind::Relation: {
            const auto idx = tuple_index(n, env_, c_.m);
            if (n.sort != RelSort::Variable) return c_.fixed[n.rel].bits[idx] ? Circuit::kTrue : Circuit::kFalse;
            auto& lit = input_lit_[offset_[n.rel] + idx];
            if (lit == kUnset) lit = circuit_.input(static_cast<int>(offset_[n.rel] + idx));
            return lit;
        }
        case FoKind::Not: return ground(n.kids[0]) ^ 1;
        case FoKind::And:
        case FoKind::Or: {
            const bool is_and = n.kind == FoKind::And;
            const auto absorbing = is_and ? Circuit::kFalse : Circuit::kTrue;
            std::vector<std::uint32_t> parts;
            for (const auto& k : n.kids) {
                const auto l = ground(k);
                if (l == absorbing) return absorbing;
                parts.push_back(l);
            }
            return is_and ? circuit_.conj(std::move(parts)) : circuit_.disj(std::move(parts));
        }
        case FoKind::Implies: {
            const auto a = ground(n.kids[0]);
            if (a == Circuit::kFalse) return Circuit::kTrue;
            return circuit_.disj({a ^ 1, ground(n.kids[1])});
        }
        case FoKind::Exists:
        case FoKind::Forall: {
            const bool ex = n.kind == FoKind::Exists;
            const auto absorbing = ex ? Circuit::kTrue : Circuit::kFalse;
            std::vector<std::uint32_t> parts;
            for (Elem e = 0; e < c_.m; ++e) {
                env_[n.slot] = e;
                const auto l = ground(n.kids[0]);
                if (l == absorbing) return absorbing;
                parts.push_back(l);
            }
            return ex ? circuit_.disj(std::move(parts)) : circuit_.conj(std::move(parts));
        }
        }
        return Circuit::kFalse;
    }

private:
    static constexpr std::uint32_t kUnset = 0xffffffffu;
    const Compiled& c_;
    Circuit& circuit_;
    std::vector<Elem> env_;
    std::vector<std::size_t> offset_;
    std::vector<std::uint32_t> input_lit_;
};

// Polarity-aware Tseitin encoding of the circuit rooted at `root`.
bool solve_circuit(const Circuit& circuit, std::uint32_t root, std::uint64_t conflict_budget)
{
    if (root == Circuit::kTrue) return true;
    if (root == Circuit::kFalse) return false;
    const auto n = circuit.nodes();
    std::vector<std::uint8_t> pol(n, 0);  // bit 0: positive, bit 1: negative
    pol[root >> 1] |= (root & 1) ? 2 : 1;
    for (std::size_t i = n; i-- > 1;) {
        if (!pol[i] || circuit.input_var(i) >= 0) continue;
        for (auto k : circuit.kids(i)) {
            const std::uint8_t p = (k & 1) ? static_cast<std::uint8_t>(((pol[i] & 1) << 1) | ((pol[i] >> 1) & 1))
                                           : pol[i];
            pol[k >> 1] |= p;
        }
    }
    SatSolver sat;
    std::vector<int> sat_var(n, -1);
    for (std::size_t i = 1; i < n; ++i)
        if (pol[i]) sat_var[i] = sat.new_var();
    auto lit = [&](std::uint32_t l) {
        const int v = sat_var[l >> 1] + 1;
        return (l & 1) ? -v : v;
    };
    for (std::size_t i = 1; i < n; ++i) {
        if (!pol[i] || circuit.input_var(i) >= 0) continue;
        const int g = sat_var[i] + 1;
        const auto& ks = circuit.kids(i);
        if (pol[i] & 1)
            for (auto k : ks) sat.add_clause({-g, lit(k)});
        if (pol[i] & 2) {
            std::vector<int> c{g};
            for (auto k : ks) c.push_back(-lit(k));
            sat.add_clause(c);
        }
    }
    sat.add_clause({lit(root)});
    return sat.solve(conflict_budget);
}

std::size_t total_bits(const Compiled& c, std::size_t max_bits)
{
    std::uint64_t total = 0;
    for (auto s : c.relvar_size) {
        total += s;
        if (total > max_bits) throw CapExceeded("ESO search too large");
    }
    return static_cast<std::size_t>(total);
}

void unpack(std::uint64_t mask, std::size_t bits, std::vector<char>& vars)
{
    for (std::size_t i = 0; i < bits; ++i) vars[i] = static_cast<char>((mask >> i) & 1);
}

std::vector<std::size_t> offsets(const Compiled& c)
{
    std::vector<std::size_t> out;
    std::size_t total = 0;
    for (auto s : c.relvar_size) {
        out.push_back(total);
        total += s;
    }
    return out;
}

}  // namespace

bool eval_eso(const Structure& structure, const Team& team, const EsoSentence& sentence, const EsoOptions& opts)
{
    const auto c = Compiler(structure, team, sentence).run();
    Circuit circuit(opts.ground_cap);
    Grounder g(c, circuit);
    const auto root = g.ground(c.root);
    return solve_circuit(circuit, root, opts.conflict_budget);
}

bool eso_matrix_holds(const Structure& structure, const Team& team, const EsoSentence& sentence,
                      const std::vector<std::set<std::vector<Elem>>>& interpretation)
{
    if (interpretation.size() != sentence.relvars.size()) throw Error("ESO: interpretation count mismatch");
    const auto c = Compiler(structure, team, sentence).run();
    const auto off = offsets(c);
    std::vector<char> vars(off.empty() ? 0 : off.back() + c.relvar_size.back(), 0);
    for (std::size_t r = 0; r < interpretation.size(); ++r) {
        const auto t = make_table(c.m, sentence.relvars[r].arity, interpretation[r]);
        std::copy(t.bits.begin(), t.bits.end(), vars.begin() + static_cast<std::ptrdiff_t>(off[r]));
    }
    std::vector<Elem> env(c.slots, 0);
    return tarski(c, c.root, env, vars, off);
}

bool eval_eso_bruteforce(const Structure& structure, const Team& team, const EsoSentence& sentence,
                         std::size_t max_bits)
{
    const auto c = Compiler(structure, team, sentence).run();
    const auto bits = total_bits(c, std::min<std::size_t>(max_bits, 30));
    const auto off = offsets(c);
    std::vector<char> vars(bits, 0);
    std::vector<Elem> env(c.slots, 0);
    // masks in order of increasing popcount (Gosper's successor)
    for (std::size_t k = 0; k <= bits; ++k) {
        std::uint64_t mask = (std::uint64_t{1} << k) - 1;
        const std::uint64_t limit = std::uint64_t{1} << bits;
        while (mask < limit) {
            unpack(mask, bits, vars);
            if (tarski(c, c.root, env, vars, off)) return true;
            if (mask == 0) break;
            const std::uint64_t low = mask & (~mask + 1);
            const std::uint64_t ripple = mask + low;
            mask = (((ripple ^ mask) >> 2) / low) | ripple;
        }
    }
    return false;
}

bool eval_eso_bruteforce_parallel(const Structure& structure, const Team& team, const EsoSentence& sentence,
                                  std::size_t max_bits)
{
    const auto c = Compiler(structure, team, sentence).run();
    const auto bits = total_bits(c, std::min<std::size_t>(max_bits, 30));
    const auto off = offsets(c);
    const std::int64_t total = std::int64_t{1} << bits;
    std::atomic<bool> found{false};
#pragma omp parallel
    {
        std::vector<char> vars(bits, 0);
        std::vector<Elem> env(c.slots, 0);
#pragma omp for schedule(dynamic, 256)
        for (std::int64_t mask = 0; mask < total; ++mask) {
            if (found.load(std::memory_order_relaxed)) continue;
            unpack(static_cast<std::uint64_t>(mask), bits, vars);
            if (tarski(c, c.root, env, vars, off)) found.store(true, std::memory_order_relaxed);
        }
    }
    return found.load();
}

TranslationReport check_translation(const Structure& structure, const Team& team, const Formula& f, Semantics mode,
                                    const EsoOptions& opts)
{
    TranslationReport r;
    EvalOptions eo;
    eo.semantics = mode;
    r.team_value = evaluate(structure, team, f, eo);
    r.eso_value = eval_eso(structure, team, translate(f, VarTuple(team.scope())), opts);
    return r;
}

}  // namespace teamlogic
