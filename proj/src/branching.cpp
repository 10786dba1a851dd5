#include "teamlogic/branching.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#include <omp.h>

namespace teamlogic {

namespace {

struct Prefix {
    std::string x, y, u, v;
    Formula matrix;
};

Prefix split(const Formula& h)
{
    if (h.kind() != FormulaKind::Henkin || h.henkin_rows().size() != 2)
        throw Error("expected a two-row branching prefix");
    if (!is_first_order(h.body()) || contains_sugar(h.body())) throw Error("branching matrix must be first-order");
    const auto& r = h.henkin_rows();
    return {r[0].universal, r[0].existential, r[1].universal, r[1].existential, h.body()};
}

// truth[((a*m + c)*m + b)*m + d] = matrix at x=a, y=c, u=b, v=d
std::vector<char> truth_table(const Structure& st, const Assignment& s, const Prefix& p, std::size_t max_domain)
{
    const std::size_t m = st.size();
    if (m == 0) throw Error("empty domain");
    if (m > max_domain) throw CapExceeded("Skolem search: domain larger than " + std::to_string(max_domain));
    Assignment ext = s;
    std::size_t pos[4];
    const std::string* names[4] = {&p.x, &p.y, &p.u, &p.v};
    for (int i = 0; i < 4; ++i) {
        auto it = std::find(ext.scope.begin(), ext.scope.end(), *names[i]);
        if (it == ext.scope.end()) {
            ext.scope.push_back(*names[i]);
            ext.values.push_back(0);
            pos[i] = ext.scope.size() - 1;
        } else {
            pos[i] = static_cast<std::size_t>(it - ext.scope.begin());
        }
    }
    std::vector<char> t(m * m * m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c = 0; c < m; ++c)
            for (std::size_t b = 0; b < m; ++b)
                for (std::size_t d = 0; d < m; ++d) {
                    ext.values[pos[0]] = static_cast<Elem>(a);
                    ext.values[pos[1]] = static_cast<Elem>(c);
                    ext.values[pos[2]] = static_cast<Elem>(b);
                    ext.values[pos[3]] = static_cast<Elem>(d);
                    t[((a * m + c) * m + b) * m + d] = holds_at(st, ext, p.matrix);
                }
    return t;
}

std::uint64_t power(std::size_t base, std::size_t exp)
{
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

void decode(std::uint64_t code, std::size_t m, std::vector<std::size_t>& f)
{
    for (std::size_t i = 0; i < m; ++i) {
        f[i] = code % m;
        code /= m;
    }
}

bool pair_works(const std::vector<char>& t, std::size_t m, const std::vector<std::size_t>& f,
                const std::vector<std::size_t>& g)
{
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            if (!t[((a * m + f[a]) * m + b) * m + g[b]]) return false;
    return true;
}

}  // namespace

bool henkin_eval_skolem_serial(const Structure& structure, const Assignment& s, const Formula& h,
                               std::size_t max_domain)
{
    const auto p = split(h);
    const auto t = truth_table(structure, s, p, max_domain);
    const std::size_t m = structure.size();
    const auto n = power(m, m);
    std::vector<std::size_t> f(m), g(m);
    for (std::uint64_t fi = 0; fi < n; ++fi) {
        decode(fi, m, f);
        for (std::uint64_t gi = 0; gi < n; ++gi) {
            decode(gi, m, g);
            if (pair_works(t, m, f, g)) return true;
        }
    }
    return false;
}

bool henkin_eval_skolem(const Structure& structure, const Assignment& s, const Formula& h, std::size_t max_domain)
{
    const auto p = split(h);
    const auto t = truth_table(structure, s, p, max_domain);
    const std::size_t m = structure.size();
    const auto n = static_cast<std::int64_t>(power(m, m));
    std::atomic<bool> found{false};
#pragma omp parallel
    {
        std::vector<std::size_t> f(m), g(m);
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t fi = 0; fi < n; ++fi) {
            if (found.load(std::memory_order_relaxed)) continue;
            decode(static_cast<std::uint64_t>(fi), m, f);
            for (std::int64_t gi = 0; gi < n && !found.load(std::memory_order_relaxed); ++gi) {
                decode(static_cast<std::uint64_t>(gi), m, g);
                if (pair_works(t, m, f, g)) found.store(true, std::memory_order_relaxed);
            }
        }
    }
    return found.load();
}

BranchingReport check_lemma14(const Structure& structure, const Assignment& s, const Formula& h, Semantics mode,
                              std::size_t max_domain)
{
    BranchingReport r;
    r.skolem = henkin_eval_skolem(structure, s, h, max_domain);
    EvalOptions opts;
    opts.semantics = mode;
    r.compositional = evaluate(structure, Team(s.scope, {s.values}), desugar_henkin(h), opts);
    return r;
}

KeyImplication key_implication_check(const Team& team)
{
    KeyImplication k;
    k.premise = dep_holds(team, {"x", "u"}, {"v"}) && ind_holds(team, {"v"}, {"u"}, {"x"});
    k.conclusion = dep_holds(team, {"u"}, {"v"});
    return k;
}

namespace {

// Candidate `code` in base d+1 over the d*d cells (x, u); digit 0 leaves the
// cell out, digit k puts v = k-1.
std::vector<Team::Row> decode_partial(std::uint64_t code, std::size_t d)
{
    std::vector<Team::Row> rows;
    for (std::size_t cell = 0; cell < d * d; ++cell) {
        const auto digit = code % (d + 1);
        code /= d + 1;
        if (digit)
            rows.push_back({static_cast<Elem>(cell / d), static_cast<Elem>(cell % d), static_cast<Elem>(digit - 1)});
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

bool is_counterexample(const std::vector<Team::Row>& rows, bool strong)
{
    // columns: x = 0, u = 1, v = 2; dep(x u ; v) holds by construction
    const std::vector<std::size_t> none;
    const bool cond = strong ? ind_holds_columns(rows, {2}, {1}, {0}) : ind_holds_columns(rows, {2}, none, {0});
    return cond && !dep_holds_columns(rows, {1}, {2});
}

struct Best {
    std::size_t rows = std::numeric_limits<std::size_t>::max();
    std::uint64_t code = 0;
    bool better(std::size_t r, std::uint64_t c) const { return r < rows || (r == rows && c < code); }
};

CounterexampleSearch finish(std::optional<std::pair<std::size_t, std::uint64_t>> hit, std::uint64_t candidates,
                    std::size_t requested, bool strong)
{
    CounterexampleSearch out;
    out.candidates = candidates;
    if (!hit) return out;
    const auto [d, code] = *hit;
    Team t({"x", "u", "v"}, decode_partial(code, d));
    const auto st = Structure::of_size(d);
    const auto cond = strong ? "dep(x u ; v) and ind(v ; u ; x)" : "dep(x u ; v) and ind(v ;; x)";
    if (!evaluate(st, t, parse_formula(cond)) || evaluate(st, t, parse_formula("dep(u ; v)")))
        throw Error("counterexample search: candidate failed the recheck");
    out.team = std::move(t);
    out.domain = d;
    if (d < requested)
        out.note = "found over a " + std::to_string(d) +
                   "-element domain, smaller than the " + std::to_string(requested) + "-element domain requested";
    return out;
}

std::uint64_t candidate_count(std::size_t d, std::uint64_t cap)
{
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < d * d; ++i) {
        n *= d + 1;
        if (n > cap) throw CapExceeded("counterexample search: more than " + std::to_string(cap) + " candidate teams");
    }
    return n;
}

std::size_t row_count(std::uint64_t code, std::size_t d)
{
    std::size_t r = 0;
    for (std::size_t cell = 0; cell < d * d; ++cell, code /= d + 1)
        if (code % (d + 1)) ++r;
    return r;
}

}  // namespace

CounterexampleSearch find_remark_counterexample_serial(std::size_t domain_size, std::size_t max_rows, bool strong,
                                                       std::uint64_t cap)
{
    std::uint64_t seen = 0;
    for (std::size_t d = 2; d <= domain_size; ++d) {
        const auto n = candidate_count(d, cap);
        Best best;
        for (std::uint64_t code = 0; code < n; ++code) {
            const auto r = row_count(code, d);
            if (r > max_rows) continue;
            ++seen;
            if (best.better(r, code) && is_counterexample(decode_partial(code, d), strong)) best = {r, code};
        }
        if (best.rows != std::numeric_limits<std::size_t>::max())
            return finish(std::make_pair(d, best.code), seen, domain_size, strong);
    }
    return finish(std::nullopt, seen, domain_size, strong);
}

CounterexampleSearch find_remark_counterexample(std::size_t domain_size, std::size_t max_rows, bool strong,
                                                std::uint64_t cap)
{
    std::uint64_t seen = 0;
    for (std::size_t d = 2; d <= domain_size; ++d) {
        const auto n = static_cast<std::int64_t>(candidate_count(d, cap));
        Best best;
        std::uint64_t local_seen = 0;
#pragma omp parallel
        {
            Best mine;
            std::uint64_t count = 0;
#pragma omp for schedule(static) nowait
            for (std::int64_t code = 0; code < n; ++code) {
                const auto c = static_cast<std::uint64_t>(code);
                const auto r = row_count(c, d);
                if (r > max_rows) continue;
                ++count;
                if (mine.better(r, c) && is_counterexample(decode_partial(c, d), strong)) mine = {r, c};
            }
#pragma omp critical
            {
                local_seen += count;
                if (best.better(mine.rows, mine.code)) best = mine;
            }
        }
        seen += local_seen;
        if (best.rows != std::numeric_limits<std::size_t>::max())
            return finish(std::make_pair(d, best.code), seen, domain_size, strong);
    }
    return finish(std::nullopt, seen, domain_size, strong);
}

}  // namespace teamlogic
