#include <algorithm>
#include <random>

#include "teamlogic/atoms.hpp"
#include "teamlogic/teamsem.hpp"

namespace teamlogic {

namespace {

struct CompiledAtom {
    AtomKind kind;
    std::vector<std::size_t> a, b, c;
};

CompiledAtom compile(const AtomStatement& atom, const std::vector<std::string>& universe)
{
    auto cols = [&](const VarTuple& t) {
        std::vector<std::size_t> out;
        for (const auto& v : t)
            out.push_back(static_cast<std::size_t>(std::lower_bound(universe.begin(), universe.end(), v) -
                                                   universe.begin()));
        return out;
    };
    return {atom.kind, cols(atom.a), cols(atom.b), cols(atom.c)};
}

bool check(const CompiledAtom& a, const std::vector<Team::Row>& rows)
{
    return a.kind == AtomKind::Dep ? dep_holds_columns(rows, a.a, a.b) : ind_holds_columns(rows, a.a, a.b, a.c);
}

struct Problem {
    std::vector<CompiledAtom> premises;
    CompiledAtom goal;

    bool countermodel(const std::vector<Team::Row>& rows) const
    {
        if (check(goal, rows)) return false;
        for (const auto& p : premises)
            if (!check(p, rows)) return false;
        return true;
    }
};

/// Row sequences of exactly `k` distinct rows in which every column is a
/// restricted growth string (values appear in order 0, 1, 2, ...). Every team
/// is equal to one of these up to renaming values inside each column, and the
/// atoms only compare values within a column.
class RgsSearch {
public:
    RgsSearch(const Problem& prob, std::size_t n, std::size_t d, std::size_t k)
        : prob_(prob), n_(n), d_(d), k_(k)
    {
    }

    /// Searches the subtree whose second row is the `task`-th 0/1 pattern.
    std::optional<std::vector<Team::Row>> run_task(std::uint32_t task, std::uint64_t& checked)
    {
        rows_.assign(1, Team::Row(n_, 0));
        max_.assign(n_, 0);
        if (k_ == 1) {
            ++checked;
            if (prob_.countermodel(rows_)) return rows_;
            return std::nullopt;
        }
        Team::Row second(n_);
        for (std::size_t j = 0; j < n_; ++j) second[j] = (task >> j) & 1;
        if (d_ < 2 && task != 0) return std::nullopt;
        if (task == 0) return std::nullopt;  // equal to the first row
        rows_.push_back(second);
        for (std::size_t j = 0; j < n_; ++j) max_[j] = second[j];
        found_.reset();
        checked_ = &checked;
        dfs();
        return found_;
    }

    std::uint32_t tasks() const { return k_ == 1 ? 1u : (std::uint32_t{1} << n_); }

private:
    const Problem& prob_;
    std::size_t n_, d_, k_;
    std::vector<Team::Row> rows_;
    std::vector<Elem> max_;
    std::optional<std::vector<Team::Row>> found_;
    std::uint64_t* checked_ = nullptr;

    bool dfs()
    {
        if (rows_.size() == k_) {
            ++*checked_;
            if (prob_.countermodel(rows_)) {
                found_ = rows_;
                return true;
            }
            return false;
        }
        Team::Row r(n_, 0);
        return fill(r, 0);
    }

    bool fill(Team::Row& r, std::size_t j)
    {
        if (j == n_) {
            if (std::find(rows_.begin(), rows_.end(), r) != rows_.end()) return false;
            auto saved = max_;
            for (std::size_t i = 0; i < n_; ++i) max_[i] = std::max(max_[i], r[i]);
            rows_.push_back(r);
            const bool hit = dfs();
            rows_.pop_back();
            max_ = std::move(saved);
            return hit;
        }
        const Elem hi = std::min<Elem>(max_[j] + 1, static_cast<Elem>(d_ - 1));
        for (Elem v = 0; v <= hi; ++v) {
            r[j] = v;
            if (fill(r, j + 1)) return true;
        }
        return false;
    }
};

/// Number of restricted growth strings of length k over d symbols.
std::uint64_t rgs_count(std::size_t k, std::size_t d)
{
    // Stirling numbers of the second kind, summed over at most d blocks.
    std::vector<std::vector<std::uint64_t>> S(k + 1, std::vector<std::uint64_t>(k + 1, 0));
    S[0][0] = 1;
    for (std::size_t i = 1; i <= k; ++i)
        for (std::size_t j = 1; j <= i; ++j) S[i][j] = S[i - 1][j - 1] + j * S[i - 1][j];
    std::uint64_t total = 0;
    for (std::size_t j = 0; j <= std::min(k, d); ++j) total += S[k][j];
    return total;
}

std::uint64_t sequence_count(std::size_t n, std::size_t d, std::size_t max_rows)
{
    std::uint64_t total = 0;
    for (std::size_t k = 1; k <= max_rows; ++k) {
        std::uint64_t per = 1;
        const auto r = rgs_count(k, d);
        for (std::size_t j = 0; j < n; ++j) {
            if (per > UINT64_MAX / std::max<std::uint64_t>(r, 1)) return UINT64_MAX;
            per *= r;
        }
        total += per;
        if (total < per) return UINT64_MAX;
    }
    return total;
}

bool only_deps(const std::vector<AtomStatement>& T, const AtomStatement& g)
{
    return g.kind == AtomKind::Dep &&
           std::all_of(T.begin(), T.end(), [](const auto& t) { return t.kind == AtomKind::Dep; });
}

bool only_simple_ind(const std::vector<AtomStatement>& T, const AtomStatement& g)
{
    return g.is_unconditional_simple() &&
           std::all_of(T.begin(), T.end(), [](const auto& t) { return t.is_unconditional_simple(); });
}

}  // namespace

EntailmentVerdict semantic_entails(const std::vector<AtomStatement>& T, const AtomStatement& goal,
                                   const EntailConfig& cfg)
{
    const auto universe = universe_of(T, &goal);
    const std::size_t n = universe.size();
    if (n > 16) throw CapExceeded("semantic_entails: more than 16 variables");
    Problem prob;
    for (const auto& t : T) prob.premises.push_back(compile(t, universe));
    prob.goal = compile(goal, universe);

    auto sizes = cfg.domain_sizes;
    if (sizes.empty()) sizes = {2, n + 2};
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    EntailmentVerdict v;
    std::string desc;
    bool exhaustive_two = false;
    for (std::size_t d : sizes) {
        if (d == 0) throw Error("domain size must be positive");
        const auto total = sequence_count(n, d, cfg.max_rows);
        if (!desc.empty()) desc += "; ";
        if (total <= cfg.cap) {
            desc += "domain " + std::to_string(d) + ": all teams with <= " + std::to_string(cfg.max_rows) +
                    " rows up to value renaming";
            exhaustive_two |= d >= 2 && cfg.max_rows >= 2;
            for (std::size_t k = 1; k <= cfg.max_rows && !v.countermodel; ++k) {
                RgsSearch probe(prob, n, d, k);
                const auto tasks = probe.tasks();
                std::vector<std::optional<std::vector<Team::Row>>> hits(tasks);
                std::uint64_t checked = 0;
                if (cfg.parallel) {
#pragma omp parallel for schedule(dynamic) reduction(+ : checked)
                    for (std::int64_t t = 0; t < static_cast<std::int64_t>(tasks); ++t) {
                        RgsSearch s(prob, n, d, k);
                        hits[t] = s.run_task(static_cast<std::uint32_t>(t), checked);
                    }
                } else {
                    RgsSearch s(prob, n, d, k);
                    for (std::uint32_t t = 0; t < tasks; ++t) {
                        hits[t] = s.run_task(t, checked);
                        if (hits[t]) break;
                    }
                }
                v.teams_checked += checked;
                for (auto& h : hits) {
                    if (h) {
                        v.countermodel = Team(universe, std::move(*h));
                        v.countermodel_domain = d;
                        break;
                    }
                }
            }
        } else {
            desc += "domain " + std::to_string(d) + ": " + std::to_string(cfg.samples) + " random teams";
            std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ull + d);
            std::uniform_int_distribution<Elem> val(0, static_cast<Elem>(d - 1));
            std::uniform_int_distribution<std::size_t> size(1, std::max<std::size_t>(cfg.max_rows, 8));
            for (std::size_t i = 0; i < cfg.samples && !v.countermodel; ++i) {
                std::vector<Team::Row> rows(size(rng), Team::Row(n));
                for (auto& r : rows)
                    for (auto& x : r) x = val(rng);
                std::sort(rows.begin(), rows.end());
                rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
                ++v.teams_checked;
                if (prob.countermodel(rows)) {
                    v.countermodel = Team(universe, std::move(rows));
                    v.countermodel_domain = d;
                }
            }
        }
        if (v.countermodel) break;
    }
    v.bound = desc;

    if (v.countermodel) {
        v.entailed = false;
        v.exact = true;
        for (const auto& t : T)
            if (!holds(*v.countermodel, t)) throw Error("internal: countermodel violates " + t.to_string());
        if (holds(*v.countermodel, goal)) throw Error("internal: countermodel satisfies the goal");
        return v;
    }
    v.entailed = true;
    // Two-row countermodels exist whenever these fragments fail to entail.
    v.exact = exhaustive_two && (only_deps(T, goal) || only_simple_ind(T, goal));
    return v;
}

}  // namespace teamlogic
