#include <algorithm>
#include <bit>
#include <random>

#include "teamlogic/atoms.hpp"

namespace teamlogic {

PackedTruthTable::PackedTruthTable(std::size_t n, std::size_t domain_size)
    : n_(n), bits_(std::max<std::size_t>(1, std::bit_width(domain_size - 1))), N_(std::uint32_t{1} << n)
{
    if (n * bits_ > 24) throw CapExceeded("packed rows limited to 24 bits");
    expand_.resize(N_);
    for (std::uint32_t w = 0; w < N_; ++w) {
        std::uint32_t e = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (w >> v & 1) e |= ((std::uint32_t{1} << bits_) - 1) << (v * bits_);
        expand_[w] = e;
    }
    proj_.resize(N_);
    groups_.resize(std::size_t{N_} * N_);
    truth_.assign(std::size_t{N_} * N_ * N_ + std::size_t{N_} * N_, 0);
}

void PackedTruthTable::load(const std::vector<Team::Row>& rows)
{
    std::vector<std::uint32_t> packed;
    packed.reserve(rows.size());
    for (const auto& r : rows) {
        std::uint32_t p = 0;
        for (std::size_t v = 0; v < n_; ++v) p |= r[v] << (v * bits_);
        packed.push_back(p);
    }
    for (std::uint32_t w = 0; w < N_; ++w) {
        auto& pr = proj_[w];
        pr.clear();
        for (auto p : packed) pr.push_back(p & expand_[w]);
        std::sort(pr.begin(), pr.end());
        pr.erase(std::unique(pr.begin(), pr.end()), pr.end());
        // group the distinct W-projections by their X-part, for every X ⊆ W
        for (std::uint32_t x = w;; x = (x - 1) & w) {
            auto& g = groups_[std::size_t{w} * N_ + x];
            g.clear();
            std::vector<std::uint32_t> keys;
            keys.reserve(pr.size());
            for (auto p : pr) keys.push_back(p & expand_[x]);
            std::sort(keys.begin(), keys.end());
            for (auto k : keys) {
                if (!g.empty() && g.back().first == k)
                    ++g.back().second;
                else
                    g.emplace_back(k, 1);
            }
            if (x == 0) break;
        }
    }
    // Ind(Y;X;Z) holds iff inside every X-class the XYZ-patterns are all
    // combinations of the XY- and XZ-patterns.
    for (std::uint32_t y = 0; y < N_; ++y)
        for (std::uint32_t x = 0; x < N_; ++x) {
            const auto& ga = group(x | y, x);
            for (std::uint32_t z = 0; z < N_; ++z) {
                const auto& gb = group(x | z, x);
                std::uint64_t combos = 0;
                for (std::size_t i = 0, j = 0; i < ga.size() && j < gb.size();) {
                    if (ga[i].first < gb[j].first) {
                        ++i;
                    } else if (gb[j].first < ga[i].first) {
                        ++j;
                    } else {
                        combos += std::uint64_t{ga[i].second} * gb[j].second;
                        ++i;
                        ++j;
                    }
                }
                truth_[(std::size_t{y} * N_ + x) * N_ + z] = proj_[x | y | z].size() == combos;
            }
        }
    const std::size_t base = std::size_t{N_} * N_ * N_;
    for (std::uint32_t x = 0; x < N_; ++x)
        for (std::uint32_t y = 0; y < N_; ++y) truth_[base + std::size_t{x} * N_ + y] = proj_[x | y].size() == proj_[x].size();
}

namespace {

struct CompiledInstance {
    std::uint32_t p0, p1, c;
    std::uint8_t arity;
};

struct Sweep {
    std::vector<RuleInstance> instances;
    std::vector<CompiledInstance> compiled;

    Sweep(std::size_t n, std::size_t d, const std::vector<Rule>& rules) : instances(rule_instances(n, rules))
    {
        PackedTruthTable t(n, d);
        compiled.reserve(instances.size());
        for (const auto& ins : instances) {
            CompiledInstance c{0, 0, static_cast<std::uint32_t>(t.index(ins.conclusion)),
                               static_cast<std::uint8_t>(ins.premises.size())};
            if (ins.premises.size() > 0) c.p0 = static_cast<std::uint32_t>(t.index(ins.premises[0]));
            if (ins.premises.size() > 1) c.p1 = static_cast<std::uint32_t>(t.index(ins.premises[1]));
            compiled.push_back(c);
        }
    }

    /// Index of the first violated instance, or -1; adds violations to `count`.
    std::int64_t check(const std::vector<std::uint8_t>& truth, std::uint64_t& count) const
    {
        std::int64_t first = -1;
        for (std::size_t i = 0; i < compiled.size(); ++i) {
            const auto& c = compiled[i];
            if (truth[c.c]) continue;
            if (c.arity > 0 && !truth[c.p0]) continue;
            if (c.arity > 1 && !truth[c.p1]) continue;
            ++count;
            if (first < 0) first = static_cast<std::int64_t>(i);
        }
        return first;
    }
};

void record(SoundnessReport& rep, const Sweep& sw, std::int64_t first, const Team& team)
{
    if (first < 0) return;
    ++rep.violations_by_rule[sw.instances[first].rule];
    if (!rep.witness) {
        rep.witness = team;
        rep.witness_instance = sw.instances[first];
    }
}

std::vector<std::string> var_names(std::size_t n)
{
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("v" + std::to_string(i));
    return v;
}

std::vector<Team::Row> all_rows(std::size_t n, std::size_t d)
{
    std::vector<Team::Row> out;
    Team::Row r(n, 0);
    for (;;) {
        out.push_back(r);
        std::size_t i = 0;
        while (i < n && ++r[i] == d) r[i++] = 0;
        if (i == n) break;
    }
    return out;
}

}  // namespace

SoundnessReport soundness_exhaustive(std::size_t n, std::size_t domain_size, std::size_t max_rows,
                                     const std::vector<Rule>& rules, bool parallel)
{
    const Sweep sw(n, domain_size, rules);
    const auto candidates = all_rows(n, domain_size);
    if (candidates.size() > 24) throw CapExceeded("soundness_exhaustive: more than 24 candidate rows");
    const std::uint64_t subsets = std::uint64_t{1} << candidates.size();
    const auto names = var_names(n);

    SoundnessReport rep;
    rep.instances = sw.instances.size();
    std::uint64_t teams = 0, violations = 0;
#pragma omp parallel if (parallel) reduction(+ : teams, violations)
    {
        PackedTruthTable table(n, domain_size);
        std::vector<Team::Row> rows;
#pragma omp for schedule(dynamic, 256)
        for (std::int64_t m = 0; m < static_cast<std::int64_t>(subsets); ++m) {
            if (static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(m))) > max_rows) continue;
            rows.clear();
            for (std::size_t i = 0; i < candidates.size(); ++i)
                if (m >> i & 1) rows.push_back(candidates[i]);
            table.load(rows);
            ++teams;
            std::uint64_t v = 0;
            const auto first = sw.check(table.truth(), v);
            if (first >= 0) {
                violations += v;
#pragma omp critical
                record(rep, sw, first, Team(names, rows));
            }
        }
    }
    rep.teams = teams;
    rep.violations = violations;
    return rep;
}

SoundnessReport soundness_random(std::size_t n, std::size_t domain_size, std::size_t count, std::size_t max_rows,
                                 std::uint64_t seed, const std::vector<Rule>& rules, bool parallel)
{
    const Sweep sw(n, domain_size, rules);
    const auto names = var_names(n);
    SoundnessReport rep;
    rep.instances = sw.instances.size();
    std::uint64_t teams = 0, violations = 0;
#pragma omp parallel if (parallel) reduction(+ : teams, violations)
    {
        PackedTruthTable table(n, domain_size);
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
            // per-team seeding keeps the sample independent of the thread count
            std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(i + 1)));
            std::uniform_int_distribution<std::size_t> size(1, max_rows);
            std::uniform_int_distribution<Elem> val(0, static_cast<Elem>(domain_size - 1));
            std::vector<Team::Row> rows(size(rng), Team::Row(n));
            for (auto& r : rows)
                for (auto& x : r) x = val(rng);
            std::sort(rows.begin(), rows.end());
            rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
            table.load(rows);
            ++teams;
            std::uint64_t v = 0;
            const auto first = sw.check(table.truth(), v);
            if (first >= 0) {
                violations += v;
#pragma omp critical
                record(rep, sw, first, Team(names, rows));
            }
        }
    }
    rep.teams = teams;
    rep.violations = violations;
    return rep;
}

SoundnessReport soundness_reference(const std::vector<Team>& teams, std::size_t n, const std::vector<Rule>& rules)
{
    const auto names = var_names(n);
    const auto instances = rule_instances(n, rules);
    SoundnessReport rep;
    rep.instances = instances.size();
    for (const auto& team : teams) {
        if (team.scope() != names) throw ScopeError("soundness_reference: teams must range over v0..v(n-1)");
        ++rep.teams;
        std::map<MaskAtom, bool> cache;
        auto eval = [&](const MaskAtom& m) {
            auto it = cache.find(m);
            if (it != cache.end()) return it->second;
            return cache[m] = holds(team, from_mask(m, names));
        };
        bool recorded = false;
        for (const auto& ins : instances) {
            if (eval(ins.conclusion)) continue;
            if (!std::all_of(ins.premises.begin(), ins.premises.end(), eval)) continue;
            ++rep.violations;
            if (!recorded) {
                ++rep.violations_by_rule[ins.rule];
                recorded = true;
                if (!rep.witness) {
                    rep.witness = team;
                    rep.witness_instance = ins;
                }
            }
        }
    }
    return rep;
}

}  // namespace teamlogic
