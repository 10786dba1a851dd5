#include "teamlogic/sat.hpp"

#include <algorithm>
#include <cstdlib>

#include "teamlogic/core.hpp"

namespace teamlogic {

namespace {

double luby(double y, int x)
{
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    double r = 1;
    for (int i = 0; i < seq; ++i) r *= y;
    return r;
}

}  // namespace

SatSolver::Lit SatSolver::to_lit(int dimacs)
{
    const int v = std::abs(dimacs) - 1;
    return static_cast<Lit>(2 * v + (dimacs < 0 ? 1 : 0));
}

std::int8_t SatSolver::lit_value(Lit l) const
{
    const auto a = assign_[l >> 1];
    if (a < 0) return -1;
    return static_cast<std::int8_t>((l & 1) ? 1 - a : a);
}

int SatSolver::new_var()
{
    const int v = num_vars();
    assign_.push_back(-1);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0.0);
    phase_.push_back(0);
    seen_.push_back(0);
    heap_pos_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(v);
    return v;
}

void SatSolver::attach(std::uint32_t cid)
{
    const auto& c = clauses_[cid].lits;
    watches_[c[0] ^ 1].push_back(cid);
    watches_[c[1] ^ 1].push_back(cid);
}

void SatSolver::add_clause(const std::vector<int>& dimacs)
{
    if (unsat_) return;
    std::vector<Lit> lits;
    for (int d : dimacs) {
        if (d == 0 || std::abs(d) > num_vars()) throw Error("SAT: literal out of range");
        lits.push_back(to_lit(d));
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i)
        if (lits[i] == (lits[i - 1] ^ 1)) return;  // tautology
    // clauses are only added at level 0
    std::vector<Lit> kept;
    for (Lit l : lits) {
        const auto v = lit_value(l);
        if (v == 1) return;
        if (v == -1) kept.push_back(l);
    }
    if (kept.empty()) {
        unsat_ = true;
        return;
    }
    if (kept.size() == 1) {
        enqueue(kept[0], -1);
        if (propagate() >= 0) unsat_ = true;
        return;
    }
    clauses_.push_back({std::move(kept)});
    attach(static_cast<std::uint32_t>(clauses_.size() - 1));
}

void SatSolver::enqueue(Lit l, std::int64_t reason)
{
    const int v = static_cast<int>(l >> 1);
    assign_[v] = (l & 1) ? 0 : 1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
}

std::int64_t SatSolver::propagate()
{
    while (qhead_ < trail_.size()) {
        const Lit p = trail_[qhead_++];  // p became true; clauses watching ¬p ... stored under p
        auto& ws = watches_[p];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            const auto cid = ws[i++];
            auto& c = clauses_[cid].lits;
            const Lit false_lit = p ^ 1;
            if (c[0] == false_lit) std::swap(c[0], c[1]);
            if (lit_value(c[0]) == 1) {
                ws[j++] = cid;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (lit_value(c[k]) != 0) {
                    std::swap(c[1], c[k]);
                    watches_[c[1] ^ 1].push_back(cid);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = cid;
            if (lit_value(c[0]) == 0) {
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return cid;
            }
            enqueue(c[0], cid);
        }
        ws.resize(j);
    }
    return -1;
}

void SatSolver::bump(int var)
{
    activity_[var] += var_inc_;
    if (activity_[var] > 1e100) {
        for (auto& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[var] >= 0) heap_up(heap_pos_[var]);
}

void SatSolver::analyze(std::int64_t confl, std::vector<Lit>& learnt, int& back_level)
{
    learnt.assign(1, 0);
    int pending = 0;
    Lit p = 0;
    bool first = true;
    std::size_t idx = trail_.size();
    std::vector<int> touched;
    for (;;) {
        const auto& c = clauses_[confl].lits;
        for (std::size_t k = first ? 0 : 1; k < c.size(); ++k) {
            const Lit q = c[k];
            const int v = static_cast<int>(q >> 1);
            if (seen_[v] || level_[v] == 0) continue;
            seen_[v] = 1;
            touched.push_back(v);
            bump(v);
            if (level_[v] >= decision_level())
                ++pending;
            else
                learnt.push_back(q);
        }
        first = false;
        do {
            p = trail_[--idx];
        } while (!seen_[p >> 1]);
        confl = reason_[p >> 1];
        seen_[p >> 1] = 0;
        if (--pending == 0) break;
        // reason clauses keep the implied literal at position 0
        auto& rc = clauses_[confl].lits;
        if ((rc[0] >> 1) != (p >> 1))
            for (std::size_t k = 1; k < rc.size(); ++k)
                if ((rc[k] >> 1) == (p >> 1)) {
                    std::swap(rc[0], rc[k]);
                    break;
                }
    }
    learnt[0] = p ^ 1;
    for (int v : touched) seen_[v] = 0;
    back_level = 0;
    std::size_t max_i = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
        const int lv = level_[learnt[k] >> 1];
        if (lv > back_level) {
            back_level = lv;
            max_i = k;
        }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
    var_inc_ /= 0.95;
}

void SatSolver::backtrack(int level)
{
    if (decision_level() <= level) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
        const int v = static_cast<int>(trail_[i] >> 1);
        phase_[v] = static_cast<std::int8_t>(assign_[v]);
        assign_[v] = -1;
        reason_[v] = -1;
        if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
}

void SatSolver::heap_insert(int var)
{
    heap_pos_[var] = static_cast<int>(heap_.size());
    heap_.push_back(var);
    heap_up(heap_pos_[var]);
}

void SatSolver::heap_up(int i)
{
    const int v = heap_[i];
    while (i > 0) {
        const int parent = (i - 1) / 2;
        if (activity_[heap_[parent]] >= activity_[v]) break;
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i]] = i;
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
}

void SatSolver::heap_down(int i)
{
    const int v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
        int child = 2 * i + 1;
        if (child >= n) break;
        if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
        if (activity_[heap_[child]] <= activity_[v]) break;
        heap_[i] = heap_[child];
        heap_pos_[heap_[i]] = i;
        i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
}

int SatSolver::heap_pop()
{
    const int top = heap_[0];
    heap_pos_[top] = -1;
    const int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[last] = 0;
        heap_down(0);
    }
    return top;
}

bool SatSolver::solve(std::uint64_t conflict_budget)
{
    if (unsat_) return false;
    if (propagate() >= 0) {
        unsat_ = true;
        return false;
    }
    std::vector<Lit> learnt;
    int restart = 0;
    std::uint64_t budget_here = static_cast<std::uint64_t>(100 * luby(2, restart));
    std::uint64_t since_restart = 0;
    for (;;) {
        const auto confl = propagate();
        if (confl >= 0) {
            ++conflicts_;
            ++since_restart;
            if (conflicts_ > conflict_budget) throw CapExceeded("SAT: conflict budget exhausted");
            if (decision_level() == 0) {
                unsat_ = true;
                return false;
            }
            int back = 0;
            analyze(confl, learnt, back);
            backtrack(back);
            if (learnt.size() == 1) {
                enqueue(learnt[0], -1);
            } else {
                clauses_.push_back({learnt});
                const auto cid = static_cast<std::uint32_t>(clauses_.size() - 1);
                attach(cid);
                enqueue(learnt[0], cid);
            }
            continue;
        }
        if (since_restart >= budget_here) {
            backtrack(0);
            since_restart = 0;
            budget_here = static_cast<std::uint64_t>(100 * luby(2, ++restart));
        }
        int next = -1;
        while (!heap_.empty()) {
            const int v = heap_pop();
            if (assign_[v] < 0) {
                next = v;
                break;
            }
        }
        if (next < 0) return true;
        trail_lim_.push_back(trail_.size());
        enqueue(static_cast<Lit>(2 * next + (phase_[next] == 1 ? 0 : 1)), -1);
    }
}

}  // namespace teamlogic
