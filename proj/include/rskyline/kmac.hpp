#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rskyline/brs.hpp"
#include "rskyline/greedy.hpp"
#include "rskyline/hilbert.hpp"
#include "rskyline/rsl.hpp"

// Multi-candidate evaluation: per-candidate engines plus greedy selection.
// The batch evaluator interleaves the per-candidate state machines so a node
// wanted by several candidates is fetched once; the branch-and-bound
// evaluator additionally keeps influence-score bounds per candidate and
// drops candidates that can no longer enter the optimum.

namespace rskyline {

enum class SingleEngine { brs, rsl };

struct Batch {
    std::vector<PointId> ids;  // contiguous along the Hilbert order
};

struct KmacResult {
    Selection selection;
    std::vector<CandidateProfile> profiles;      // exact influence sets, input order (bb: finished only)
    std::vector<QueryStats> per_candidate;       // aligned with profiles
    IoCounter physical_io;                       // deduplicated reads for shared-read engines
    std::uint64_t dominance_checks = 0;
    std::vector<PointId> discarded;              // bb only
};

inline std::vector<Batch> hilbert_partition(const std::vector<Point>& candidates, int batch_size) {
    if (batch_size < 1) throw std::invalid_argument("batch size must be positive");
    std::vector<Batch> out;
    if (candidates.empty()) return out;
    const int d = candidates.front().dim();
    std::vector<double> lo(static_cast<std::size_t>(d), std::numeric_limits<double>::infinity());
    std::vector<double> hi(static_cast<std::size_t>(d), -std::numeric_limits<double>::infinity());
    for (const Point& p : candidates) {
        for (int i = 0; i < d; ++i) {
            lo[static_cast<std::size_t>(i)] = std::min(lo[static_cast<std::size_t>(i)], p[i]);
            hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)], p[i]);
        }
    }
    std::vector<std::pair<HilbertKey, PointId>> keyed;
    keyed.reserve(candidates.size());
    for (const Point& p : candidates) keyed.emplace_back(hilbert_key(p, lo, hi), p.id);
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; i < keyed.size(); i += static_cast<std::size_t>(batch_size)) {
        Batch b;
        for (std::size_t j = i; j < std::min(i + static_cast<std::size_t>(batch_size), keyed.size()); ++j)
            b.ids.push_back(keyed[j].second);
        out.push_back(std::move(b));
    }
    return out;
}

struct BatchQueryResult {
    InfluenceSet influence;
    QueryStats stats;
    std::vector<std::pair<int, NodeId>> read_log;
};

// Round-robin batch execution: one customer pop per turn in ascending
// candidate-id order, physical node reads deduplicated in the ledger.  Every
// candidate runs its exact standalone schedule, so per-candidate results and
// logical stats match a solo run and the ledger holds the union of the solo
// read sets.
inline std::vector<BatchQueryResult> batch_rsa(const std::vector<Point>& batch_candidates, const RTree& tp,
                                               const RTree& tc, SharedReadLedger& ledger,
                                               const std::vector<RslEvents>* per_candidate_events = nullptr) {
    if (batch_candidates.empty()) throw std::invalid_argument("batch must not be empty");
    std::vector<std::size_t> order(batch_candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return batch_candidates[a].id < batch_candidates[b].id;
    });

    std::vector<RslState> states;
    states.reserve(batch_candidates.size());
    for (std::size_t i = 0; i < batch_candidates.size(); ++i) {
        RslEvents ev = per_candidate_events ? (*per_candidate_events)[i] : RslEvents{};
        states.emplace_back(batch_candidates[i], tp, tc, std::move(ev), &ledger);
    }

    bool any = true;
    while (any) {
        any = false;
        for (std::size_t idx : order) {
            if (states[idx].step()) any = true;
        }
    }

    std::vector<BatchQueryResult> out;
    out.reserve(states.size());
    for (RslState& st : states) out.push_back({st.result(), st.stats(), st.read_log()});
    return out;
}

// Per-candidate single-query engine, then greedy selection.
inline KmacResult basic_kmac(const std::vector<Point>& candidates, const RTree& tp, const RTree& tc, int k,
                             SingleEngine engine) {
    if (candidates.empty() || k < 1 || static_cast<std::size_t>(k) > candidates.size())
        throw std::invalid_argument("need at least k candidates");
    KmacResult res;
    for (const Point& q : candidates) {
        auto [set, stats] = engine == SingleEngine::rsl ? rsl(q, tp, tc) : brs(q, tp, tc);
        res.profiles.push_back({q.id, std::move(set)});
        res.physical_io.reads_product += stats.io.reads_product;
        res.physical_io.reads_customer += stats.io.reads_customer;
        res.dominance_checks += stats.dominance_checks;
        res.per_candidate.push_back(std::move(stats));
    }
    res.selection = kgcs(res.profiles, k);
    return res;
}

// Hilbert-partitioned batched evaluation over all candidates, then greedy
// selection.  physical_io sums the per-batch ledgers.
inline KmacResult batch_kmac(const std::vector<Point>& candidates, const RTree& tp, const RTree& tc, int k,
                             int batch_size) {
    if (candidates.empty() || k < 1 || static_cast<std::size_t>(k) > candidates.size())
        throw std::invalid_argument("need at least k candidates");
    KmacResult res;
    std::vector<CandidateProfile> profiles;
    std::vector<QueryStats> stats_by_id;
    std::vector<std::pair<PointId, std::size_t>> slot;  // candidate id -> profile slot

    for (const Batch& b : hilbert_partition(candidates, batch_size)) {
        std::vector<Point> member_points;
        for (PointId id : b.ids) {
            auto it = std::find_if(candidates.begin(), candidates.end(), [&](const Point& p) { return p.id == id; });
            member_points.push_back(*it);
        }
        SharedReadLedger ledger;
        auto results = batch_rsa(member_points, tp, tc, ledger);
        for (const auto& [role, id] : ledger.seen) {
            if (role == static_cast<int>(TreeRole::product)) ++res.physical_io.reads_product;
            else ++res.physical_io.reads_customer;
        }
        for (std::size_t i = 0; i < member_points.size(); ++i) {
            slot.emplace_back(member_points[i].id, profiles.size());
            profiles.push_back({member_points[i].id, std::move(results[i].influence)});
            res.dominance_checks += results[i].stats.dominance_checks;
            stats_by_id.push_back(std::move(results[i].stats));
        }
    }
    // report in input order
    for (const Point& q : candidates) {
        for (const auto& [id, at] : slot) {
            if (id == q.id) {
                res.profiles.push_back(profiles[at]);
                res.per_candidate.push_back(stats_by_id[at]);
                break;
            }
        }
    }
    res.selection = kgcs(res.profiles, k);
    return res;
}

struct BbAudit {
    // invoked for every candidate after each refinement step
    std::function<void(PointId, std::uint64_t is_lower, std::uint64_t is_upper)> on_bounds;
    std::function<void(PointId)> on_discard;
};

// Branch-and-bound evaluation over an aggregate customer index.  All
// candidates run as one shared-read batch; the candidate with the highest
// influence-score upper bound advances one customer entry at a time, pruned
// customer subtrees lower the bound by their stored counts without being
// read, and a candidate whose optimistic contribution cannot beat the
// current greedy lower bound is dropped.
inline KmacResult bb_kmac(const std::vector<Point>& candidates, const RTree& tp, const ARTree& tc_agg, int k,
                          const BbAudit& audit = {}) {
    if (candidates.empty() || k < 1 || static_cast<std::size_t>(k) > candidates.size())
        throw std::invalid_argument("need at least k candidates");
    const std::size_t n = candidates.size();
    const std::uint64_t total_customers = tc_agg.size();

    struct Track {
        std::uint64_t removed = 0;  // confirmed-out points plus pruned subtree counts
        std::uint64_t confirmed = 0;
    };
    std::vector<Track> track(n);

    SharedReadLedger ledger;
    std::vector<RslState> states;
    states.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Track* t = &track[i];
        RslEvents ev;
        ev.on_out = [t](PointId) { ++t->removed; };
        ev.on_prune_subtree = [t](NodeId, std::uint32_t count) { t->removed += count; };
        ev.on_confirm = [t](PointId) { ++t->confirmed; };
        states.emplace_back(candidates[i], tp, tc_agg, std::move(ev), &ledger);
    }

    auto is_upper = [&](std::size_t i) { return total_customers - track[i].removed; };
    auto is_lower = [&](std::size_t i) { return track[i].confirmed; };

    std::vector<bool> discarded(n, false);
    std::vector<PointId> discarded_ids;

    auto confirmed_profiles = [&]() {
        std::vector<CandidateProfile> ps;
        ps.reserve(n);
        for (std::size_t i = 0; i < n; ++i) ps.push_back({candidates[i].id, states[i].result()});
        return ps;
    };

    std::uint64_t lb = kgcs(confirmed_profiles(), k).joint_score;

    while (true) {
        // next: unfinished, not discarded, largest upper bound, smallest id
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (discarded[i] || states[i].finished()) continue;
            if (pick == n || is_upper(i) > is_upper(pick) ||
                (is_upper(i) == is_upper(pick) && candidates[i].id < candidates[pick].id))
                pick = i;
        }
        if (pick == n) break;
        const std::uint64_t confirmed_before = track[pick].confirmed;
        states[pick].step();

        if (track[pick].confirmed != confirmed_before) {
            if (k == 1) lb = std::max(lb, track[pick].confirmed);
            else lb = std::max(lb, kgcs(confirmed_profiles(), k).joint_score);
        }

        if (audit.on_bounds) {
            for (std::size_t i = 0; i < n; ++i) audit.on_bounds(candidates[i].id, is_lower(i), is_upper(i));
        }

        // k largest upper bounds over non-discarded candidates; k is small,
        // an insertion pass keeps the step linear in |Q|
        std::vector<std::pair<std::uint64_t, std::size_t>> top;
        for (std::size_t i = 0; i < n; ++i) {
            if (discarded[i]) continue;
            const std::uint64_t v = is_upper(i);
            auto at = top.begin();
            while (at != top.end() && at->first >= v) ++at;
            if (top.size() < static_cast<std::size_t>(k) || at != top.end()) {
                top.insert(at, {v, i});
                if (top.size() > static_cast<std::size_t>(k)) top.pop_back();
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            if (discarded[i] || states[i].finished()) continue;
            std::uint64_t others = 0;
            int taken = 0;
            for (const auto& [val, idx] : top) {
                if (taken == k - 1) break;
                if (idx == i) continue;
                others += val;
                ++taken;
            }
            if (is_upper(i) + others < lb) {
                discarded[i] = true;
                discarded_ids.push_back(candidates[i].id);
                if (audit.on_discard) audit.on_discard(candidates[i].id);
            }
        }
    }

    KmacResult res;
    for (std::size_t i = 0; i < n; ++i) {
        if (discarded[i]) continue;
        res.profiles.push_back({candidates[i].id, states[i].result()});
        res.per_candidate.push_back(states[i].stats());
        res.dominance_checks += states[i].stats().dominance_checks;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (discarded[i]) res.dominance_checks += states[i].stats().dominance_checks;
    }
    for (const auto& [role, id] : ledger.seen) {
        if (role == static_cast<int>(TreeRole::product)) ++res.physical_io.reads_product;
        else ++res.physical_io.reads_customer;
    }
    res.discarded = std::move(discarded_ids);
    // a discarded candidate provably sits outside every optimum, so at
    // least k candidates always finish
    res.selection = kgcs(res.profiles, k);
    return res;
}

}  // namespace rskyline
