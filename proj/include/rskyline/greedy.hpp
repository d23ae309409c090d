#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "rskyline/stats.hpp"

// Max-coverage selection of k candidates from materialized influence sets:
// the k-stage greedy (1 - 1/e guarantee) and an exhaustive optimum used as
// its oracle on small inputs.

namespace rskyline {

struct CandidateProfile {
    PointId id = -1;
    InfluenceSet influence;  // sorted customer ids
};

struct Selection {
    std::vector<PointId> chosen;  // in pick order
    std::uint64_t joint_score = 0;
};

inline std::uint64_t joint_influence_score(const std::vector<CandidateProfile>& profiles) {
    std::unordered_set<PointId> u;
    for (const CandidateProfile& p : profiles) u.insert(p.influence.begin(), p.influence.end());
    return u.size();
}

// Greedy pick of the candidate with the largest marginal coverage, k times.
// Ties go to the smallest candidate id.
inline Selection kgcs(const std::vector<CandidateProfile>& profiles, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > profiles.size())
        throw std::invalid_argument("k must be between 1 and the number of candidates");
    std::vector<std::size_t> order(profiles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return profiles[a].id < profiles[b].id; });

    Selection sel;
    std::unordered_set<PointId> covered;
    std::vector<bool> taken(profiles.size(), false);
    for (int round = 0; round < k; ++round) {
        std::size_t best = profiles.size();
        std::uint64_t best_total = 0;
        for (std::size_t idx : order) {
            if (taken[idx]) continue;
            std::uint64_t total = covered.size();
            for (PointId c : profiles[idx].influence) {
                if (!covered.count(c)) ++total;
            }
            if (best == profiles.size() || total > best_total) {
                best = idx;
                best_total = total;
            }
        }
        taken[best] = true;
        covered.insert(profiles[best].influence.begin(), profiles[best].influence.end());
        sel.chosen.push_back(profiles[best].id);
    }
    sel.joint_score = covered.size();
    return sel;
}

inline std::uint64_t binomial_guarded(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > cap) return cap + 1;
    }
    return r;
}

// Exact optimum by enumerating all k-subsets; refuses combinatorially large
// inputs.  Among ties, returns the lexicographically smallest id-sorted
// subset.
inline Selection exhaustive_opt(const std::vector<CandidateProfile>& profiles, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > profiles.size())
        throw std::invalid_argument("k must be between 1 and the number of candidates");
    if (binomial_guarded(profiles.size(), static_cast<std::uint64_t>(k), 1000000) > 1000000)
        throw std::invalid_argument("too many subsets to enumerate; use kgcs instead");

    std::vector<std::size_t> order(profiles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return profiles[a].id < profiles[b].id; });

    const std::size_t n = profiles.size();
    std::vector<std::size_t> pick(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;

    Selection best;
    bool first = true;
    while (true) {
        std::unordered_set<PointId> u;
        for (std::size_t i : pick) {
            const InfluenceSet& s = profiles[order[i]].influence;
            u.insert(s.begin(), s.end());
        }
        if (first || u.size() > best.joint_score) {
            first = false;
            best.joint_score = u.size();
            best.chosen.clear();
            for (std::size_t i : pick) best.chosen.push_back(profiles[order[i]].id);
        }
        // next combination in lexicographic order over id-sorted candidates
        std::size_t j = pick.size();
        while (j > 0 && pick[j - 1] == n - pick.size() + j - 1) --j;
        if (j == 0) break;
        ++pick[j - 1];
        for (std::size_t l = j; l < pick.size(); ++l) pick[l] = pick[l - 1] + 1;
    }
    return best;
}

}  // namespace rskyline
