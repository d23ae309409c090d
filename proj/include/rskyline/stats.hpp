#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "rskyline/rtree.hpp"

namespace rskyline {

// Customer ids forming RSKY(q); kept sorted, no duplicates.
using InfluenceSet = std::vector<PointId>;

inline void insert_id(InfluenceSet& s, PointId id) {
    auto it = std::lower_bound(s.begin(), s.end(), id);
    if (it == s.end() || *it != id) s.insert(it, id);
}

inline bool contains_id(const InfluenceSet& s, PointId id) {
    return std::binary_search(s.begin(), s.end(), id);
}

// Priority key for queue entries.  Level 0 is reserved for data points, a
// node entry sits at its node's level + 1, so leaf entries always drain
// first under the level-major order.
struct PqKey {
    int level = 0;
    double mindist = 0;
    std::uint64_t tiebreak = 0;

    // level-major order (leaves first, then closest)
    bool level_before(const PqKey& o) const {
        if (level != o.level) return level < o.level;
        if (mindist != o.mindist) return mindist < o.mindist;
        return tiebreak < o.tiebreak;
    }

    // distance-major order
    bool dist_before(const PqKey& o) const {
        if (mindist != o.mindist) return mindist < o.mindist;
        return tiebreak < o.tiebreak;
    }
};

struct QueryStats {
    IoCounter io;
    std::uint64_t dominance_checks = 0;
    // (total I/O so far, results emitted so far), appended at every node read
    std::vector<std::pair<std::uint64_t, std::uint64_t>> progress;

    std::uint64_t emitted = 0;

    void sample() { progress.emplace_back(io.total(), emitted); }

    void add(const QueryStats& o) {
        io.reads_product += o.io.reads_product;
        io.reads_customer += o.io.reads_customer;
        dominance_checks += o.dominance_checks;
        emitted += o.emitted;
    }
};

// I/O at which `frac` of the final results had been emitted.
inline std::uint64_t io_at_fraction(const QueryStats& s, double frac) {
    if (s.emitted == 0) return s.io.total();
    const std::uint64_t need = static_cast<std::uint64_t>(std::max(1.0, std::ceil(frac * static_cast<double>(s.emitted))));
    for (const auto& [io, emitted] : s.progress) {
        if (emitted >= need) return io;
    }
    return s.io.total();
}

}  // namespace rskyline
