#pragma once

#include <vector>

#include "rskyline/core.hpp"
#include "rskyline/stats.hpp"

// Brute-force reference answers computed straight from the dominance
// definitions.  Quadratic scans, no index, no pruning: every engine result
// is validated against these.

namespace rskyline {

// Products not dynamically dominated with respect to c by any other product.
inline std::vector<PointId> oracle_dynamic_skyline(const Point& c, const std::vector<Point>& products) {
    std::vector<PointId> out;
    for (const Point& p : products) {
        bool dominated = false;
        for (const Point& p2 : products) {
            if (&p2 == &p) continue;
            if (dynamically_dominates(p2, p, c)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(p.id);
    }
    return out;
}

// Customers for whom no product beats q: the influence set of q.
inline InfluenceSet oracle_reverse_skyline(const Point& q, const std::vector<Point>& products,
                                           const std::vector<Point>& customers) {
    InfluenceSet out;
    for (const Point& c : customers) {
        bool excluded = false;
        for (const Point& p : products) {
            if (dynamically_dominates(p, q, c)) {
                excluded = true;
                break;
            }
        }
        if (!excluded) insert_id(out, c.id);
    }
    return out;
}

}  // namespace rskyline
