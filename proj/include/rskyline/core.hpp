#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Geometric kernel shared by the query engines, the oracles and the
// index: attribute points, folded offset vectors, bounding rectangles
// and the dominance tests defined on them.

namespace rskyline {

inline constexpr int kMaxDim = 8;  // attribute dimensions supported project-wide

using PointId = std::int64_t;

struct Point {
    std::vector<double> coords;
    PointId id = -1;

    int dim() const { return static_cast<int>(coords.size()); }
    double operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
};

// Per-dimension absolute offset |x_i - q_i| from a fixed query point.
struct TransformedPoint {
    std::vector<double> coords;

    int dim() const { return static_cast<int>(coords.size()); }
    double operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
};

struct Rect {
    std::vector<double> lo;
    std::vector<double> hi;

    int dim() const { return static_cast<int>(lo.size()); }

    bool contains(const Point& p) const {
        for (int i = 0; i < dim(); ++i) {
            if (p[i] < lo[static_cast<std::size_t>(i)] || p[i] > hi[static_cast<std::size_t>(i)]) return false;
        }
        return true;
    }
};

// Optimistic/pessimistic offset corners of a rectangle relative to a query.
struct CornerSet {
    TransformedPoint min_corner;
    std::vector<TransformedPoint> minmax_corners;  // one per dimension
};

inline void require_same_dim(int a, int b) {
    if (a != b) throw std::invalid_argument("dimensionality mismatch");
}

inline TransformedPoint transform(const Point& x, const Point& q) {
    require_same_dim(x.dim(), q.dim());
    TransformedPoint t;
    t.coords.resize(x.coords.size());
    for (int i = 0; i < x.dim(); ++i) t.coords[static_cast<std::size_t>(i)] = std::abs(x[i] - q[i]);
    return t;
}

inline TransformedPoint midpoint(const TransformedPoint& x) {
    TransformedPoint m;
    m.coords.resize(x.coords.size());
    for (std::size_t i = 0; i < x.coords.size(); ++i) m.coords[i] = x.coords[i] / 2.0;
    return m;
}

// a <= b in every dimension, a < b in at least one.
inline bool dominates(const TransformedPoint& a, const TransformedPoint& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        if (a.coords[i] > b.coords[i]) return false;
        if (a.coords[i] < b.coords[i]) strict = true;
    }
    return strict;
}

// p beats p2 for customer c: at least as close to c in every dimension,
// strictly closer in one.
inline bool dynamically_dominates(const Point& p, const Point& p2, const Point& c) {
    require_same_dim(p.dim(), p2.dim());
    return dominates(transform(p, c), transform(p2, c));
}

inline CornerSet corner_set(const Rect& r, const Point& q) {
    require_same_dim(r.dim(), q.dim());
    const int d = r.dim();
    TransformedPoint mn;
    std::vector<double> mx(static_cast<std::size_t>(d));
    mn.coords.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double lo = r.lo[static_cast<std::size_t>(i)], hi = r.hi[static_cast<std::size_t>(i)];
        const double dlo = std::abs(lo - q[i]), dhi = std::abs(hi - q[i]);
        mn.coords[static_cast<std::size_t>(i)] = (q[i] >= lo && q[i] <= hi) ? 0.0 : std::min(dlo, dhi);
        mx[static_cast<std::size_t>(i)] = std::max(dlo, dhi);
    }
    CornerSet cs;
    cs.min_corner = mn;
    cs.minmax_corners.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        TransformedPoint u;
        u.coords = mx;
        u.coords[static_cast<std::size_t>(j)] = mn.coords[static_cast<std::size_t>(j)];
        cs.minmax_corners[static_cast<std::size_t>(j)] = std::move(u);
    }
    return cs;
}

// True only when m dominates the whole rectangle in offset space.
inline bool rect_fully_dominated(const TransformedPoint& m, const Rect& r, const Point& q) {
    require_same_dim(m.dim(), r.dim());
    const CornerSet cs = corner_set(r, q);
    return dominates(m, cs.min_corner);
}

}  // namespace rskyline
