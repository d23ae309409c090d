#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rskyline/core.hpp"

// Bulk-loaded, height-balanced R-tree over points.  Built once per run with
// sort-tile-recursive packing; immutable afterwards.  Every node access goes
// through read_node and counts as one I/O against the tree's role bucket —
// there is no buffer pool, so revisits count again.

namespace rskyline {

using NodeId = std::uint32_t;

enum class TreeRole { product, customer };

struct IoCounter {
    std::uint64_t reads_product = 0;
    std::uint64_t reads_customer = 0;

    std::uint64_t total() const { return reads_product + reads_customer; }
};

struct ChildEntry {
    NodeId id = 0;
    Rect rect;
    std::uint32_t count = 0;  // leaf points under the child (aggregate trees)
};

struct RTreeNode {
    NodeId id = 0;
    int level = 0;  // 0 = leaf
    Rect rect;
    std::vector<ChildEntry> children;  // level > 0
    std::vector<Point> points;         // level == 0

    bool is_leaf() const { return level == 0; }
    std::size_t entry_count() const { return is_leaf() ? points.size() : children.size(); }
};

// Entries-per-node for a page: 2*D 8-byte bounds plus an 8-byte id per
// entry, 32-byte header.
inline int default_fanout(int dim, int page_bytes) {
    if (page_bytes < 256) throw std::invalid_argument("page size below 256 bytes");
    const int per_entry = 16 * dim + 8;
    const int f = (page_bytes - 32) / per_entry;
    return std::max(4, f);
}

inline double mindist(const Rect& r, const Point& q) {
    double s = 0;
    for (int i = 0; i < r.dim(); ++i) {
        double d = 0;
        if (q[i] < r.lo[static_cast<std::size_t>(i)]) d = r.lo[static_cast<std::size_t>(i)] - q[i];
        else if (q[i] > r.hi[static_cast<std::size_t>(i)]) d = q[i] - r.hi[static_cast<std::size_t>(i)];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double point_dist(const Point& p, const Point& q) {
    double s = 0;
    for (int i = 0; i < p.dim(); ++i) {
        const double d = p[i] - q[i];
        s += d * d;
    }
    return std::sqrt(s);
}

class RTree {
public:
    RTree(std::vector<Point> points, int fanout, TreeRole role)
        : fanout_(fanout), role_(role) {
        if (points.empty()) throw std::invalid_argument("cannot build an R-tree over no points");
        if (fanout < 2) throw std::invalid_argument("fanout must be at least 2");
        dim_ = points.front().dim();
        if (dim_ < 2 || dim_ > kMaxDim) throw std::invalid_argument("dimension out of supported range");
        for (const Point& p : points) {
            if (p.dim() != dim_) throw std::invalid_argument("dimensionality mismatch in build set");
        }
        size_ = points.size();
        build(std::move(points));
    }

    const RTreeNode& read_node(NodeId id, IoCounter& io) const {
        if (id >= nodes_.size()) throw std::out_of_range("unknown node id");
        if (role_ == TreeRole::product) ++io.reads_product;
        else ++io.reads_customer;
        return nodes_[id];
    }

    // Structure access without I/O accounting (tests, tree metadata).
    const RTreeNode& peek(NodeId id) const { return nodes_.at(id); }

    NodeId root() const { return root_; }
    int height() const { return nodes_[root_].level + 1; }
    int dim() const { return dim_; }
    int fanout() const { return fanout_; }
    TreeRole role() const { return role_; }
    std::size_t size() const { return size_; }
    std::size_t node_count() const { return nodes_.size(); }

    std::uint32_t subtree_count(NodeId id) const { return counts_.at(id); }

protected:
    void build(std::vector<Point> points) {
        // STR leaf packing: recursively slab-partition on successive
        // dimensions, ties broken by (coordinate, id).
        std::vector<std::size_t> order(points.size());
        std::iota(order.begin(), order.end(), 0);
        std::vector<std::vector<std::size_t>> leaf_groups;
        tile(points, order, 0, leaf_groups);

        std::vector<NodeId> level_ids;
        for (const auto& g : leaf_groups) {
            RTreeNode n;
            n.id = static_cast<NodeId>(nodes_.size());
            n.level = 0;
            for (std::size_t idx : g) n.points.push_back(points[idx]);
            n.rect = bounds_of_points(n.points);
            counts_.push_back(static_cast<std::uint32_t>(n.points.size()));
            level_ids.push_back(n.id);
            nodes_.push_back(std::move(n));
        }

        int level = 1;
        while (level_ids.size() > 1) {
            // pack by center, same STR recursion
            std::vector<Point> centers;
            centers.reserve(level_ids.size());
            for (std::size_t i = 0; i < level_ids.size(); ++i) {
                const Rect& r = nodes_[level_ids[i]].rect;
                Point c;
                c.id = static_cast<PointId>(i);
                c.coords.resize(static_cast<std::size_t>(dim_));
                for (int k = 0; k < dim_; ++k)
                    c.coords[static_cast<std::size_t>(k)] =
                        (r.lo[static_cast<std::size_t>(k)] + r.hi[static_cast<std::size_t>(k)]) / 2.0;
                centers.push_back(std::move(c));
            }
            std::vector<std::size_t> corder(centers.size());
            std::iota(corder.begin(), corder.end(), 0);
            std::vector<std::vector<std::size_t>> groups;
            tile(centers, corder, 0, groups);

            std::vector<NodeId> next_ids;
            for (const auto& g : groups) {
                RTreeNode n;
                n.id = static_cast<NodeId>(nodes_.size());
                n.level = level;
                std::uint32_t cnt = 0;
                for (std::size_t idx : g) {
                    const NodeId cid = level_ids[idx];
                    n.children.push_back({cid, nodes_[cid].rect, counts_[cid]});
                    cnt += counts_[cid];
                }
                n.rect = bounds_of_children(n.children);
                counts_.push_back(cnt);
                next_ids.push_back(n.id);
                nodes_.push_back(std::move(n));
            }
            level_ids = std::move(next_ids);
            ++level;
        }
        root_ = level_ids.front();
    }

    void tile(const std::vector<Point>& pts, std::vector<std::size_t>& order, int axis,
              std::vector<std::vector<std::size_t>>& out) {
        const std::size_t n = order.size();
        const std::size_t f = static_cast<std::size_t>(fanout_);
        if (n <= f) {
            sort_axis(pts, order, axis);
            out.push_back(order);
            return;
        }
        sort_axis(pts, order, axis);
        if (axis == dim_ - 1) {
            for (std::size_t i = 0; i < n; i += f) {
                out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                                 order.begin() + static_cast<std::ptrdiff_t>(std::min(i + f, n)));
            }
            return;
        }
        const std::size_t pages = (n + f - 1) / f;
        const double frac = 1.0 / (dim_ - axis);
        const std::size_t slabs =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(pages), frac))));
        const std::size_t per_slab = ((pages + slabs - 1) / slabs) * f;
        for (std::size_t i = 0; i < n; i += per_slab) {
            std::vector<std::size_t> slab(order.begin() + static_cast<std::ptrdiff_t>(i),
                                          order.begin() + static_cast<std::ptrdiff_t>(std::min(i + per_slab, n)));
            tile(pts, slab, axis + 1, out);
        }
    }

    static void sort_axis(const std::vector<Point>& pts, std::vector<std::size_t>& order, int axis) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ca = pts[a][axis], cb = pts[b][axis];
            if (ca != cb) return ca < cb;
            return pts[a].id < pts[b].id;
        });
    }

    Rect bounds_of_points(const std::vector<Point>& pts) const {
        Rect r;
        r.lo.assign(static_cast<std::size_t>(dim_), std::numeric_limits<double>::infinity());
        r.hi.assign(static_cast<std::size_t>(dim_), -std::numeric_limits<double>::infinity());
        for (const Point& p : pts) {
            for (int i = 0; i < dim_; ++i) {
                r.lo[static_cast<std::size_t>(i)] = std::min(r.lo[static_cast<std::size_t>(i)], p[i]);
                r.hi[static_cast<std::size_t>(i)] = std::max(r.hi[static_cast<std::size_t>(i)], p[i]);
            }
        }
        return r;
    }

    Rect bounds_of_children(const std::vector<ChildEntry>& cs) const {
        Rect r;
        r.lo.assign(static_cast<std::size_t>(dim_), std::numeric_limits<double>::infinity());
        r.hi.assign(static_cast<std::size_t>(dim_), -std::numeric_limits<double>::infinity());
        for (const ChildEntry& c : cs) {
            for (int i = 0; i < dim_; ++i) {
                r.lo[static_cast<std::size_t>(i)] = std::min(r.lo[static_cast<std::size_t>(i)], c.rect.lo[static_cast<std::size_t>(i)]);
                r.hi[static_cast<std::size_t>(i)] = std::max(r.hi[static_cast<std::size_t>(i)], c.rect.hi[static_cast<std::size_t>(i)]);
            }
        }
        return r;
    }

    int dim_ = 0;
    int fanout_ = 0;
    TreeRole role_;
    std::size_t size_ = 0;
    NodeId root_ = 0;
    std::vector<RTreeNode> nodes_;
    std::vector<std::uint32_t> counts_;
};

// Aggregate-count variant: identical structure, and child entries expose the
// number of leaf points beneath them so a pruned subtree can be accounted
// for without reading it.
class ARTree : public RTree {
public:
    ARTree(std::vector<Point> points, int fanout, TreeRole role)
        : RTree(std::move(points), fanout, role) {}

    std::uint32_t count(NodeId id) const { return subtree_count(id); }
};

inline RTree bulk_load(std::vector<Point> points, int fanout, TreeRole role = TreeRole::product) {
    return RTree(std::move(points), fanout, role);
}

inline ARTree build_artree(std::vector<Point> points, int fanout, TreeRole role = TreeRole::customer) {
    return ARTree(std::move(points), fanout, role);
}

}  // namespace rskyline
