#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "rskyline/offsets.hpp"
#include "rskyline/rtree.hpp"
#include "rskyline/stats.hpp"

// Reverse skyline computation that visits customer entries leaves-first
// ((level, mindist) order) and touches product nodes only when one could
// still decide the customer at hand.  The found midpoint skyline is the only
// frontier kept.  Exposed as a resumable state machine: one step processes
// one customer-queue entry, which is the unit the batch and branch-and-bound
// evaluators interleave on.

namespace rskyline {

// Physical reads shared within a batch; one entry per (tree role, node).
struct SharedReadLedger {
    std::set<std::pair<int, NodeId>> seen;

    // true when this is the first read of the node
    bool record(TreeRole role, NodeId id) { return seen.insert({static_cast<int>(role), id}).second; }
    std::size_t size() const { return seen.size(); }
};

struct RslEvents {
    std::function<void(PointId)> on_confirm;                       // customer joined the result
    std::function<void(PointId)> on_out;                           // customer point excluded
    std::function<void(NodeId, std::uint32_t)> on_prune_subtree;   // customer node pruned unread (id, leaf count)
};

namespace detail {

struct CustomerEntry {
    PqKey key;
    bool is_point = false;
    NodeId node = 0;
    PointId point_id = -1;
    std::uint32_t count = 0;
    OffsetVec min_off;  // point offsets, or least offsets of the rect

    bool before(const CustomerEntry& o) const { return key.level_before(o.key); }
};

struct ProductEntry {
    PqKey key;
    bool is_point = false;
    NodeId node = 0;
    PointId point_id = -1;
    OffsetVec mid;  // exact midpoint, or midpoint of the rect's least offsets

    bool operator<(const ProductEntry& o) const { return key.level_before(o.key); }
};

inline PqKey point_key(const Point& p, const Point& q) {
    return PqKey{0, point_dist(p, q), static_cast<std::uint64_t>(p.id)};
}

inline PqKey node_key(const ChildEntry& c, int child_level, const Point& q) {
    return PqKey{child_level + 1, mindist(c.rect, q), static_cast<std::uint64_t>(c.id)};
}

}  // namespace detail

// Child filtering applied on every node read, before children enter a queue.
// Customer children certainly outside the influence region are dropped;
// product children whose whole optimistic region is already covered by the
// frontier (or by a kept sibling) are dropped.
inline void filter_customer_children(const RTreeNode& node, const Point& q, const MidpointFrontier& frontier,
                                     std::vector<detail::CustomerEntry>& out, QueryStats& stats,
                                     const RslEvents* events = nullptr) {
    if (node.is_leaf()) {
        for (const Point& c : node.points) {
            detail::CustomerEntry e;
            e.is_point = true;
            e.point_id = c.id;
            e.count = 1;
            e.min_off = offsets_of(c, q);
            e.key = detail::point_key(c, q);
            if (frontier.dominates_point(e.min_off, stats.dominance_checks)) {
                if (events && events->on_out) events->on_out(c.id);
                continue;
            }
            out.push_back(std::move(e));
        }
        return;
    }
    for (const ChildEntry& c : node.children) {
        detail::CustomerEntry e;
        e.node = c.id;
        e.count = c.count;
        e.min_off = rect_min_offsets(c.rect, q);
        e.key = detail::node_key(c, node.level - 1, q);
        if (frontier.dominates_point(e.min_off, stats.dominance_checks)) {
            if (events && events->on_prune_subtree) events->on_prune_subtree(c.id, c.count);
            continue;
        }
        out.push_back(std::move(e));
    }
}

inline void filter_product_children(const RTreeNode& node, const Point& q, const MidpointFrontier& frontier,
                                    std::vector<detail::ProductEntry>& out, QueryStats& stats) {
    if (node.is_leaf()) {
        std::vector<OffsetVec> kept;
        for (const Point& p : node.points) {
            const OffsetVec mid = halved(offsets_of(p, q));
            bool redundant = false;
            for (const OffsetVec& s : kept) {
                ++stats.dominance_checks;
                // identical sibling midpoints both stay
                if (midpoint_subsumes(s, mid) && !offsets_equal(s, mid)) {
                    redundant = true;
                    break;
                }
            }
            if (!redundant) {
                for (const OffsetVec& m : frontier.members()) {
                    ++stats.dominance_checks;
                    if (midpoint_subsumes(m, mid)) {
                        redundant = true;
                        break;
                    }
                }
            }
            if (redundant) continue;
            kept.push_back(mid);
            detail::ProductEntry e;
            e.is_point = true;
            e.point_id = p.id;
            e.mid = mid;
            e.key = detail::point_key(p, q);
            out.push_back(std::move(e));
        }
        return;
    }
    std::vector<const ChildEntry*> kept;
    for (const ChildEntry& c : node.children) {
        const OffsetVec opt_mid = halved(rect_min_offsets(c.rect, q));
        bool redundant = false;
        for (const OffsetVec& m : frontier.members()) {
            ++stats.dominance_checks;
            if (dom(m, opt_mid)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) {
            std::vector<Certificate> certs;
            for (const ChildEntry* s : kept) {
                certs.clear();
                rect_certificates(s->rect, q, certs);
                for (const Certificate& cert : certs) {
                    ++stats.dominance_checks;
                    if (certifies(cert, opt_mid)) {
                        redundant = true;
                        break;
                    }
                }
                if (redundant) break;
            }
        }
        if (redundant) continue;
        kept.push_back(&c);
        detail::ProductEntry e;
        e.node = c.id;
        e.mid = opt_mid;
        e.key = detail::node_key(c, node.level - 1, q);
        out.push_back(std::move(e));
    }
}

class RslState {
public:
    RslState(Point q, const RTree& tp, const RTree& tc, RslEvents events = {}, SharedReadLedger* ledger = nullptr)
        : q_(std::move(q)), tp_(&tp), tc_(&tc), events_(std::move(events)), ledger_(ledger) {
        require_same_dim(q_.dim(), tp.dim());
        require_same_dim(q_.dim(), tc.dim());
        seed_products(read(*tp_, tp.root()));
        seed_customers(read(*tc_, tc.root()));
    }

    bool finished() const { return ec_.empty(); }

    // Processes one customer-queue entry.  Returns false when already done.
    bool step() {
        if (ec_.empty()) return false;
        detail::CustomerEntry e = pop_customer();
        if (frontier_.dominates_point(e.min_off, stats_.dominance_checks)) {
            if (e.is_point) {
                if (events_.on_out) events_.on_out(e.point_id);
            } else if (events_.on_prune_subtree) {
                events_.on_prune_subtree(e.node, e.count);
            }
            return true;
        }
        if (!e.is_point) {
            expand_customer(e.node);
            return true;
        }
        if (resolve_point(e.min_off)) {
            if (events_.on_out) events_.on_out(e.point_id);
        } else {
            insert_id(result_, e.point_id);
            ++stats_.emitted;
            stats_.sample();
            if (events_.on_confirm) events_.on_confirm(e.point_id);
        }
        return true;
    }

    void run() {
        while (step()) {
        }
    }

    const InfluenceSet& result() const { return result_; }
    const QueryStats& stats() const { return stats_; }
    QueryStats& stats() { return stats_; }
    const MidpointFrontier& frontier() const { return frontier_; }
    const std::vector<std::pair<int, NodeId>>& read_log() const { return read_log_; }
    const Point& query() const { return q_; }

private:
    const RTreeNode& read(const RTree& t, NodeId id) {
        const RTreeNode& n = t.read_node(id, stats_.io);
        stats_.sample();
        read_log_.emplace_back(static_cast<int>(t.role()), id);
        if (ledger_) ledger_->record(t.role(), id);
        return n;
    }

    void seed_products(const RTreeNode& root) {
        std::vector<detail::ProductEntry> children;
        filter_product_children(root, q_, frontier_, children, stats_);
        for (auto& e : children) ep_.insert(std::move(e));
    }

    void seed_customers(const RTreeNode& root) {
        std::vector<detail::CustomerEntry> children;
        filter_customer_children(root, q_, frontier_, children, stats_, &events_);
        for (auto& e : children) push_customer(std::move(e));
    }

    void push_customer(detail::CustomerEntry e) { ec_.insert(std::move(e)); }

    detail::CustomerEntry pop_customer() {
        auto it = ec_.begin();
        detail::CustomerEntry e = *it;
        ec_.erase(it);
        return e;
    }

    void expand_customer(NodeId id) {
        const RTreeNode& n = read(*tc_, id);
        std::vector<detail::CustomerEntry> children;
        filter_customer_children(n, q_, frontier_, children, stats_, &events_);
        for (auto& e : children) push_customer(std::move(e));
    }

    // Scans the product queue in key order until something kills t or
    // nothing can.  Expanding a node restarts the scan so fresh leaf entries
    // are seen first.  Returns true when t is dominated.
    bool resolve_point(const OffsetVec& t) {
        bool restart = true;
        while (restart) {
            restart = false;
            for (auto it = ep_.begin(); it != ep_.end();) {
                if (it->is_point) {
                    ++stats_.dominance_checks;
                    if (dom(it->mid, t)) {
                        frontier_.insert(it->mid, stats_.dominance_checks);
                        ep_.erase(it);
                        return true;
                    }
                    ++it;
                } else {
                    ++stats_.dominance_checks;
                    if (weak_le(it->mid, t)) {
                        const NodeId id = it->node;
                        ep_.erase(it);
                        expand_product(id);
                        restart = true;
                        break;
                    }
                    ++it;
                }
            }
        }
        return false;
    }

    void expand_product(NodeId id) {
        const RTreeNode& n = read(*tp_, id);
        std::vector<detail::ProductEntry> children;
        filter_product_children(n, q_, frontier_, children, stats_);
        for (auto& e : children) ep_.insert(std::move(e));
    }

    Point q_;
    const RTree* tp_;
    const RTree* tc_;
    RslEvents events_;
    SharedReadLedger* ledger_ = nullptr;

    struct CustomerBefore {
        bool operator()(const detail::CustomerEntry& a, const detail::CustomerEntry& b) const { return a.before(b); }
    };

    std::set<detail::CustomerEntry, CustomerBefore> ec_;
    std::set<detail::ProductEntry> ep_;
    MidpointFrontier frontier_;
    InfluenceSet result_;
    QueryStats stats_;
    std::vector<std::pair<int, NodeId>> read_log_;
};

// Single reverse-skyline query; confirmed customers reach `emit` the moment
// they are decided.
inline std::pair<InfluenceSet, QueryStats> rsl(const Point& q, const RTree& tp, const RTree& tc,
                                               std::function<void(PointId)> emit = nullptr) {
    RslEvents ev;
    ev.on_confirm = std::move(emit);
    RslState st(q, tp, tc, std::move(ev));
    st.run();
    return {st.result(), st.stats()};
}

}  // namespace rskyline
