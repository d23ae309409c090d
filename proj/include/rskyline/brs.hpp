#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "rskyline/offsets.hpp"
#include "rskyline/rsl.hpp"
#include "rskyline/rtree.hpp"
#include "rskyline/stats.hpp"

// Baseline single-query engine.  Expands product entries nearest-first and
// maintains two frontiers over the live product entries: the optimistic one
// (least-offset midpoints, blocks confirmation) and the certified one
// (anchored face corners and exact midpoints, proves exclusion).  Customer
// entries are swept against both until every customer is decided; the run
// ends when the customer list drains.

namespace rskyline {

namespace detail {

struct BrsProductEntry {
    double mindist = 0;
    NodeId id = 0;
    int level = 0;

    bool operator<(const BrsProductEntry& o) const {
        if (mindist != o.mindist) return mindist < o.mindist;
        return id < o.id;
    }
};

struct BrsCustomerEntry {
    bool is_point = false;
    NodeId node = 0;
    PointId point_id = -1;
    std::uint32_t count = 0;
    OffsetVec min_off;
    bool has_blocker = false;
    NodeId blocker = 0;
    bool alive = true;
};

}  // namespace detail

class BrsEngine {
public:
    BrsEngine(Point q, const RTree& tp, const RTree& tc, RslEvents events = {})
        : q_(std::move(q)), tp_(&tp), tc_(&tc), events_(std::move(events)) {
        require_same_dim(q_.dim(), tp.dim());
        require_same_dim(q_.dim(), tc.dim());
        std::vector<Certificate> init_delta;
        absorb_product_node(read(*tp_, tp.root()), init_delta);
        prune_products(init_delta);
        seed_customers(read(*tc_, tc.root()));
    }

    void run() {
        std::vector<Certificate> delta;
        while (!customers_empty()) {
            delta.clear();
            if (!ep_.empty()) {
                const NodeId id = ep_.begin()->id;
                ep_.erase(ep_.begin());
                live_.erase(id);
                absorb_product_node(read(*tp_, id), delta);
                prune_products(delta);
            }
            sweep_customers(delta);
        }
    }

    const InfluenceSet& result() const { return result_; }
    const QueryStats& stats() const { return stats_; }
    const std::vector<std::pair<int, NodeId>>& read_log() const { return read_log_; }

private:
    const RTreeNode& read(const RTree& t, NodeId id) {
        const RTreeNode& n = t.read_node(id, stats_.io);
        stats_.sample();
        read_log_.emplace_back(static_cast<int>(t.role()), id);
        return n;
    }

    // Folds a product node into the frontiers: children enter the queue with
    // optimistic bounds unless already provably redundant, and contribute
    // anchored certificates; leaf points contribute exact midpoints.
    void absorb_product_node(const RTreeNode& n, std::vector<Certificate>& delta) {
        if (n.is_leaf()) {
            for (const Point& p : n.points) {
                const Certificate cert = midpoint_certificate(offsets_of(p, q_));
                if (anchors_.insert(cert, stats_.dominance_checks)) delta.push_back(cert);
                skym_.insert(cert.bound, stats_.dominance_checks);
            }
            return;
        }
        std::vector<Certificate> certs;
        for (const ChildEntry& c : n.children) {
            const OffsetVec opt_mid = halved(rect_min_offsets(c.rect, q_));
            if (anchors_.covers(opt_mid, stats_.dominance_checks)) continue;  // cannot refine anything
            ep_.insert({mindist(c.rect, q_), c.id, n.level - 1});
            live_.emplace(c.id, opt_mid);
            certs.clear();
            rect_certificates(c.rect, q_, certs);
            for (const Certificate& cert : certs) {
                if (anchors_.insert(cert, stats_.dominance_checks)) delta.push_back(cert);
            }
        }
    }

    void prune_products(const std::vector<Certificate>& delta) {
        if (delta.empty()) return;
        for (auto it = ep_.begin(); it != ep_.end();) {
            const OffsetVec& opt_mid = live_.at(it->id);
            bool dead = false;
            for (const Certificate& c : delta) {
                ++stats_.dominance_checks;
                if (certifies(c, opt_mid)) {
                    dead = true;
                    break;
                }
            }
            if (dead) {
                live_.erase(it->id);
                it = ep_.erase(it);
            } else {
                ++it;
            }
        }
    }

    void seed_customers(const RTreeNode& root) { append_customer_children(root); }

    void append_customer_children(const RTreeNode& n) {
        if (n.is_leaf()) {
            for (const Point& p : n.points) {
                detail::BrsCustomerEntry e;
                e.is_point = true;
                e.point_id = p.id;
                e.count = 1;
                e.min_off = offsets_of(p, q_);
                if (anchors_.covers(e.min_off, stats_.dominance_checks)) {
                    if (events_.on_out) events_.on_out(p.id);
                    continue;
                }
                ec_.push_back(std::move(e));
            }
            return;
        }
        for (const ChildEntry& c : n.children) {
            detail::BrsCustomerEntry e;
            e.node = c.id;
            e.count = c.count;
            e.min_off = rect_min_offsets(c.rect, q_);
            if (anchors_.covers(e.min_off, stats_.dominance_checks)) {
                if (events_.on_prune_subtree) events_.on_prune_subtree(c.id, c.count);
                continue;
            }
            ec_.push_back(std::move(e));
        }
    }

    bool customers_empty() const { return ec_.empty(); }

    void sweep_customers(const std::vector<Certificate>& delta) {
        // one pass per iteration: children appended here wait for the next
        // frontier refresh
        const std::size_t snapshot = ec_.size();
        for (std::size_t i = 0; i < snapshot; ++i) {
            detail::BrsCustomerEntry& e = ec_[i];
            if (!e.alive) continue;
            bool out = false;
            for (const Certificate& c : delta) {
                ++stats_.dominance_checks;
                if (certifies(c, e.min_off)) {
                    out = true;
                    break;
                }
            }
            if (out) {
                if (e.is_point) {
                    if (events_.on_out) events_.on_out(e.point_id);
                } else if (events_.on_prune_subtree) {
                    events_.on_prune_subtree(e.node, e.count);
                }
                e.alive = false;
                continue;
            }
            if (e.has_blocker && live_.count(e.blocker)) continue;
            e.has_blocker = false;
            for (const auto& [id, opt_mid] : live_) {
                ++stats_.dominance_checks;
                if (weak_le(opt_mid, e.min_off)) {
                    e.has_blocker = true;
                    e.blocker = id;
                    break;
                }
            }
            if (e.has_blocker) continue;
            if (e.is_point) {
                insert_id(result_, e.point_id);
                ++stats_.emitted;
                stats_.sample();
                if (events_.on_confirm) events_.on_confirm(e.point_id);
                e.alive = false;
                continue;
            }
            // A live product entry may still carve this box; while any
            // remain, hold off when the found midpoints reach its corner.
            if (!live_.empty() && skym_.weakly_covers(e.min_off, stats_.dominance_checks)) continue;
            const NodeId id = e.node;
            e.alive = false;
            append_customer_children(read(*tc_, id));
        }
        std::size_t kept = 0;
        for (std::size_t i = 0; i < ec_.size(); ++i) {
            if (ec_[i].alive) {
                if (kept != i) ec_[kept] = std::move(ec_[i]);
                ++kept;
            }
        }
        ec_.resize(kept);
    }

    Point q_;
    const RTree* tp_;
    const RTree* tc_;
    RslEvents events_;

    std::set<detail::BrsProductEntry> ep_;
    std::map<NodeId, OffsetVec> live_;
    CertificateFrontier anchors_;
    MidpointFrontier skym_;
    std::vector<detail::BrsCustomerEntry> ec_;
    InfluenceSet result_;
    QueryStats stats_;
    std::vector<std::pair<int, NodeId>> read_log_;
};

inline std::pair<InfluenceSet, QueryStats> brs(const Point& q, const RTree& tp, const RTree& tc,
                                               RslEvents events = {}) {
    BrsEngine eng(q, tp, tc, std::move(events));
    eng.run();
    return {eng.result(), eng.stats()};
}

}  // namespace rskyline
