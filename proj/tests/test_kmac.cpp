#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "rskyline/datagen.hpp"
#include "rskyline/kmac.hpp"
#include "rskyline/oracle.hpp"

using namespace rskyline;

namespace {

std::vector<Point> sample(std::mt19937_64& rng, std::size_t n, int d, Distribution dist, PointId id0 = 0) {
    GenSpec spec{dist, n, d, rng()};
    auto pts = generate(spec);
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i].id = id0 + static_cast<PointId>(i);
    return pts;
}

std::vector<Point> clustered_candidates(std::mt19937_64& rng, std::size_t n, int d) {
    std::uniform_real_distribution<double> u(100.0, 900.0);
    std::normal_distribution<double> jit(0.0, 30.0);
    Point base;
    base.coords.resize(static_cast<std::size_t>(d));
    for (double& c : base.coords) c = u(rng);
    std::vector<Point> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].id = 500000 + static_cast<PointId>(i);
        out[i].coords.resize(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) out[i].coords[static_cast<std::size_t>(k)] = clamp_domain(base[k] + jit(rng));
    }
    return out;
}

Point make_pt(std::vector<double> c, PointId id) { return Point{std::move(c), id}; }

}  // namespace

TEST_CASE("hilbert_partition shapes") {
    std::mt19937_64 rng(41);
    const auto q10 = sample(rng, 10, 2, Distribution::uniform);
    CHECK(hilbert_partition(q10, 10).size() == 1);
    const auto batches = hilbert_partition(q10, 3);
    REQUIRE(batches.size() == 4);
    CHECK(batches[0].ids.size() == 3);
    CHECK(batches[3].ids.size() == 1);

    std::set<PointId> all;
    for (const Batch& b : batches) all.insert(b.ids.begin(), b.ids.end());
    CHECK(all.size() == 10);
}

TEST_CASE("hilbert keys are injective on grid cells") {
    std::mt19937_64 rng(97);
    for (int d : {2, 3, 5, 8}) {
        std::set<HilbertKey> seen;
        std::set<std::vector<std::uint32_t>> cells;
        int fresh = 0;
        for (int it = 0; it < 4000; ++it) {
            std::array<std::uint32_t, kMaxDim> cell{};
            std::vector<std::uint32_t> key_cell;
            for (int i = 0; i < d; ++i) {
                cell[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(rng() & 0xFFFF);
                key_cell.push_back(cell[static_cast<std::size_t>(i)]);
            }
            if (!cells.insert(key_cell).second) continue;
            ++fresh;
            REQUIRE(seen.insert(hilbert_index(cell, d)).second);
        }
        REQUIRE(fresh > 3900);
    }
}

TEST_CASE("hilbert_partition groups nearby candidates") {
    std::vector<Point> q = {make_pt({0, 50}, 0), make_pt({1, 50}, 1), make_pt({2, 50}, 2), make_pt({100, 50}, 3)};
    const auto batches = hilbert_partition(q, 2);
    REQUIRE(batches.size() == 2);
    std::set<PointId> first(batches[0].ids.begin(), batches[0].ids.end());
    std::set<PointId> second(batches[1].ids.begin(), batches[1].ids.end());
    const std::set<PointId> near{0, 1}, far{2, 3};
    CHECK(((first == near && second == far) || (first == far && second == near)));
}

TEST_CASE("basic_kmac") {
    std::mt19937_64 rng(43);
    const auto products = sample(rng, 80, 2, Distribution::uniform);
    const auto customers = sample(rng, 80, 2, Distribution::uniform, 100000);
    const RTree tp(products, 6, TreeRole::product);
    const RTree tc(customers, 6, TreeRole::customer);

    SECTION("single candidate") {
        const auto q = sample(rng, 1, 2, Distribution::uniform, 900);
        const KmacResult r = basic_kmac(q, tp, tc, 1, SingleEngine::rsl);
        CHECK(r.selection.chosen == std::vector<PointId>{900});
        CHECK(r.selection.joint_score == oracle_reverse_skyline(q[0], products, customers).size());
    }
    SECTION("identical candidates tie") {
        auto q = sample(rng, 1, 2, Distribution::uniform, 900);
        q.push_back(q[0]);
        q[1].id = 901;
        const KmacResult r = basic_kmac(q, tp, tc, 1, SingleEngine::brs);
        CHECK(r.selection.chosen == std::vector<PointId>{900});  // tie goes to the smaller id
        CHECK(r.profiles[0].influence == r.profiles[1].influence);
    }
    SECTION("aggregate equals per-candidate sums") {
        const auto q = sample(rng, 6, 2, Distribution::uniform, 900);
        const KmacResult r = basic_kmac(q, tp, tc, 2, SingleEngine::rsl);
        std::uint64_t rp = 0, rc = 0;
        for (const QueryStats& s : r.per_candidate) {
            rp += s.io.reads_product;
            rc += s.io.reads_customer;
        }
        CHECK(r.physical_io.reads_product == rp);
        CHECK(r.physical_io.reads_customer == rc);
    }
}

TEST_CASE("batch equals standalone and the ledger is the union of read sets") {
    std::mt19937_64 rng(47);
    for (int it = 0; it < 25; ++it) {
        const int d = 2 + it % 3;
        const Distribution dist = static_cast<Distribution>(it % 3);
        const auto products = sample(rng, 30 + rng() % 120, d, dist);
        const auto customers = sample(rng, 30 + rng() % 120, d, dist, 100000);
        const auto candidates = clustered_candidates(rng, 2 + rng() % 4, d);
        const int fanout = 4 + static_cast<int>(rng() % 8);
        const RTree tp(products, fanout, TreeRole::product);
        const RTree tc(customers, fanout, TreeRole::customer);

        SharedReadLedger ledger;
        const auto results = batch_rsa(candidates, tp, tc, ledger);

        std::set<std::pair<int, NodeId>> union_reads;
        std::size_t sum_reads = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            RslState solo(candidates[i], tp, tc);
            solo.run();
            REQUIRE(solo.result() == results[i].influence);
            REQUIRE(solo.stats().io.reads_product == results[i].stats.io.reads_product);
            REQUIRE(solo.stats().io.reads_customer == results[i].stats.io.reads_customer);
            REQUIRE(solo.stats().dominance_checks == results[i].stats.dominance_checks);
            REQUIRE(solo.read_log() == results[i].read_log);
            union_reads.insert(solo.read_log().begin(), solo.read_log().end());
            sum_reads += solo.read_log().size();
            REQUIRE(oracle_reverse_skyline(candidates[i], products, customers) == results[i].influence);
        }
        REQUIRE(ledger.seen == union_reads);
        REQUIRE(ledger.size() <= sum_reads);
        if (candidates.size() > 1) REQUIRE(ledger.size() < sum_reads);  // roots are always shared
    }
}

TEST_CASE("batch of one is a plain rsl run") {
    std::mt19937_64 rng(53);
    const auto products = sample(rng, 100, 3, Distribution::correlated);
    const auto customers = sample(rng, 100, 3, Distribution::correlated, 100000);
    const auto q = sample(rng, 1, 3, Distribution::uniform, 900);
    const RTree tp(products, 8, TreeRole::product);
    const RTree tc(customers, 8, TreeRole::customer);
    SharedReadLedger ledger;
    const auto res = batch_rsa(q, tp, tc, ledger);
    RslState solo(q[0], tp, tc);
    solo.run();
    CHECK(res[0].influence == solo.result());
    CHECK(ledger.size() == solo.read_log().size());
}

TEST_CASE("identical candidates share every read") {
    std::mt19937_64 rng(59);
    const auto products = sample(rng, 100, 2, Distribution::uniform);
    const auto customers = sample(rng, 100, 2, Distribution::uniform, 100000);
    auto q = sample(rng, 1, 2, Distribution::uniform, 900);
    q.push_back(q[0]);
    q[1].id = 901;
    const RTree tp(products, 6, TreeRole::product);
    const RTree tc(customers, 6, TreeRole::customer);
    SharedReadLedger ledger;
    const auto res = batch_rsa(q, tp, tc, ledger);
    CHECK(res[0].influence == res[1].influence);
    RslState solo(q[0], tp, tc);
    solo.run();
    CHECK(ledger.size() == solo.read_log().size());
}

TEST_CASE("engine work does not depend on k") {
    std::mt19937_64 rng(61);
    const auto products = sample(rng, 150, 2, Distribution::anticorrelated);
    const auto customers = sample(rng, 150, 2, Distribution::anticorrelated, 100000);
    const auto candidates = sample(rng, 6, 2, Distribution::uniform, 900);
    const RTree tp(products, 8, TreeRole::product);
    const RTree tc(customers, 8, TreeRole::customer);

    const KmacResult b1 = basic_kmac(candidates, tp, tc, 1, SingleEngine::rsl);
    const KmacResult b3 = basic_kmac(candidates, tp, tc, 3, SingleEngine::rsl);
    CHECK(b1.physical_io.reads_product == b3.physical_io.reads_product);
    CHECK(b1.physical_io.reads_customer == b3.physical_io.reads_customer);
    CHECK(b1.dominance_checks == b3.dominance_checks);

    const KmacResult t1 = batch_kmac(candidates, tp, tc, 1, 3);
    const KmacResult t3 = batch_kmac(candidates, tp, tc, 3, 3);
    CHECK(t1.physical_io.reads_product == t3.physical_io.reads_product);
    CHECK(t1.physical_io.reads_customer == t3.physical_io.reads_customer);
    CHECK(t1.dominance_checks == t3.dominance_checks);
}

TEST_CASE("bb_kmac agrees with basic and bounds stay sound") {
    std::mt19937_64 rng(67);
    for (int it = 0; it < 25; ++it) {
        const int d = 2 + it % 3;
        const Distribution dist = static_cast<Distribution>(it % 3);
        const auto products = sample(rng, 30 + rng() % 100, d, dist);
        const auto customers = sample(rng, 30 + rng() % 100, d, dist, 100000);
        const auto candidates = sample(rng, 2 + rng() % 8, d, Distribution::uniform, 900);
        const int k = 1 + static_cast<int>(rng() % 2);
        if (static_cast<std::size_t>(k) > candidates.size()) continue;
        const RTree tp(products, 6, TreeRole::product);
        const ARTree tc(customers, 6, TreeRole::customer);

        std::map<PointId, std::uint64_t> oracle_is;
        std::vector<CandidateProfile> oracle_profiles;
        for (const Point& q : candidates) {
            auto set = oracle_reverse_skyline(q, products, customers);
            oracle_is[q.id] = set.size();
            oracle_profiles.push_back({q.id, std::move(set)});
        }

        BbAudit audit;
        audit.on_bounds = [&](PointId id, std::uint64_t lo, std::uint64_t hi) {
            REQUIRE(lo <= oracle_is.at(id));
            REQUIRE(oracle_is.at(id) <= hi);
        };
        const KmacResult bb = bb_kmac(candidates, tp, tc, k, audit);
        const KmacResult basic = basic_kmac(candidates, tp, tc, k, SingleEngine::rsl);
        REQUIRE(bb.selection.joint_score == basic.selection.joint_score);

        // every exact optimum avoids every discarded candidate
        if (!bb.discarded.empty()) {
            const std::uint64_t opt = exhaustive_opt(oracle_profiles, k).joint_score;
            for (PointId dead : bb.discarded) {
                for (std::size_t a = 0; a < oracle_profiles.size(); ++a) {
                    if (k == 1) {
                        if (oracle_profiles[a].id == dead) REQUIRE(oracle_profiles[a].influence.size() < opt);
                    } else {
                        for (std::size_t b = a + 1; b < oracle_profiles.size(); ++b) {
                            if (oracle_profiles[a].id != dead && oracle_profiles[b].id != dead) continue;
                            REQUIRE(joint_influence_score({oracle_profiles[a], oracle_profiles[b]}) < opt);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("bb k=1 returns the top influence score") {
    std::mt19937_64 rng(71);
    const auto products = sample(rng, 120, 3, Distribution::uniform);
    const auto customers = sample(rng, 120, 3, Distribution::uniform, 100000);
    const auto candidates = sample(rng, 8, 3, Distribution::uniform, 900);
    const RTree tp(products, 8, TreeRole::product);
    const ARTree tc(customers, 8, TreeRole::customer);
    const KmacResult bb = bb_kmac(candidates, tp, tc, 1);
    std::uint64_t best = 0;
    for (const Point& q : candidates) best = std::max<std::uint64_t>(best, oracle_reverse_skyline(q, products, customers).size());
    CHECK(bb.selection.joint_score == best);
}

TEST_CASE("pruned customer subtrees lower the upper bound by their counts") {
    std::mt19937_64 rng(73);
    const auto products = sample(rng, 200, 2, Distribution::uniform);
    const auto customers = sample(rng, 300, 2, Distribution::uniform, 100000);
    const auto candidates = sample(rng, 1, 2, Distribution::uniform, 900);
    const RTree tp(products, 5, TreeRole::product);
    const ARTree tc(customers, 5, TreeRole::customer);

    std::uint64_t removed = 0;
    std::uint64_t confirmed = 0;
    RslEvents ev;
    ev.on_out = [&](PointId) { ++removed; };
    ev.on_prune_subtree = [&](NodeId id, std::uint32_t count) {
        REQUIRE(count == tc.count(id));
        REQUIRE(count >= 1);
        removed += count;
    };
    ev.on_confirm = [&](PointId) { ++confirmed; };
    RslState st(candidates[0], tp, tc, ev);
    st.run();
    REQUIRE(removed + confirmed == customers.size());
    REQUIRE(confirmed == st.result().size());
}

TEST_CASE("a candidate whose bound falls below the leader is discarded unfinished") {
    // one candidate confirms a pocket of customers untouched by any product;
    // the other is beaten for every customer, but only at leaf granularity
    // (anti-diagonal customers with near-mirror products defeat box pruning),
    // so its upper bound sinks slowly and crosses the leader's confirmed
    // score long before its refinement would end
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Point> customers, products;
    PointId cid = 100000, pid = 0;
    for (int i = 0; i < 200; ++i)
        customers.push_back({{300 + 10 * (u01(rng) - .5), 100 + 10 * (u01(rng) - .5)}, cid++});
    for (int i = 0; i < 800; ++i) {
        const double x = 500.0 * u01(rng);
        customers.push_back({{x, 500.0 - x}, cid++});
    }
    for (std::size_t i = 200; i < customers.size(); ++i)
        products.push_back({{customers[i][0] * 1.999, customers[i][1] * 1.999}, pid++});
    for (int i = 0; i < 50; ++i)
        products.push_back({{(600 + 40 * (u01(rng) - .5)) * 0.98, (200 + 40 * (u01(rng) - .5)) * 0.98}, pid++});

    const std::vector<Point> cands = {{{300, 100}, 900}, {{0, 0}, 901}};
    const RTree tp(products, 8, TreeRole::product);
    const ARTree tc(customers, 8, TreeRole::customer);

    std::vector<PointId> discard_events;
    BbAudit audit;
    audit.on_discard = [&](PointId id) { discard_events.push_back(id); };
    const KmacResult bb = bb_kmac(cands, tp, tc, 1, audit);
    const KmacResult basic = basic_kmac(cands, tp, tc, 1, SingleEngine::rsl);
    CHECK(bb.selection.joint_score == basic.selection.joint_score);
    CHECK(bb.selection.chosen == std::vector<PointId>{900});
    REQUIRE(bb.discarded == std::vector<PointId>{901});
    REQUIRE(discard_events == std::vector<PointId>{901});
    for (const CandidateProfile& p : bb.profiles) REQUIRE(p.id != 901);
}
