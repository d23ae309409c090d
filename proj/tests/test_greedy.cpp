#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rskyline/greedy.hpp"

using namespace rskyline;

namespace {

std::vector<CandidateProfile> random_profiles(std::mt19937_64& rng, std::size_t q, std::size_t universe) {
    std::vector<CandidateProfile> ps(q);
    for (std::size_t i = 0; i < q; ++i) {
        ps[i].id = static_cast<PointId>(i);
        for (std::size_t c = 0; c < universe; ++c) {
            if (rng() % 3 == 0) ps[i].influence.push_back(static_cast<PointId>(c));
        }
    }
    return ps;
}

}  // namespace

TEST_CASE("joint_influence_score") {
    CHECK(joint_influence_score({}) == 0);
    CHECK(joint_influence_score({{0, {1, 2}}, {1, {2, 3}}}) == 3);
    CHECK(joint_influence_score({{0, {1, 2}}, {1, {3, 4}}, {2, {5}}}) == 5);
}

TEST_CASE("kgcs basics") {
    const std::vector<CandidateProfile> ps = {{1, {101, 102}}, {2, {102, 103}}, {3, {103}}};
    const Selection sel = kgcs(ps, 2);
    CHECK(sel.chosen == std::vector<PointId>{1, 2});
    CHECK(sel.joint_score == 3);

    CHECK(kgcs(ps, 3).joint_score == 3);
    CHECK_THROWS_AS(kgcs(ps, 0), std::invalid_argument);
    CHECK_THROWS_AS(kgcs(ps, 4), std::invalid_argument);
}

TEST_CASE("four-candidate scenario with scores 2,2,1,1") {
    const std::vector<CandidateProfile> ps = {
        {1, {2, 3}},  // p1
        {2, {1, 2}},  // p2
        {3, {3}},     // p3
        {4, {1}},     // p4
    };
    const Selection opt = exhaustive_opt(ps, 2);
    CHECK(opt.joint_score == 3);

    // exactly {p1,p2}, {p1,p4}, {p2,p3} reach the optimum
    std::set<std::set<PointId>> best_pairs;
    for (std::size_t a = 0; a < ps.size(); ++a) {
        for (std::size_t b = a + 1; b < ps.size(); ++b) {
            if (joint_influence_score({ps[a], ps[b]}) == 3) best_pairs.insert({ps[a].id, ps[b].id});
        }
    }
    CHECK(best_pairs == std::set<std::set<PointId>>{{1, 2}, {1, 4}, {2, 3}});

    const Selection greedy = kgcs(ps, 2);
    CHECK(greedy.joint_score == 3);
    CHECK(greedy.chosen == std::vector<PointId>{1, 2});
}

TEST_CASE("exhaustive_opt") {
    const std::vector<CandidateProfile> ps = {{1, {101, 102}}, {2, {102, 103}}, {3, {103}}};
    CHECK(exhaustive_opt(ps, 2).joint_score == 3);

    SECTION("k=1 picks the largest set") {
        const Selection s = exhaustive_opt(ps, 1);
        CHECK(s.joint_score == 2);
        CHECK(s.chosen == std::vector<PointId>{1});
    }
    SECTION("identical sets score the set size") {
        const std::vector<CandidateProfile> same = {{5, {1, 2}}, {6, {1, 2}}, {7, {1, 2}}};
        CHECK(exhaustive_opt(same, 2).joint_score == 2);
        CHECK(exhaustive_opt(same, 2).chosen == std::vector<PointId>{5, 6});
    }
    SECTION("guard refuses huge enumerations") {
        std::vector<CandidateProfile> many(60);
        for (std::size_t i = 0; i < many.size(); ++i) many[i].id = static_cast<PointId>(i);
        CHECK_THROWS_WITH(exhaustive_opt(many, 20), Catch::Matchers::ContainsSubstring("kgcs"));
    }
}

TEST_CASE("greedy stays within 1 - 1/e of the optimum") {
    std::mt19937_64 rng(31);
    const double bound = 1.0 - 1.0 / std::exp(1.0);
    for (int it = 0; it < 200; ++it) {
        const std::size_t q = 2 + rng() % 11;
        const auto ps = random_profiles(rng, q, 1 + rng() % 30);
        const int k = 1 + static_cast<int>(rng() % std::min<std::size_t>(q, 4));
        const double greedy = static_cast<double>(kgcs(ps, k).joint_score);
        const double opt = static_cast<double>(exhaustive_opt(ps, k).joint_score);
        REQUIRE(greedy >= bound * opt - 1e-9);
    }
}

TEST_CASE("kgcs score is monotone in k and deterministic") {
    std::mt19937_64 rng(37);
    for (int it = 0; it < 50; ++it) {
        const auto ps = random_profiles(rng, 8, 25);
        std::uint64_t prev = 0;
        for (int k = 1; k <= 8; ++k) {
            const Selection s = kgcs(ps, k);
            CHECK(s.joint_score >= prev);
            prev = s.joint_score;
            const Selection again = kgcs(ps, k);
            CHECK(again.chosen == s.chosen);
            CHECK(static_cast<std::size_t>(k) == s.chosen.size());
        }
    }
}
