#include <cmath>
#include <numeric>
#include <vector>

#include "../support/oracles.hpp"
#include "agriseg/error.hpp"
#include "agriseg/metrics.hpp"
#include "doctest.h"

using namespace agriseg;

namespace {

ConsensusScores score(const std::vector<std::uint32_t>& gt, const std::vector<std::uint32_t>& pred) {
    return consensus_scores(contingency(gt, pred));
}

}  // namespace

TEST_CASE("worked example: three-vs-three split") {
    const std::vector<std::uint32_t> gt{0, 0, 0, 1, 1, 1}, pred{0, 0, 1, 1, 2, 2};
    const auto s = score(gt, pred);
    const auto o = oracle::scores(gt, pred);
    CHECK(s.fmi == doctest::Approx(o.fmi).epsilon(1e-12));
    CHECK(s.ari == doctest::Approx(o.ari).epsilon(1e-12));
    CHECK(s.homogeneity == doctest::Approx(o.h).epsilon(1e-12));
    CHECK(s.completeness == doctest::Approx(o.c).epsilon(1e-12));
    CHECK(s.v_measure == doctest::Approx(o.v).epsilon(1e-12));
    CHECK(s.nmi == s.v_measure);
    // frozen values
    CHECK(s.fmi == doctest::Approx(0.471405).epsilon(1e-6));
    CHECK(s.ari == doctest::Approx(0.242424).epsilon(1e-6));
    CHECK(s.homogeneity == doctest::Approx(0.6667).epsilon(1e-4));
    CHECK(s.completeness == doctest::Approx(0.4206).epsilon(1e-4));
    CHECK(s.v_measure == doctest::Approx(0.5158).epsilon(1e-4));
    const auto e = entropy_terms(contingency(gt, pred));
    CHECK(e.h_gt_given_pred == doctest::Approx(std::log(2.0) / 3.0).epsilon(1e-12));
    CHECK(s.degenerate_flags.empty());
}

TEST_CASE("identical partitions score 1") {
    const std::vector<std::uint32_t> gt{1, 1, 2, 2, 3}, pred{7, 7, 4, 4, 9};
    const auto s = score(gt, pred);
    CHECK(s.fmi == doctest::Approx(1.0));
    CHECK(s.ari == doctest::Approx(1.0));
    CHECK(s.nmi == doctest::Approx(1.0));
    CHECK(s.homogeneity == doctest::Approx(1.0));
    CHECK(s.completeness == doctest::Approx(1.0));
}

TEST_CASE("degenerate tables") {
    SUBCASE("both sides single cluster") {
        const auto s = score({5, 5, 5}, {2, 2, 2});
        CHECK(s.fmi == 1.0);
        CHECK(s.nmi == 1.0);
        CHECK(s.v_measure == 1.0);
        CHECK(s.ari == 1.0);
        CHECK(s.degenerate_flags.count("ari:undefined") == 1);
        CHECK(s.degenerate_flags.count("nmi:both_single_cluster") == 1);
        CHECK(s.degenerate_flags.count("v_measure:zero") == 0);
    }
    SUBCASE("prediction all singletons") {
        const auto s = score({1, 1, 2, 2}, {1, 2, 3, 4});
        CHECK(s.fmi == 0.0);
        CHECK(s.degenerate_flags.count("fmi:no_same_cluster_pairs") == 1);
        CHECK(s.homogeneity == doctest::Approx(1.0));
    }
    SUBCASE("one side single cluster") {
        const auto s = score({1, 1, 2, 2}, {3, 3, 3, 3});
        CHECK(s.nmi == 0.0);
        CHECK(s.v_measure == 0.0);
        CHECK(s.completeness == 1.0);
        CHECK(s.degenerate_flags.count("v_measure:zero") == 1);
        CHECK(s.degenerate_flags.count("completeness:pred_single_cluster") == 1);
    }
    SUBCASE("single pixel") {
        const auto s = score({1}, {1});
        CHECK(s.ari == 1.0);
        CHECK(s.degenerate_flags.count("fmi:no_same_cluster_pairs") == 1);
    }
}

TEST_CASE("contingency errors and background exclusion") {
    const std::vector<std::uint32_t> a{1, 2}, b{1};
    CHECK_THROWS_AS(contingency(a, b), DataError);
    const std::vector<std::uint32_t> e;
    CHECK_THROWS_AS(contingency(e, e), DataError);
    const std::vector<std::uint32_t> gt{1, 1, 2, 2}, pred{0, 0, 0, 0};
    CHECK_THROWS_AS(contingency(gt, pred, true), DataError);
    const std::vector<std::uint32_t> pred2{0, 3, 3, 4};
    const auto t = contingency(gt, pred2, true);
    CHECK(t.total() == 3);
    CHECK(t.count(1, 3) == 1);
    CHECK(t.count(2, 3) == 1);
    CHECK(t.count(1, 0) == 0);
}

TEST_CASE("contingency on label maps compresses runs") {
    LabelMap gt(3, 4), pred(3, 4);
    for (std::size_t i = 0; i < 12; ++i) {
        gt.labels[i] = static_cast<std::uint32_t>(i / 6);
        pred.labels[i] = static_cast<std::uint32_t>(i % 4 < 2);
    }
    const auto t = contingency(gt, pred);
    CHECK(t.total() == 12);
    CHECK(t.count(0, 1) == 4);
    CHECK(t.count(0, 0) == 2);
    CHECK(t.count(1, 0) == 4);
    CHECK(t.count(1, 1) == 2);
    LabelMap other(2, 6);
    CHECK_THROWS_AS(contingency(gt, other), DataError);
}

TEST_CASE("merge equals the table of the concatenation") {
    Rng rng(11);
    const auto g1 = oracle::random_labels(rng, 50, 4), p1 = oracle::random_labels(rng, 50, 3);
    const auto g2 = oracle::random_labels(rng, 70, 4), p2 = oracle::random_labels(rng, 70, 3);
    auto t = contingency(g1, p1);
    t.merge(contingency(g2, p2));
    auto g = g1, p = p1;
    g.insert(g.end(), g2.begin(), g2.end());
    p.insert(p.end(), p2.begin(), p2.end());
    CHECK(consensus_scores(t) == consensus_scores(contingency(g, p)));
}

TEST_CASE("fast path matches the library brute force and the test oracle") {
    Rng rng(12);
    for (int k = 0; k < 60; ++k) {
        const std::size_t n = 1 + rng.below(150);
        const auto gt = oracle::random_labels(rng, n, 1 + static_cast<std::uint32_t>(rng.below(5)));
        const auto pred = oracle::random_labels(rng, n, 1 + static_cast<std::uint32_t>(rng.below(5)));
        const auto s = score(gt, pred);
        const auto b = brute_force_scores(gt, pred);
        const auto o = oracle::scores(gt, pred);
        CHECK(s.fmi == doctest::Approx(b.fmi).epsilon(1e-9));
        CHECK(s.ari == doctest::Approx(o.ari).epsilon(1e-9));
        CHECK(s.nmi == doctest::Approx(o.nmi).epsilon(1e-9));
        CHECK(s.homogeneity == doctest::Approx(o.h).epsilon(1e-9));
        CHECK(s.completeness == doctest::Approx(o.c).epsilon(1e-9));
        CHECK(s.v_measure == doctest::Approx(b.v_measure).epsilon(1e-9));
        CHECK(s.degenerate_flags == b.degenerate_flags);
    }
    const std::vector<std::uint32_t> big(2001, 1);
    CHECK_THROWS_AS(brute_force_scores(big, big), ConfigError);
}

TEST_CASE("scores stay in range") {
    Rng rng(13);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 2 + rng.below(300);
        const auto s = score(oracle::random_labels(rng, n, 2 + static_cast<std::uint32_t>(rng.below(6))),
                             oracle::random_labels(rng, n, 2 + static_cast<std::uint32_t>(rng.below(6))));
        for (double x : {s.fmi, s.nmi, s.v_measure, s.homogeneity, s.completeness}) {
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
        }
        CHECK(s.ari >= -1.0);
        CHECK(s.ari <= 1.0);
    }
}
