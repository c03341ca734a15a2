#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "creativity/similarity.hpp"
#include "creativity/synthetic.hpp"

using namespace creativity;

TEST(VisualSimilarity, IdenticalVectorsGiveOne) {
    const std::vector<double> f{0.3, -1.2, 4.0};
    EXPECT_EQ(visual_similarity(f, f, 0.7), 1.0);
}

TEST(VisualSimilarity, DistanceSigmaGivesExpMinusHalf) {
    // |a - b| = 5 = sigma, so the kernel is exp(-25 / 50).
    const std::vector<double> a{0.0, 0.0}, b{3.0, 4.0};
    EXPECT_NEAR(visual_similarity(a, b, 5.0), 0.60653065971263342, 1e-15);
    EXPECT_NEAR(visual_similarity(a, b, 5.0), 0.60653, 1e-5);
}

TEST(VisualSimilarity, MonotoneDecreasingInDistance) {
    double prev = 2.0;
    for (double d = 0.0; d <= 40.0; d += 0.5) {
        const std::vector<double> a{0.0}, b{d};
        const double k = visual_similarity(a, b, 3.0);
        EXPECT_LE(k, prev);
        EXPECT_GE(k, 0.0);
        prev = k;
    }
    EXPECT_LT(prev, 1e-30);
}

TEST(VisualSimilarity, Errors) {
    const std::vector<double> a{1.0, 2.0}, b{1.0};
    EXPECT_THROW(visual_similarity(a, b, 1.0), ValidationError);
    EXPECT_THROW(visual_similarity(a, a, 0.0), ValidationError);
    EXPECT_THROW(visual_similarity(a, a, -1.0), ValidationError);
}

TEST(VisualSimilarity, SymmetricAndScaleInvariantProperty) {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> normal(0.0, 2.0);
    std::uniform_real_distribution<double> pos(0.1, 10.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t dim = 1 + trial % 17;
        std::vector<double> x(dim), y(dim);
        for (auto& v : x) v = normal(rng);
        for (auto& v : y) v = normal(rng);
        const double sigma = pos(rng), c = pos(rng);
        const double k = visual_similarity(x, y, sigma);
        EXPECT_EQ(k, visual_similarity(y, x, sigma));
        EXPECT_GT(k, 0.0 - 1e-300);
        EXPECT_LE(k, 1.0);
        std::vector<double> xs(x), ys(y);
        for (auto& v : xs) v *= c;
        for (auto& v : ys) v *= c;
        EXPECT_NEAR(visual_similarity(xs, ys, sigma * c), k, 1e-12 * std::max(1.0, k));
    }
}

TEST(TemporalPrior, ImmediatePredecessorAlwaysIncluded) {
    const std::vector<Year> years{1500, 1510, 1520, 1600};
    for (std::size_t k = 1; k <= 4; ++k) EXPECT_EQ(temporal_prior(2, 3, years, k), 1);
}

TEST(TemporalPrior, LaterOrSameYearIsNeverPrior) {
    const std::vector<Year> years{1500, 1600, 1600, 1700};
    EXPECT_EQ(temporal_prior(3, 1, years, 10), 0);
    EXPECT_EQ(temporal_prior(2, 1, years, 10), 0);
    EXPECT_EQ(temporal_prior(1, 2, years, 10), 0);
}

TEST(TemporalPrior, WindowOfTwo) {
    const std::vector<Year> years{1500, 1510, 1520, 1600};
    EXPECT_EQ(temporal_prior(2, 3, years, 2), 1);  // 1520
    EXPECT_EQ(temporal_prior(1, 3, years, 2), 1);  // 1510
    EXPECT_EQ(temporal_prior(0, 3, years, 2), 0);  // 1500
}

TEST(TemporalPrior, YearTiesBrokenByManifestOrder) {
    // Rows 0 and 1 share 1550; with k = 1 the earlier row wins.
    const std::vector<Year> years{1550, 1550, 1400, 1600};
    EXPECT_EQ(temporal_prior(0, 3, years, 1), 1);
    EXPECT_EQ(temporal_prior(1, 3, years, 1), 0);
    EXPECT_EQ(temporal_prior(1, 3, years, 2), 1);
    EXPECT_EQ(temporal_prior(2, 3, years, 2), 0);
}

TEST(TemporalPrior, RejectsBadIndices) {
    const std::vector<Year> years{1500, 1600};
    EXPECT_THROW(temporal_prior(0, 0, years, 1), ValidationError);
    EXPECT_THROW(temporal_prior(0, 5, years, 1), ValidationError);
}

TEST(TemporalOrder, WindowMatchesPairwisePrior) {
    const auto corpus = synthetic::random_corpus(120, 1, 3, 1500, 1530);  // many year ties
    const auto years = corpus.years();
    const TemporalOrder order(years);
    for (std::size_t k : {1u, 3u, 10u, 200u}) {
        for (NodeIndex j = 0; j < years.size(); ++j) {
            std::vector<int> in_window(years.size(), 0);
            for (auto i : order.prior_window(j, k)) in_window[i] = 1;
            for (NodeIndex i = 0; i < years.size(); ++i) {
                if (i == j) continue;
                ASSERT_EQ(in_window[i], temporal_prior(i, j, years, k)) << "i=" << i << " j=" << j << " k=" << k;
            }
        }
    }
}
