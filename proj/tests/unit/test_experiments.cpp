#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "creativity/experiments.hpp"
#include "creativity/synthetic.hpp"

using namespace creativity;

namespace {

/// Sparse graphs as in large collections: each work keeps ~5% of its predecessors.
RunConfig sparse_config() {
    RunConfig cfg;
    cfg.K = 25;
    return cfg;
}

TimeMachineSpec spec_for(const std::string& group, Move move, std::optional<int> mean, std::uint64_t seed) {
    TimeMachineSpec s;
    s.group = GroupSelector::parse(group);
    s.move = move;
    s.move_mean = mean;
    s.seed = seed;
    return s;
}

double pooled_trial_std(const TimeMachineReport& r) {
    std::vector<double> g;
    for (const auto& run : r.runs)
        for (const auto& t : run.trials) g.push_back(t.gain_pct);
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    double ss = 0.0;
    for (double x : g) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(g.size() - 1));
}

}  // namespace

TEST(TimeMachine, LateInnovatorsGainWhenMovedBack) {
    const auto corpus = synthetic::time_machine_corpus(3);
    const auto r = run_time_machine(corpus, sparse_config(), spec_for("style:innovation", Move::back, 1600, 3));
    ASSERT_EQ(r.runs.size(), 10u);
    for (const auto& run : r.runs) EXPECT_GT(run.mean_gain, 0.0) << "run " << run.run;
    EXPECT_GT(r.mean_gain, 0.0);
    EXPECT_TRUE(r.converged);
}

TEST(TimeMachine, ArchetypesLoseWhenMovedForward) {
    const auto corpus = synthetic::time_machine_corpus(3);
    const auto r = run_time_machine(corpus, sparse_config(), spec_for("style:archetype", Move::forward, 1900, 3));
    for (const auto& run : r.runs) EXPECT_LT(run.mean_gain, 0.0) << "run " << run.run;
}

TEST(TimeMachine, WanderAroundOwnYearIsNearNeutral) {
    const auto corpus = synthetic::time_machine_corpus(3);
    const auto r = run_time_machine(corpus, sparse_config(), spec_for("style:background", Move::wander, {}, 3));
    EXPECT_LT(std::abs(r.mean_gain), pooled_trial_std(r));
    for (const auto& run : r.runs)
        for (const auto& t : run.trials) EXPECT_LT(std::abs(t.new_year - t.original_year), 400);
}

TEST(TimeMachine, TrialsAreConsistentWithRuns) {
    const auto corpus = synthetic::time_machine_corpus(5);
    auto spec = spec_for("style:imitation", Move::back, 1600, 9);
    spec.n_runs = 4;
    spec.n_test = 7;
    spec.min_year = 1550;
    spec.max_year = 1650;
    const auto r = run_time_machine(corpus, sparse_config(), spec);
    ASSERT_EQ(r.runs.size(), 4u);
    std::vector<double> gains;
    for (const auto& run : r.runs) {
        ASSERT_EQ(run.trials.size(), 7u);
        std::vector<NodeIndex> nodes;
        double total = 0.0;
        std::size_t up = 0;
        for (const auto& t : run.trials) {
            nodes.push_back(t.node);
            EXPECT_EQ(corpus.artifact(t.node).style, "imitation");
            EXPECT_EQ(t.original_year, corpus.artifact(t.node).year);
            EXPECT_GE(t.new_year, 1550);
            EXPECT_LE(t.new_year, 1650);
            EXPECT_DOUBLE_EQ(t.gain_pct, (t.new_score - t.base_score) / t.base_score * 100.0);
            EXPECT_TRUE(std::isfinite(t.gain_pct));
            total += t.gain_pct;
            up += t.new_score > t.base_score;
        }
        std::sort(nodes.begin(), nodes.end());
        EXPECT_EQ(std::adjacent_find(nodes.begin(), nodes.end()), nodes.end()) << "sampled with replacement";
        EXPECT_DOUBLE_EQ(run.mean_gain, total / 7.0);
        EXPECT_DOUBLE_EQ(run.pct_increase, 100.0 * static_cast<double>(up) / 7.0);
        gains.push_back(run.mean_gain);
    }
    const double mean = std::accumulate(gains.begin(), gains.end(), 0.0) / 4.0;
    EXPECT_NEAR(r.mean_gain, mean, 1e-12);
    double ss = 0.0;
    for (double g : gains) ss += (g - mean) * (g - mean);
    EXPECT_NEAR(r.std_gain, std::sqrt(ss / 3.0), 1e-12);
}

TEST(TimeMachine, BaselineMatchesStandaloneScoring) {
    const auto corpus = synthetic::time_machine_corpus(2);
    auto spec = spec_for("style:innovation", Move::back, 1600, 1);
    spec.n_runs = 2;
    const auto r = run_time_machine(corpus, sparse_config(), spec);
    const auto base = score_aspect(corpus, "visual", sparse_config());
    for (const auto& run : r.runs)
        for (const auto& t : run.trials) EXPECT_EQ(t.base_score, base.scores[t.node]);
}

TEST(TimeMachine, DeterministicForFixedSeed) {
    const auto corpus = synthetic::time_machine_corpus(4);
    auto spec = spec_for("style:innovation", Move::back, 1600, 77);
    spec.n_runs = 3;
    const auto a = run_time_machine(corpus, sparse_config(), spec);
    const auto b = run_time_machine(corpus, sparse_config(), spec);
    ASSERT_EQ(a.runs.size(), b.runs.size());
    for (std::size_t r = 0; r < a.runs.size(); ++r) {
        ASSERT_EQ(a.runs[r].trials.size(), b.runs[r].trials.size());
        for (std::size_t k = 0; k < a.runs[r].trials.size(); ++k) {
            EXPECT_EQ(a.runs[r].trials[k].node, b.runs[r].trials[k].node);
            EXPECT_EQ(a.runs[r].trials[k].new_year, b.runs[r].trials[k].new_year);
            EXPECT_EQ(a.runs[r].trials[k].new_score, b.runs[r].trials[k].new_score);
        }
    }
    EXPECT_EQ(a.mean_gain, b.mean_gain);
    EXPECT_EQ(a.std_pct, b.std_pct);

    spec.seed = 78;
    const auto c = run_time_machine(corpus, sparse_config(), spec);
    EXPECT_NE(a.mean_gain, c.mean_gain);
}

TEST(TimeMachine, SelectorAndSizeErrors) {
    const auto corpus = synthetic::time_machine_corpus(1);
    EXPECT_THROW(run_time_machine(corpus, sparse_config(), spec_for("style:nobody", Move::back, 1600, 1)),
                 ValidationError);
    auto spec = spec_for("ids:archetype-0,archetype-1", Move::back, 1600, 1);
    EXPECT_THROW(run_time_machine(corpus, sparse_config(), spec), ValidationError);
    spec.n_test = 2;
    spec.n_runs = 1;
    EXPECT_NO_THROW(run_time_machine(corpus, sparse_config(), spec));
    EXPECT_THROW(run_time_machine(corpus, sparse_config(), spec_for("ids:nope", Move::back, 1600, 1)),
                 ValidationError);

    const auto small = synthetic::random_corpus(10, 3, 1);
    auto all = spec_for("style:random", Move::back, 1600, 1);
    EXPECT_THROW(run_time_machine(small, sparse_config(), all), ValidationError);
}

TEST(TimeMachine, NoticesForTemporalPriorAndLargeSamples) {
    const auto corpus = synthetic::time_machine_corpus(1);
    auto spec = spec_for("style:innovation", Move::back, 1600, 1);
    spec.n_runs = 1;
    auto cfg = sparse_config();
    const auto plain = run_time_machine(corpus, cfg, spec);
    ASSERT_EQ(plain.notices.size(), 1u);  // 10 of 500 is 2%
    EXPECT_NE(plain.notices[0].find("1%"), std::string::npos);
    spec.n_test = 5;
    EXPECT_TRUE(run_time_machine(corpus, cfg, spec).notices.empty());
    cfg.temporal_prior = TemporalPrior::window;
    cfg.temporal_window_k = 50;
    EXPECT_EQ(run_time_machine(corpus, cfg, spec).notices.size(), 1u);
}

TEST(TimeMachineSpec, ParsesKeyValues) {
    const auto s = parse_time_machine_spec(
        "group = ids:a, b ,c\nmove = forward\nmove_mean = 1900\nmove_std = 25\nn_test = 2\nn_runs = 3\nseed = 9\n"
        "min_year = 1400\nmax_year = 1950\n");
    EXPECT_EQ(s.group.field, GroupSelector::Field::ids);
    EXPECT_EQ(s.group.ids, (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(s.move, Move::forward);
    EXPECT_EQ(s.move_mean, 1900);
    EXPECT_EQ(s.move_std, 25.0);
    EXPECT_EQ(s.n_test, 2u);
    EXPECT_EQ(s.n_runs, 3u);
    EXPECT_EQ(s.seed, 9u);
    EXPECT_EQ(s.min_year, 1400);
    EXPECT_EQ(s.max_year, 1950);

    const auto w = parse_time_machine_spec("group = style:Baroque\nmove = wander\n");
    EXPECT_EQ(w.n_test, 10u);
    EXPECT_EQ(w.n_runs, 10u);
    EXPECT_EQ(w.move_std, 50.0);
    EXPECT_FALSE(w.move_mean);

    EXPECT_THROW(parse_time_machine_spec("move = back\n"), ConfigError);
    EXPECT_THROW(parse_time_machine_spec("group = style:x\nmove = back\n"), ConfigError);
    EXPECT_THROW(parse_time_machine_spec("group = colour:red\nmove = wander\n"), ConfigError);
    EXPECT_THROW(parse_time_machine_spec("group = style:x\nmove = sideways\n"), ConfigError);
    EXPECT_THROW(parse_time_machine_spec("group = style:x\nmove = wander\nmove_std = 0\n"), ConfigError);
    EXPECT_THROW(parse_time_machine_spec("group = style:x\nmove = wander\nn_test = 0\n"), ConfigError);
    EXPECT_THROW(parse_time_machine_spec("group = style:x\nmove = wander\ncolour = 3\n"), ConfigError);
}

TEST(MultiAspect, SingleAspectEqualsPipeline) {
    const auto corpus = synthetic::random_corpus(80, 5, 4);
    RunConfig cfg;
    cfg.K = 15;
    const auto runs = run_multi_aspect(corpus, cfg);
    ASSERT_EQ(runs.size(), 1u);
    EXPECT_EQ(runs[0].scores.scores, score_aspect(corpus, "visual", cfg).scores.scores);
    EXPECT_THROW(run_multi_aspect(corpus, cfg, {"missing"}), ValidationError);
}

TEST(MultiAspect, IdenticalAndPermutedFeaturesGiveIdenticalScores) {
    const auto base = synthetic::random_corpus(90, 6, 12);
    const auto& f = base.aspects().front();
    std::vector<double> same(f.values().begin(), f.values().end()), permuted(same.size());
    const std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t d = 0; d < 6; ++d) permuted[i * 6 + d] = same[i * 6 + perm[d]];
    const Corpus corpus(base.artifacts(),
                        {FeatureSet("a", 6, same), FeatureSet("b", 6, same), FeatureSet("c", 6, permuted)});
    RunConfig cfg;
    cfg.K = 20;
    const auto runs = run_multi_aspect(corpus, cfg);
    ASSERT_EQ(runs.size(), 3u);
    EXPECT_EQ(runs[0].scores.scores, runs[1].scores.scores);
    EXPECT_EQ(runs[0].sigma, runs[2].sigma);
    for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_NEAR(runs[0].scores[i], runs[2].scores[i], 1e-12);

    const auto only_c = run_multi_aspect(corpus, cfg, {"c"});
    ASSERT_EQ(only_c.size(), 1u);
    EXPECT_EQ(only_c[0].aspect, "c");
}
