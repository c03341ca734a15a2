#pragma once

#include <span>
#include <string>
#include <string_view>

#include "creativity/cin.hpp"
#include "creativity/graph.hpp"
#include "creativity/model.hpp"
#include "creativity/scoring.hpp"
#include "creativity/similarity.hpp"

namespace creativity {

struct GraphStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t cin_edges = 0;
    BalanceStats balance;
    double reversed_fraction = 0.0;
    std::size_t dangling = 0;
    std::size_t dangling_prior = 0;
    std::size_t dangling_subsequent = 0;
};

/// Everything produced by one single-aspect scoring run.
struct AspectRun {
    std::string aspect;
    double sigma = 0.0;
    GraphStats stats;
    ScoreVector scores;
};

/// sigma for an aspect: the configured value, or the median pairwise distance.
inline double resolve_sigma(const FeatureSet& features, const RunConfig& cfg) {
    if (auto fixed = cfg.sigma_for(features.aspect())) return *fixed;
    return estimate_sigma(features, cfg.seed);
}

inline SimilarityParams similarity_params(double sigma, const RunConfig& cfg) {
    return {sigma, cfg.temporal_prior, cfg.temporal_window_k};
}

/// Scores a CIN according to cfg.scoring and cfg.solver.
inline ScoreVector score_network(const ImplicationNetwork& cin, const RunConfig& cfg, GraphStats* stats = nullptr) {
    if (cfg.scoring == ScoringMode::split) {
        const auto prior = normalize(cin, EdgeFilter::prior);
        const auto subseq = normalize(cin, EdgeFilter::subsequent);
        if (stats) {
            stats->dangling_prior = prior.dangling().size();
            stats->dangling_subsequent = subseq.dangling().size();
        }
        return cfg.solver == SolverKind::closed_form
                   ? solve_split_closed_form(prior, subseq, cfg.alpha, cfg.beta)
                   : solve_split(prior, subseq, cfg.alpha, cfg.beta, cfg.tol, cfg.max_iters);
    }
    const auto op = normalize(cin, EdgeFilter::all);
    if (stats) stats->dangling = op.dangling().size();
    return cfg.solver == SolverKind::closed_form ? solve_closed_form(op, cfg.alpha)
                                                 : solve_power(op, cfg.alpha, cfg.tol, cfg.max_iters);
}

/// Full pipeline for one aspect with a fixed sigma: graph, balancing, CIN, scores.
inline AspectRun score_aspect(std::span<const Year> years, const FeatureSet& features, const RunConfig& cfg,
                              double sigma) {
    cfg.validate();
    AspectRun run;
    run.aspect = features.aspect();
    run.sigma = sigma;

    // The graph is released once the network exists; only one of them is held at scale.
    auto cin = [&] {
        const auto graph = build_graph(years, features, similarity_params(sigma, cfg), cfg.K);
        run.stats.nodes = graph.node_count();
        run.stats.edges = graph.edge_count();
        // With no edges every column is dangling and the scores are uniform.
        if (graph.edge_count() == 0) return ImplicationNetwork::from_edges(years, {});
        const auto m = compute_threshold(graph, BalanceSpec::from(cfg), years);
        return build_implication_network(graph, m, years, cfg.balance_node);
    }();
    run.stats.cin_edges = cin.edge_count();
    run.stats.balance = cin.stats();
    if (run.stats.edges > 0)
        run.stats.reversed_fraction =
            static_cast<double>(cin.stats().reversed) / static_cast<double>(run.stats.edges);
    run.scores = score_network(cin, cfg, &run.stats);
    return run;
}

inline AspectRun score_aspect(const Corpus& corpus, std::string_view aspect, const RunConfig& cfg) {
    if (corpus.empty()) throw ValidationError("cannot score an empty corpus");
    const auto& features = corpus.aspect(aspect);
    return score_aspect(corpus.years(), features, cfg, resolve_sigma(features, cfg));
}

}  // namespace creativity
