#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "creativity/error.hpp"
#include "creativity/graph.hpp"
#include "creativity/model.hpp"

namespace creativity {

struct BalanceSpec {
    BalancingMode mode = BalancingMode::global;
    double percentile_p = 50.0;
    int local_window_years = 50;
    std::size_t min_local_sample = 20;

    static BalanceSpec from(const RunConfig& cfg) {
        return {cfg.balancing_mode, cfg.percentile_p, cfg.local_window_years, cfg.min_local_sample};
    }

    void validate() const {
        // p = 100 is accepted here (threshold = max weight); run configs keep p < 100.
        if (!(percentile_p > 0.0 && percentile_p <= 100.0))
            throw ConfigError("percentile_p must lie in (0,100]");
        if (local_window_years <= 0) throw ConfigError("local_window_years must be positive");
        if (min_local_sample == 0) throw ConfigError("min_local_sample must be positive");
    }
};

enum class EdgeLabel : unsigned char { prior, subsequent };

inline std::string_view to_string(EdgeLabel l) { return l == EdgeLabel::prior ? "prior" : "subsequent"; }

/// Label of a CIN edge u->v: subsequent iff v is dated after u.
inline EdgeLabel label_for(Year src_year, Year dst_year) noexcept {
    return dst_year > src_year ? EdgeLabel::subsequent : EdgeLabel::prior;
}

struct CinEdge {
    NodeIndex src;
    NodeIndex dst;
    double weight;
    EdgeLabel label;

    friend bool operator==(const CinEdge&, const CinEdge&) = default;
};

/// How the original similarity edges were mapped into the network.
struct BalanceStats {
    std::size_t kept = 0;
    std::size_t reversed = 0;
    std::size_t dropped = 0;
};

/// Creativity Implication Network: non-negative digraph whose edge u->v means
/// u collects creativity from v. Edges are labelled prior/subsequent by date.
class ImplicationNetwork {
public:
    ImplicationNetwork() = default;

    std::size_t node_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<CinEdge>& edges() const noexcept { return edges_; }
    const BalanceStats& stats() const noexcept { return stats_; }

    /// Builds a network directly from edges, labelling each from `years`.
    static ImplicationNetwork from_edges(std::span<const Year> years, const std::vector<WeightedEdge>& edges) {
        ImplicationNetwork net;
        net.n_ = years.size();
        for (const auto& [u, v, w] : edges) {
            if (u >= net.n_ || v >= net.n_) throw ValidationError("CIN edge endpoint out of range");
            if (u == v) throw ValidationError("CIN self edge");
            if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("CIN weights must be positive");
            net.edges_.push_back({u, v, w, label_for(years[u], years[v])});
        }
        auto sorted = net.edges_;
        std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) {
            return a.src != b.src ? a.src < b.src : a.dst < b.dst;
        });
        for (std::size_t k = 1; k < sorted.size(); ++k)
            if (sorted[k].src == sorted[k - 1].src && sorted[k].dst == sorted[k - 1].dst)
                throw ValidationError("duplicate CIN edge");
        net.stats_.kept = net.edges_.size();
        return net;
    }

private:
    friend inline ImplicationNetwork build_implication_network(const PaintingGraph&, std::span<const double>,
                                                               std::span<const Year>, BalanceNode);

    std::size_t n_ = 0;
    std::vector<CinEdge> edges_;
    BalanceStats stats_;
};

namespace detail {

/// Nearest-rank percentile (no interpolation). Reorders `values`.
inline double nearest_rank(std::vector<double>& values, double p) {
    const std::size_t n = values.size();
    auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) / 100.0 - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, n);
    std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
    return values[rank - 1];
}

}  // namespace detail

/// Per-node balancing threshold m(i).
inline std::vector<double> compute_threshold(const PaintingGraph& graph, const BalanceSpec& spec,
                                             std::span<const Year> years) {
    spec.validate();
    const std::size_t n = graph.node_count();
    if (years.size() != n) throw ValidationError("compute_threshold: years do not match graph size");
    if (graph.edge_count() == 0) throw ValidationError("compute_threshold: graph has no edges");

    std::vector<double> all(graph.weights().begin(), graph.weights().end());
    const double global = detail::nearest_rank(all, spec.percentile_p);
    std::vector<double> m(n, global);
    if (spec.mode == BalancingMode::global) return m;

    struct DatedWeight {
        Year src_year;
        Year dst_year;
        double w;
    };
    std::vector<DatedWeight> dated;
    dated.reserve(graph.edge_count());
    graph.for_each_edge([&](NodeIndex s, NodeIndex d, double w) { dated.push_back({years[s], years[d], w}); });
    std::sort(dated.begin(), dated.end(), [](auto& a, auto& b) { return a.src_year < b.src_year; });

    std::vector<Year> distinct(years.begin(), years.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    const long long W = spec.local_window_years;
    std::vector<double> sample;
    std::vector<std::pair<Year, double>> per_year;
    per_year.reserve(distinct.size());
    for (Year y : distinct) {
        const long long lo = y - W, hi = y + W;
        auto first = std::lower_bound(dated.begin(), dated.end(), lo,
                                      [](const DatedWeight& e, long long v) { return e.src_year < v; });
        sample.clear();
        for (auto it = first; it != dated.end() && it->src_year <= hi; ++it)
            if (it->dst_year <= hi) sample.push_back(it->w);
        const double value = sample.size() >= spec.min_local_sample
                                 ? detail::nearest_rank(sample, spec.percentile_p)
                                 : global;
        per_year.emplace_back(y, value);
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto it = std::lower_bound(per_year.begin(), per_year.end(), years[i],
                                   [](const auto& e, Year v) { return e.first < v; });
        m[i] = it->second;
    }
    return m;
}

/// Applies B(w) = w - m(node) to every similarity edge, where node is the edge's
/// destination (default) or source. Positive results keep the edge, negative ones
/// reverse it with weight -B, zero drops it.
inline ImplicationNetwork build_implication_network(const PaintingGraph& graph, std::span<const double> m,
                                                    std::span<const Year> years,
                                                    BalanceNode node = BalanceNode::destination) {
    const std::size_t n = graph.node_count();
    if (m.size() != n) throw ValidationError("build_implication_network: threshold size mismatch");
    if (years.size() != n) throw ValidationError("build_implication_network: years size mismatch");

    ImplicationNetwork net;
    net.n_ = n;
    net.edges_.reserve(graph.edge_count());
    graph.for_each_edge([&](NodeIndex i, NodeIndex j, double w) {
        const double b = w - m[node == BalanceNode::destination ? j : i];
        if (b > 0.0) {
            net.edges_.push_back({i, j, b, label_for(years[i], years[j])});
            ++net.stats_.kept;
        } else if (b < 0.0) {
            net.edges_.push_back({j, i, -b, label_for(years[j], years[i])});
            ++net.stats_.reversed;
        } else {
            ++net.stats_.dropped;
        }
    });
    return net;
}

}  // namespace creativity
