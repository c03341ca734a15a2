#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "creativity/distance.hpp"
#include "creativity/error.hpp"
#include "creativity/model.hpp"
#include "creativity/parallel.hpp"
#include "creativity/similarity.hpp"

namespace creativity {

struct WeightedEdge {
    NodeIndex src;
    NodeIndex dst;
    double weight;

    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Temporally directed similarity graph, stored compressed by destination with
/// a secondary by-source index. Incoming lists are sorted by source index.
class PaintingGraph {
public:
    PaintingGraph() = default;

    std::size_t node_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return src_.size(); }

    struct Incoming {
        std::span<const NodeIndex> sources;
        std::span<const double> weights;
    };

    Incoming incoming(NodeIndex j) const noexcept {
        const auto b = in_offsets_[j], e = in_offsets_[j + 1];
        return {{src_.data() + b, e - b}, {weight_.data() + b, e - b}};
    }

    /// Edge ids (positions in the by-destination arrays) leaving node i, by destination.
    std::span<const std::uint32_t> outgoing_edges(NodeIndex i) const noexcept {
        const auto b = out_offsets_[i], e = out_offsets_[i + 1];
        return {out_edges_.data() + b, e - b};
    }

    std::size_t in_degree(NodeIndex j) const noexcept { return in_offsets_[j + 1] - in_offsets_[j]; }
    std::size_t out_degree(NodeIndex i) const noexcept { return out_offsets_[i + 1] - out_offsets_[i]; }

    NodeIndex edge_src(std::size_t e) const noexcept { return src_[e]; }
    NodeIndex edge_dst(std::size_t e) const noexcept { return dst_of_edge(e); }
    double edge_weight(std::size_t e) const noexcept { return weight_[e]; }
    std::span<const double> weights() const noexcept { return weight_; }

    /// Calls f(src, dst, weight) for every edge, grouped by destination.
    template <typename F>
    void for_each_edge(F&& f) const {
        for (NodeIndex j = 0; j < n_; ++j)
            for (auto e = in_offsets_[j]; e < in_offsets_[j + 1]; ++e) f(src_[e], j, weight_[e]);
    }

    std::vector<WeightedEdge> edges() const {
        std::vector<WeightedEdge> out;
        out.reserve(edge_count());
        for_each_edge([&](NodeIndex s, NodeIndex d, double w) { out.push_back({s, d, w}); });
        return out;
    }

    /// Builds a graph from an explicit edge list. Rejects self edges, non-positive
    /// weights, duplicate pairs and edges in both directions between two nodes.
    static PaintingGraph from_edges(std::size_t n, std::vector<WeightedEdge> edges) {
        for (const auto& e : edges) {
            if (e.src >= n || e.dst >= n) throw ValidationError("edge endpoint out of range");
            if (e.src == e.dst) throw ValidationError("self edge on node " + std::to_string(e.src));
            if (!(e.weight > 0.0) || !std::isfinite(e.weight))
                throw ValidationError("edge weights must be positive and finite");
        }
        std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
            return a.dst != b.dst ? a.dst < b.dst : a.src < b.src;
        });
        PaintingGraph g;
        g.n_ = n;
        g.in_offsets_.assign(n + 1, 0);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (k > 0 && edges[k].src == edges[k - 1].src && edges[k].dst == edges[k - 1].dst)
                throw ValidationError("duplicate edge");
            ++g.in_offsets_[edges[k].dst + 1];
            g.src_.push_back(edges[k].src);
            g.weight_.push_back(edges[k].weight);
        }
        for (std::size_t j = 0; j < n; ++j) g.in_offsets_[j + 1] += g.in_offsets_[j];
        g.finish();
        for (const auto& e : edges) {
            auto in = g.incoming(e.src);
            if (std::binary_search(in.sources.begin(), in.sources.end(), e.dst))
                throw ValidationError("graph must be antisymmetric");
        }
        return g;
    }

private:
    friend inline PaintingGraph build_graph(std::span<const Year>, const FeatureSet&, const SimilarityParams&,
                                     std::size_t);

    NodeIndex dst_of_edge(std::size_t e) const noexcept {
        auto it = std::upper_bound(in_offsets_.begin(), in_offsets_.end(), e);
        return static_cast<NodeIndex>(it - in_offsets_.begin() - 1);
    }

    void finish() {
        if (src_.size() > std::numeric_limits<std::uint32_t>::max())
            throw ValidationError("graph has too many edges for 32-bit edge ids");
        out_offsets_.assign(n_ + 1, 0);
        for (auto s : src_) ++out_offsets_[s + 1];
        for (std::size_t i = 0; i < n_; ++i) out_offsets_[i + 1] += out_offsets_[i];
        out_edges_.resize(src_.size());
        std::vector<std::size_t> cursor(out_offsets_.begin(), out_offsets_.end() - 1);
        for (std::size_t e = 0; e < src_.size(); ++e)
            out_edges_[cursor[src_[e]]++] = static_cast<std::uint32_t>(e);
    }

    std::size_t n_ = 0;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<NodeIndex> src_;
    std::vector<double> weight_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<std::uint32_t> out_edges_;
};

namespace detail {

struct Candidate {
    double x;  // d^2 / (2 sigma^2)
    NodeIndex src;
};

/// Picks the top-k incoming edges by weight (ties: smaller source index) from
/// `cands`, writing (src, weight) pairs sorted by source. Zero weights are dropped.
inline std::size_t select_top_k(std::vector<Candidate>& cands, std::size_t k, NodeIndex* out_src,
                                double* out_w) {
    auto by_x = [](const Candidate& a, const Candidate& b) {
        return a.x < b.x || (a.x == b.x && a.src < b.src);
    };
    const std::size_t take = std::min(k, cands.size());
    if (take == 0) return 0;
    if (cands.size() > take) std::nth_element(cands.begin(), cands.begin() + (take - 1), cands.end(), by_x);

    struct Chosen {
        NodeIndex src;
        double w;
    };
    std::vector<Chosen> chosen;
    chosen.reserve(take);
    double w_min = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < take; ++c) {
        const double w = std::exp(-cands[c].x);
        chosen.push_back({cands[c].src, w});
        w_min = std::min(w_min, w);
    }

    // Distinct exponents can round to the same weight; resolve such ties across
    // the cut by source index so the result matches a weight-ordered selection.
    if (cands.size() > take && w_min > 0.0) {
        std::vector<Chosen> rivals;
        const bool normal = w_min >= std::numeric_limits<double>::min();
        const double x_limit = cands[take - 1].x + 1e-9;
        for (std::size_t c = take; c < cands.size(); ++c) {
            if (normal && cands[c].x > x_limit) continue;
            const double w = std::exp(-cands[c].x);
            if (w == w_min) rivals.push_back({cands[c].src, w});
        }
        if (!rivals.empty()) {
            std::vector<Chosen> kept;
            for (const auto& ch : chosen) {
                if (ch.w > w_min) kept.push_back(ch);
                else rivals.push_back(ch);
            }
            std::sort(rivals.begin(), rivals.end(), [](auto& a, auto& b) { return a.src < b.src; });
            for (std::size_t r = 0; kept.size() < take; ++r) kept.push_back(rivals[r]);
            chosen.swap(kept);
        }
    }

    std::sort(chosen.begin(), chosen.end(), [](auto& a, auto& b) { return a.src < b.src; });
    std::size_t written = 0;
    for (const auto& ch : chosen) {
        if (ch.w <= 0.0) continue;
        out_src[written] = ch.src;
        out_w[written] = ch.w;
        ++written;
    }
    return written;
}

}  // namespace detail

/// Builds the painting graph: edges run from strictly earlier to later artifacts,
/// weighted by visual similarity (times the window prior), keeping each node's
/// K strongest incoming edges.
inline PaintingGraph build_graph(std::span<const Year> years, const FeatureSet& features,
                                 const SimilarityParams& params, std::size_t K) {
    const std::size_t n = years.size();
    if (n == 0) throw ValidationError("build_graph: empty corpus");
    if (features.rows() != n) throw ValidationError("build_graph: feature rows do not match corpus size");
    if (K == 0) throw ConfigError("K must be positive");
    params.validate();

    const TemporalOrder order(years);
    const double two_sigma_sq = 2.0 * params.sigma * params.sigma;
    const std::size_t slots = std::min(K, n - 1 == 0 ? std::size_t{1} : n - 1);

    PaintingGraph g;
    g.n_ = n;
    g.src_.resize(n * slots);
    g.weight_.resize(n * slots);
    std::vector<std::size_t> count(n, 0);

    parallel_for(n, 64, [&](std::size_t begin, std::size_t end) {
        std::vector<detail::Candidate> cands;
        for (std::size_t j = begin; j < end; ++j) {
            const auto node = static_cast<NodeIndex>(j);
            const auto pool = params.temporal_prior == TemporalPrior::window
                                  ? order.prior_window(node, params.temporal_window_k)
                                  : order.strictly_before(years[j]);
            cands.clear();
            cands.reserve(pool.size());
            const auto fj = features.row(j);
            for (NodeIndex i : pool)
                cands.push_back({squared_distance(features.row(i), fj) / two_sigma_sq, i});
            count[j] = detail::select_top_k(cands, slots, g.src_.data() + j * slots,
                                            g.weight_.data() + j * slots);
        }
    });

    // Compact the fixed-width slots into CSR; offsets never exceed j * slots.
    g.in_offsets_.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t dst = g.in_offsets_[j];
        std::copy_n(g.src_.begin() + j * slots, count[j], g.src_.begin() + dst);
        std::copy_n(g.weight_.begin() + j * slots, count[j], g.weight_.begin() + dst);
        g.in_offsets_[j + 1] = dst + count[j];
    }
    g.src_.resize(g.in_offsets_[n]);
    g.weight_.resize(g.in_offsets_[n]);
    g.src_.shrink_to_fit();
    g.weight_.shrink_to_fit();
    g.finish();
    return g;
}

inline PaintingGraph build_graph(const Corpus& corpus, std::string_view aspect,
                                 const SimilarityParams& params, std::size_t K) {
    if (corpus.empty()) throw ValidationError("build_graph: empty corpus");
    return build_graph(corpus.years(), corpus.aspect(aspect), params, K);
}

}  // namespace creativity
