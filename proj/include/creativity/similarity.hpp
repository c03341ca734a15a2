#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "creativity/distance.hpp"
#include "creativity/error.hpp"
#include "creativity/model.hpp"

namespace creativity {

struct SimilarityParams {
    double sigma = 1.0;
    TemporalPrior temporal_prior = TemporalPrior::none;
    std::size_t temporal_window_k = 500;

    void validate() const {
        if (!(sigma > 0.0 && std::isfinite(sigma))) throw ConfigError("sigma must be positive");
        if (temporal_window_k == 0) throw ConfigError("temporal_window_k must be positive");
    }
};

/// Unnormalized isotropic Gaussian kernel exp(-|a-b|^2 / (2 sigma^2)).
inline double visual_similarity(std::span<const double> a, std::span<const double> b, double sigma) {
    if (a.size() != b.size()) {
        throw ValidationError("visual_similarity: dimension mismatch (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    }
    if (!(sigma > 0.0)) throw ValidationError("visual_similarity: sigma must be positive");
    return gaussian_from_squared(squared_distance(a, b), 2.0 * sigma * sigma);
}

/// Nodes ordered by (year ascending, index descending). For any node j the
/// strictly earlier nodes form a prefix of this order, and the last k entries of
/// that prefix are j's k nearest prior temporal neighbours (latest year first,
/// earlier manifest row first among equal years).
class TemporalOrder {
public:
    explicit TemporalOrder(std::span<const Year> years) : years_(years.begin(), years.end()) {
        order_.resize(years_.size());
        std::iota(order_.begin(), order_.end(), NodeIndex{0});
        std::sort(order_.begin(), order_.end(), [&](NodeIndex a, NodeIndex b) {
            if (years_[a] != years_[b]) return years_[a] < years_[b];
            return a > b;
        });
        sorted_years_.reserve(order_.size());
        for (auto v : order_) sorted_years_.push_back(years_[v]);
    }

    std::size_t size() const noexcept { return order_.size(); }
    std::span<const NodeIndex> order() const noexcept { return order_; }
    Year year(NodeIndex i) const noexcept { return years_[i]; }

    /// All nodes dated strictly before `year`.
    std::span<const NodeIndex> strictly_before(Year year) const noexcept {
        auto end = std::lower_bound(sorted_years_.begin(), sorted_years_.end(), year);
        return {order_.data(), static_cast<std::size_t>(end - sorted_years_.begin())};
    }

    /// The k temporal neighbours strictly prior to node j.
    std::span<const NodeIndex> prior_window(NodeIndex j, std::size_t k) const noexcept {
        auto prefix = strictly_before(years_[j]);
        if (prefix.size() <= k) return prefix;
        return prefix.subspan(prefix.size() - k);
    }

private:
    std::vector<Year> years_;
    std::vector<NodeIndex> order_;
    std::vector<Year> sorted_years_;
};

/// 1 iff artifact i is among the k temporal neighbours strictly prior to j.
inline int temporal_prior(NodeIndex i, NodeIndex j, std::span<const Year> years, std::size_t k) {
    const std::size_t n = years.size();
    if (i >= n || j >= n) throw ValidationError("temporal_prior: index out of bounds");
    if (i == j) throw ValidationError("temporal_prior: i and j must differ");
    if (years[i] >= years[j]) return 0;
    // Count prior nodes ranked ahead of i: later year, or same year and earlier row.
    std::size_t ahead = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (years[v] >= years[j] || v == i) continue;
        if (years[v] > years[i] || (years[v] == years[i] && v < i)) ++ahead;
    }
    return ahead < k ? 1 : 0;
}

inline int temporal_prior(NodeIndex i, NodeIndex j, const Corpus& corpus, std::size_t k) {
    return temporal_prior(i, j, corpus.years(), k);
}

}  // namespace creativity
