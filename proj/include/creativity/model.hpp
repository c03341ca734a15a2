#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "creativity/distance.hpp"
#include "creativity/error.hpp"

namespace creativity {

using NodeIndex = std::uint32_t;
using Year = int;

/// One dated artifact. Labels are carried for grouping and reporting only.
struct Artifact {
    std::string id;
    Year year = 0;
    std::string artist;
    std::string style;
    std::string genre;
};

/// Feature vectors of one visual aspect, row-major, one row per artifact.
class FeatureSet {
public:
    FeatureSet() = default;

    FeatureSet(std::string aspect, std::size_t dim, std::vector<double> values)
        : aspect_(std::move(aspect)), dim_(dim), values_(std::move(values)) {
        if (dim_ == 0) {
            throw ValidationError("feature set '" + aspect_ + "': dimension must be positive");
        }
        if (values_.size() % dim_ != 0) {
            throw ValidationError("feature set '" + aspect_ + "': value count is not a multiple of dim");
        }
        for (std::size_t k = 0; k < values_.size(); ++k) {
            if (!std::isfinite(values_[k])) {
                throw ValidationError("feature set '" + aspect_ + "': non-finite value at row " +
                                      std::to_string(k / dim_ + 1) + ", column " +
                                      std::to_string(k % dim_ + 1));
            }
        }
    }

    const std::string& aspect() const noexcept { return aspect_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t rows() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * dim_, dim_};
    }

    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::string aspect_;
    std::size_t dim_ = 0;
    std::vector<double> values_;
};

/// Validated, immutable collection of artifacts with their per-aspect features.
class Corpus {
public:
    Corpus() = default;

    Corpus(std::vector<Artifact> artifacts, std::vector<FeatureSet> aspects)
        : artifacts_(std::move(artifacts)), aspects_(std::move(aspects)) {
        std::unordered_map<std::string, std::size_t> seen;
        seen.reserve(artifacts_.size());
        for (std::size_t i = 0; i < artifacts_.size(); ++i) {
            const auto& id = artifacts_[i].id;
            if (id.empty()) {
                throw ValidationError("row " + std::to_string(i + 1) + ": empty id");
            }
            auto [it, inserted] = seen.emplace(id, i);
            if (!inserted) {
                throw ValidationError("duplicate id '" + id + "' at rows " +
                                      std::to_string(it->second + 1) + " and " +
                                      std::to_string(i + 1));
            }
        }
        index_ = {};
        for (auto& [id, row] : seen) index_.emplace(id, static_cast<NodeIndex>(row));

        std::unordered_set<std::string> names;
        for (const auto& fs : aspects_) {
            if (fs.aspect().empty()) throw ValidationError("aspect name must be non-empty");
            if (!names.insert(fs.aspect()).second) {
                throw ValidationError("aspect '" + fs.aspect() + "' given twice");
            }
            if (fs.rows() != artifacts_.size()) {
                throw ValidationError("row-count mismatch: manifest has " +
                                      std::to_string(artifacts_.size()) + " rows, aspect '" +
                                      fs.aspect() + "' has " + std::to_string(fs.rows()));
            }
        }
        years_.reserve(artifacts_.size());
        for (const auto& a : artifacts_) years_.push_back(a.year);
    }

    std::size_t size() const noexcept { return artifacts_.size(); }
    bool empty() const noexcept { return artifacts_.empty(); }

    const std::vector<Artifact>& artifacts() const noexcept { return artifacts_; }
    const Artifact& artifact(std::size_t i) const { return artifacts_.at(i); }
    std::span<const Year> years() const noexcept { return years_; }

    const std::vector<FeatureSet>& aspects() const noexcept { return aspects_; }

    const FeatureSet* find_aspect(std::string_view name) const noexcept {
        for (const auto& fs : aspects_)
            if (fs.aspect() == name) return &fs;
        return nullptr;
    }

    const FeatureSet& aspect(std::string_view name) const {
        if (const auto* fs = find_aspect(name)) return *fs;
        throw ValidationError("aspect '" + std::string(name) + "' not found");
    }

    std::optional<NodeIndex> index_of(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::vector<Artifact> artifacts_;
    std::vector<FeatureSet> aspects_;
    std::vector<Year> years_;
    std::unordered_map<std::string, NodeIndex> index_;
};

enum class BalancingMode { global, local };
enum class BalanceNode { destination, source };
enum class TemporalPrior { none, window };
enum class SolverKind { power, closed_form };
enum class ScoringMode { combined, split };

/// All tunable parameters of a scoring run.
struct RunConfig {
    std::size_t K = 500;
    double alpha = 0.15;
    double beta = 0.5;
    double percentile_p = 50.0;
    /// Empty means "auto" (median pairwise distance).
    std::optional<double> sigma;
    std::map<std::string, double, std::less<>> sigma_per_aspect;
    BalancingMode balancing_mode = BalancingMode::global;
    BalanceNode balance_node = BalanceNode::destination;
    int local_window_years = 50;
    std::size_t min_local_sample = 20;
    TemporalPrior temporal_prior = TemporalPrior::none;
    std::size_t temporal_window_k = 500;
    SolverKind solver = SolverKind::power;
    ScoringMode scoring = ScoringMode::combined;
    double tol = 1e-10;
    std::size_t max_iters = 1000;
    std::uint64_t seed = 0;

    /// Fixed sigma for an aspect, or nullopt when it must be estimated.
    std::optional<double> sigma_for(std::string_view aspect) const {
        if (auto it = sigma_per_aspect.find(aspect); it != sigma_per_aspect.end()) return it->second;
        return sigma;
    }

    void validate() const {
        auto fail = [](const std::string& msg) { throw ConfigError(msg); };
        if (K == 0) fail("K must be a positive integer");
        if (!(alpha >= 0.0 && alpha <= 1.0)) fail("alpha must lie in [0,1]");
        if (!(beta >= 0.0 && beta <= 1.0)) fail("beta must lie in [0,1]");
        if (!(percentile_p > 0.0 && percentile_p < 100.0)) fail("percentile_p must lie in (0,100)");
        if (sigma && !(*sigma > 0.0 && std::isfinite(*sigma))) fail("sigma must be positive");
        for (const auto& [name, s] : sigma_per_aspect)
            if (!(s > 0.0 && std::isfinite(s))) fail("sigma." + name + " must be positive");
        if (local_window_years <= 0) fail("local_window_years must be a positive integer");
        if (min_local_sample == 0) fail("min_local_sample must be a positive integer");
        if (temporal_window_k == 0) fail("temporal_window_k must be a positive integer");
        if (!(tol > 0.0 && std::isfinite(tol))) fail("tol must be positive");
        if (max_iters == 0) fail("max_iters must be a positive integer");
    }
};

namespace detail {

inline double parse_real(std::string_view key, std::string_view value) {
    std::string s(value);
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + std::string(key) + "': expected a number, got '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(out)) {
        throw ConfigError("key '" + std::string(key) + "': expected a number, got '" + s + "'");
    }
    return out;
}

inline std::uint64_t parse_unsigned(std::string_view key, std::string_view value) {
    std::string s(value);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError("key '" + std::string(key) + "': expected a non-negative integer, got '" +
                          s + "'");
    }
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw ConfigError("key '" + std::string(key) + "': integer out of range");
    }
}

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view key, std::string_view value,
                const std::pair<std::string_view, Enum> (&choices)[N]) {
    for (const auto& [name, e] : choices)
        if (name == value) return e;
    std::string allowed;
    for (const auto& [name, e] : choices) {
        if (!allowed.empty()) allowed += "|";
        allowed += name;
    }
    throw ConfigError("key '" + std::string(key) + "': expected " + allowed + ", got '" +
                      std::string(value) + "'");
}

}  // namespace detail

/// Applies one `key=value` setting. Throws ConfigError for unknown keys or bad values.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
    using namespace detail;
    if (key == "K") {
        cfg.K = parse_unsigned(key, value);
    } else if (key == "alpha") {
        cfg.alpha = parse_real(key, value);
    } else if (key == "beta") {
        cfg.beta = parse_real(key, value);
    } else if (key == "percentile_p") {
        cfg.percentile_p = parse_real(key, value);
    } else if (key == "sigma") {
        if (value == "auto") cfg.sigma.reset();
        else cfg.sigma = parse_real(key, value);
    } else if (key.starts_with("sigma.")) {
        auto aspect = std::string(key.substr(6));
        if (aspect.empty()) throw ConfigError("key 'sigma.': missing aspect name");
        if (value == "auto") cfg.sigma_per_aspect.erase(aspect);
        else cfg.sigma_per_aspect[aspect] = parse_real(key, value);
    } else if (key == "balancing_mode") {
        static constexpr std::pair<std::string_view, BalancingMode> c[] = {
            {"global", BalancingMode::global}, {"local", BalancingMode::local}};
        cfg.balancing_mode = parse_enum(key, value, c);
    } else if (key == "balance_node") {
        static constexpr std::pair<std::string_view, BalanceNode> c[] = {
            {"destination", BalanceNode::destination}, {"source", BalanceNode::source}};
        cfg.balance_node = parse_enum(key, value, c);
    } else if (key == "local_window_years") {
        auto v = parse_unsigned(key, value);
        if (v > 100000) throw ConfigError("local_window_years too large");
        cfg.local_window_years = static_cast<int>(v);
    } else if (key == "min_local_sample") {
        cfg.min_local_sample = parse_unsigned(key, value);
    } else if (key == "temporal_prior") {
        static constexpr std::pair<std::string_view, TemporalPrior> c[] = {
            {"none", TemporalPrior::none}, {"window", TemporalPrior::window}};
        cfg.temporal_prior = parse_enum(key, value, c);
    } else if (key == "temporal_window_k") {
        cfg.temporal_window_k = parse_unsigned(key, value);
    } else if (key == "solver") {
        static constexpr std::pair<std::string_view, SolverKind> c[] = {
            {"power", SolverKind::power}, {"closed_form", SolverKind::closed_form}};
        cfg.solver = parse_enum(key, value, c);
    } else if (key == "scoring") {
        static constexpr std::pair<std::string_view, ScoringMode> c[] = {
            {"combined", ScoringMode::combined}, {"split", ScoringMode::split}};
        cfg.scoring = parse_enum(key, value, c);
    } else if (key == "tol") {
        cfg.tol = parse_real(key, value);
    } else if (key == "max_iters") {
        cfg.max_iters = parse_unsigned(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_unsigned(key, value);
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

inline std::string_view to_string(BalancingMode m) { return m == BalancingMode::global ? "global" : "local"; }
inline std::string_view to_string(BalanceNode m) { return m == BalanceNode::destination ? "destination" : "source"; }
inline std::string_view to_string(TemporalPrior m) { return m == TemporalPrior::none ? "none" : "window"; }
inline std::string_view to_string(SolverKind m) { return m == SolverKind::power ? "power" : "closed_form"; }
inline std::string_view to_string(ScoringMode m) { return m == ScoringMode::combined ? "combined" : "split"; }

/// Median Euclidean distance over a seeded sample of up to `max_pairs` distinct
/// artifact pairs (every pair when the corpus is small enough).
inline double estimate_sigma(const FeatureSet& features, std::uint64_t seed,
                             std::size_t max_pairs = 10000) {
    const std::size_t n = features.rows();
    if (n < 2) throw ValidationError("estimate_sigma needs at least 2 artifacts");

    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (total <= max_pairs) {
        pairs.reserve(total);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::unordered_set<std::uint64_t> taken;
        taken.reserve(max_pairs * 2);
        pairs.reserve(max_pairs);
        while (pairs.size() < max_pairs) {
            std::size_t i = pick(rng), j = pick(rng);
            if (i == j) continue;
            if (i > j) std::swap(i, j);
            if (taken.insert(static_cast<std::uint64_t>(i) * n + j).second) pairs.emplace_back(i, j);
        }
    }

    std::vector<double> dist;
    dist.reserve(pairs.size());
    for (auto [i, j] : pairs) dist.push_back(std::sqrt(squared_distance(features.row(i), features.row(j))));
    std::sort(dist.begin(), dist.end());
    const std::size_t m = dist.size();
    const double median = (m % 2 == 1) ? dist[m / 2] : 0.5 * (dist[m / 2 - 1] + dist[m / 2]);
    if (!(median > 0.0)) {
        throw ValidationError("degenerate feature set '" + features.aspect() +
                              "': median pairwise distance is 0, sigma must be positive");
    }
    return median;
}

}  // namespace creativity

