#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "creativity/cin.hpp"
#include "creativity/error.hpp"
#include "creativity/model.hpp"

namespace creativity {

enum class EdgeFilter { all, prior, subsequent };

/// Column-stochastic operator built from a CIN. Column j holds
/// w~_ij / sum_k w~_kj for the filtered edges i->j; columns with no incoming
/// weight ("dangling") act as the uniform column 1/n.
class StochasticOperator {
public:
    StochasticOperator() = default;

    std::size_t node_count() const noexcept { return n_; }
    std::size_t entry_count() const noexcept { return rows_.size(); }
    std::span<const NodeIndex> dangling() const noexcept { return dangling_; }
    bool is_dangling(NodeIndex j) const noexcept { return col_offsets_[j] == col_offsets_[j + 1]; }

    struct Column {
        std::span<const NodeIndex> rows;
        std::span<const double> values;
    };

    Column column(NodeIndex j) const noexcept {
        const auto b = col_offsets_[j], e = col_offsets_[j + 1];
        return {{rows_.data() + b, e - b}, {values_.data() + b, e - b}};
    }

    /// y = op * x, including the uniform completion of dangling columns.
    void apply(std::span<const double> x, std::span<double> y) const {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            const double xj = x[j];
            for (auto e = col_offsets_[j]; e < col_offsets_[j + 1]; ++e) y[rows_[e]] += values_[e] * xj;
        }
        double dangling_mass = 0.0;
        for (auto j : dangling_) dangling_mass += x[j];
        if (dangling_mass != 0.0) {
            const double share = dangling_mass / static_cast<double>(n_);
            for (auto& v : y) v += share;
        }
    }

    /// Dense n x n matrix, dangling columns filled with 1/n.
    Eigen::MatrixXd to_dense() const {
        const auto n = static_cast<Eigen::Index>(n_);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t j = 0; j < n_; ++j) {
            if (is_dangling(static_cast<NodeIndex>(j))) {
                m.col(static_cast<Eigen::Index>(j)).setConstant(1.0 / static_cast<double>(n_));
                continue;
            }
            for (auto e = col_offsets_[j]; e < col_offsets_[j + 1]; ++e)
                m(rows_[e], static_cast<Eigen::Index>(j)) += values_[e];
        }
        return m;
    }

private:
    friend inline StochasticOperator normalize(const ImplicationNetwork&, EdgeFilter);

    std::size_t n_ = 0;
    std::vector<std::size_t> col_offsets_{0};
    std::vector<NodeIndex> rows_;
    std::vector<double> values_;
    std::vector<NodeIndex> dangling_;
};

/// Column-normalizes the CIN over the chosen edge subset.
inline StochasticOperator normalize(const ImplicationNetwork& cin, EdgeFilter filter = EdgeFilter::all) {
    auto keep = [filter](const CinEdge& e) {
        switch (filter) {
            case EdgeFilter::prior: return e.label == EdgeLabel::prior;
            case EdgeFilter::subsequent: return e.label == EdgeLabel::subsequent;
            default: return true;
        }
    };
    const std::size_t n = cin.node_count();
    StochasticOperator op;
    op.n_ = n;
    op.col_offsets_.assign(n + 1, 0);
    for (const auto& e : cin.edges())
        if (keep(e)) ++op.col_offsets_[e.dst + 1];
    for (std::size_t j = 0; j < n; ++j) op.col_offsets_[j + 1] += op.col_offsets_[j];

    const std::size_t m = op.col_offsets_[n];
    op.rows_.resize(m);
    op.values_.resize(m);
    std::vector<std::size_t> cursor(op.col_offsets_.begin(), op.col_offsets_.end() - 1);
    for (const auto& e : cin.edges()) {
        if (!keep(e)) continue;
        const auto slot = cursor[e.dst]++;
        op.rows_[slot] = e.src;
        op.values_[slot] = e.weight;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const auto b = op.col_offsets_[j], e = op.col_offsets_[j + 1];
        double total = 0.0;
        for (auto k = b; k < e; ++k) total += op.values_[k];
        if (b == e || !(total > 0.0)) {
            op.dangling_.push_back(static_cast<NodeIndex>(j));
            continue;
        }
        for (auto k = b; k < e; ++k) op.values_[k] /= total;
    }
    return op;
}

struct SolverMeta {
    std::string solver;
    std::size_t iterations = 0;
    double residual = 0.0;
    bool converged = true;
    /// Largest |sum(C) - 1| seen over every iterate.
    double worst_sum_error = 0.0;
    /// Smallest min(C) - (1-alpha)/n seen over every iterate.
    double min_floor_slack = std::numeric_limits<double>::infinity();
};

/// Creativity scores, one per artifact, on the probability simplex.
struct ScoreVector {
    std::vector<double> scores;
    SolverMeta meta;

    std::size_t size() const noexcept { return scores.size(); }
    double operator[](std::size_t i) const noexcept { return scores[i]; }
};

namespace detail {

struct WeightedOperator {
    double coefficient;
    const StochasticOperator* op;
};

inline void track_simplex(std::span<const double> c, double alpha, SolverMeta& meta) {
    double sum = 0.0, lo = std::numeric_limits<double>::infinity();
    for (double v : c) {
        sum += v;
        lo = std::min(lo, v);
    }
    const double floor = (1.0 - alpha) / static_cast<double>(c.size());
    meta.worst_sum_error = std::max(meta.worst_sum_error, std::abs(sum - 1.0));
    meta.min_floor_slack = std::min(meta.min_floor_slack, lo - floor);
}

inline void check_common(std::span<const WeightedOperator> terms, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0,1]");
    const std::size_t n = terms.front().op->node_count();
    if (n == 0) throw ValidationError("cannot score an empty network");
    for (const auto& t : terms)
        if (t.op->node_count() != n) throw ValidationError("operators cover different node sets");
}

/// C <- (1-alpha)/n + alpha * sum_t coef_t * op_t C, from the uniform vector.
inline ScoreVector iterate(std::span<const WeightedOperator> terms, double alpha, double tol,
                           std::size_t max_iters, std::string solver_name) {
    check_common(terms, alpha);
    if (!(tol > 0.0)) throw ConfigError("tol must be positive");
    if (max_iters == 0) throw ConfigError("max_iters must be positive");
    const std::size_t n = terms.front().op->node_count();
    const double teleport = (1.0 - alpha) / static_cast<double>(n);

    ScoreVector out;
    out.meta.solver = std::move(solver_name);
    out.meta.converged = false;
    std::vector<double> c(n, 1.0 / static_cast<double>(n)), next(n);
    std::vector<std::vector<double>> partial(terms.size(), std::vector<double>(n));

    for (std::size_t it = 1; it <= max_iters; ++it) {
        for (std::size_t t = 0; t < terms.size(); ++t) terms[t].op->apply(c, partial[t]);
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double mix = terms[0].coefficient * partial[0][i];
            for (std::size_t t = 1; t < terms.size(); ++t) mix += terms[t].coefficient * partial[t][i];
            next[i] = teleport + alpha * mix;
            residual += std::abs(next[i] - c[i]);
        }
        c.swap(next);
        track_simplex(c, alpha, out.meta);
        out.meta.iterations = it;
        out.meta.residual = residual;
        if (residual < tol) {
            out.meta.converged = true;
            break;
        }
    }

    double sum = 0.0;
    for (double v : c) sum += v;
    if (std::abs(sum - 1.0) > 1e-13)
        for (auto& v : c) v /= sum;
    out.scores = std::move(c);
    return out;
}

inline ScoreVector dense_solve(std::span<const WeightedOperator> terms, double alpha, std::string solver_name) {
    check_common(terms, alpha);
    if (!(alpha < 1.0)) throw ConfigError("closed-form solve requires alpha < 1; use the power solver");
    const std::size_t n = terms.front().op->node_count();
    constexpr std::size_t kMaxDense = 5000;
    if (n > kMaxDense)
        throw ConfigError("closed-form solve limited to " + std::to_string(kMaxDense) + " nodes (got " +
                          std::to_string(n) + ")");

    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(N, N);
    for (const auto& t : terms)
        if (t.coefficient != 0.0) w += t.coefficient * t.op->to_dense();
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(N, N) - alpha * w;
    Eigen::VectorXd rhs = Eigen::VectorXd::Constant(N, (1.0 - alpha) / static_cast<double>(n));
    Eigen::VectorXd solution = system.partialPivLu().solve(rhs);
    if (!solution.allFinite()) throw NumericalError("closed-form solve produced non-finite scores");

    ScoreVector out;
    out.meta.solver = std::move(solver_name);
    out.scores.assign(solution.data(), solution.data() + n);
    track_simplex(out.scores, alpha, out.meta);
    return out;
}

}  // namespace detail

/// Power iteration on C = (1-alpha)/n 1 + alpha op C.
inline ScoreVector solve_power(const StochasticOperator& op, double alpha, double tol = 1e-10,
                               std::size_t max_iters = 1000) {
    const detail::WeightedOperator terms[] = {{1.0, &op}};
    return detail::iterate(terms, alpha, tol, max_iters, "power");
}

/// Dense LU solve of (I - alpha op) C = (1-alpha)/n 1. Requires alpha < 1, n <= 5000.
inline ScoreVector solve_closed_form(const StochasticOperator& op, double alpha) {
    const detail::WeightedOperator terms[] = {{1.0, &op}};
    return detail::dense_solve(terms, alpha, "closed_form");
}

/// Originality/influence split: iterates with beta * prior + (1-beta) * subsequent.
inline ScoreVector solve_split(const StochasticOperator& op_prior, const StochasticOperator& op_subseq,
                               double alpha, double beta, double tol = 1e-10, std::size_t max_iters = 1000) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0,1]");
    const detail::WeightedOperator terms[] = {{beta, &op_prior}, {1.0 - beta, &op_subseq}};
    return detail::iterate(terms, alpha, tol, max_iters, "split_power");
}

inline ScoreVector solve_split_closed_form(const StochasticOperator& op_prior,
                                           const StochasticOperator& op_subseq, double alpha, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0,1]");
    const detail::WeightedOperator terms[] = {{beta, &op_prior}, {1.0 - beta, &op_subseq}};
    return detail::dense_solve(terms, alpha, "split_closed_form");
}

}  // namespace creativity
