#pragma once

#include <cassert>
#include <cmath>
#include <span>

#include <Eigen/Core>

namespace creativity {

/// Squared Euclidean distance. Every kernel evaluation in the library goes
/// through this function so that all code paths produce identical bits.
inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    assert(a.size() == b.size());
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::Map<const Eigen::VectorXd> va(a.data(), n);
    Eigen::Map<const Eigen::VectorXd> vb(b.data(), n);
    return (va - vb).squaredNorm();
}

/// exp(-d2 / (2 sigma^2)) given d2 and 2 sigma^2.
inline double gaussian_from_squared(double d2, double two_sigma_sq) noexcept {
    return std::exp(-(d2 / two_sigma_sq));
}

}  // namespace creativity
