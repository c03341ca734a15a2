#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "creativity/model.hpp"

namespace creativity::synthetic {

/// n artifacts with uniform integer years and standard normal features.
inline Corpus random_corpus(std::size_t n, std::size_t dim, std::uint64_t seed, Year first_year = 1400,
                            Year last_year = 1900, const std::string& aspect = "visual") {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Year> year(first_year, last_year);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Artifact> artifacts(n);
    std::vector<double> values(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        artifacts[i].id = "a" + std::to_string(i);
        artifacts[i].year = year(rng);
        artifacts[i].style = "random";
    }
    for (auto& v : values) v = normal(rng);
    return Corpus(std::move(artifacts), {FeatureSet(aspect, dim, std::move(values))});
}

/// A 500-artifact corpus with planted structure for time-machine experiments.
/// Styles:
///  - "background": 355 works dated uniformly over 1400-1900 whose centre
///    drifts linearly from one random point to another across the period;
///  - "archetype": 20 of the earliest works (1400-1440) around a centre that
///    the 100 "imitation" works (1440-1900) keep copying;
///  - "innovation": 25 late works (1880-1900) at the point the background only
///    reaches by 1900, far from anything dated early.
/// Centres are 4 N(0, I) draws, works add N(0, I) noise.
inline Corpus time_machine_corpus(std::uint64_t seed, std::size_t dim = 8) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    auto centre = [&] {
        std::vector<double> c(dim);
        for (auto& v : c) v = 4.0 * normal(rng);
        return c;
    };
    const auto archetype = centre();
    const auto drift_from = centre();
    const auto drift_to = centre();

    std::vector<Artifact> artifacts;
    std::vector<double> values;
    std::vector<double> c(dim);
    auto add = [&](const std::string& style, Year lo, Year hi, std::size_t count, auto&& centre_at) {
        std::uniform_int_distribution<Year> year(lo, hi);
        for (std::size_t k = 0; k < count; ++k) {
            Artifact a;
            a.id = style + "-" + std::to_string(k);
            a.year = year(rng);
            a.style = style;
            centre_at(a.year);
            for (std::size_t d = 0; d < dim; ++d) values.push_back(c[d] + normal(rng));
            artifacts.push_back(std::move(a));
        }
    };
    auto fixed = [&](const std::vector<double>& at) { return [&c, &at](Year) { c = at; }; };
    auto drifting = [&](Year y) {
        const double t = (y - 1400) / 500.0;
        for (std::size_t d = 0; d < dim; ++d) c[d] = (1.0 - t) * drift_from[d] + t * drift_to[d];
    };

    add("archetype", 1400, 1440, 20, fixed(archetype));
    add("imitation", 1440, 1900, 100, fixed(archetype));
    add("innovation", 1880, 1900, 25, fixed(drift_to));
    add("background", 1400, 1900, 355, drifting);
    return Corpus(std::move(artifacts), {FeatureSet("visual", dim, std::move(values))});
}

}  // namespace creativity::synthetic
