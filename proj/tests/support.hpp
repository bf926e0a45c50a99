#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "corrfilter/correlation.hpp"
#include "corrfilter/linkage.hpp"
#include "corrfilter/matrix.hpp"

namespace testing {

using corrfilter::CorrelationMatrix;
using corrfilter::DistanceMatrix;
using corrfilter::Matrix;

/// Symmetric matrix with i.i.d. uniform (0, 1) off-diagonal entries. Not a
/// metric in general, which is fine for graph and linkage tests.
inline DistanceMatrix random_distances(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DistanceMatrix d{Matrix(n, n), {}};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            d.values(i, j) = d.values(j, i) = u(rng);
        }
    }
    return d;
}

/// N x T Gaussian noise.
inline Matrix random_returns(std::size_t n, std::size_t t, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix r(n, t);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < t; ++k) r(i, k) = g(rng);
    }
    return r;
}

/// Returns with `blocks` equal-size groups sharing a factor of the given
/// loading on top of unit noise.
inline Matrix block_returns(std::size_t n, std::size_t t, std::size_t blocks, double loading, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix f(blocks, t);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t k = 0; k < t; ++k) f(b, k) = g(rng);
    }
    Matrix r(n, t);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = i * blocks / n;
        for (std::size_t k = 0; k < t; ++k) r(i, k) = loading * f(b, k) + g(rng);
    }
    return r;
}

inline std::vector<int> block_labels(std::size_t n, std::size_t blocks) {
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<int>(i * blocks / n);
    return out;
}

inline std::vector<int> random_labels(std::size_t n, int k, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> out(n);
    for (auto& x : out) x = pick(rng);
    return out;
}

inline std::pair<CorrelationMatrix, DistanceMatrix> corr_and_dist(const Matrix& returns) {
    auto c = corrfilter::pearson(returns, corrfilter::WeightScheme::uniform());
    auto d = corrfilter::to_distance(c);
    return {std::move(c), std::move(d)};
}

inline DistanceMatrix from_values(std::size_t n, std::initializer_list<double> upper) {
    DistanceMatrix d{Matrix(n, n), {}};
    auto it = upper.begin();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++it) d.values(i, j) = d.values(j, i) = *it;
    }
    return d;
}

}  // namespace testing
