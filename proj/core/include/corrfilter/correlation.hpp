#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "corrfilter/ingest.hpp"
#include "corrfilter/matrix.hpp"

namespace corrfilter {

/// Symmetric, unit diagonal, entries in [-1, 1].
struct CorrelationMatrix {
    Matrix values;
    std::vector<std::string> tickers;

    [[nodiscard]] std::size_t size() const noexcept { return values.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values(i, j); }
};

/// Symmetric, zero diagonal, entries in [0, 2].
struct DistanceMatrix {
    Matrix values;
    std::vector<std::string> tickers;

    [[nodiscard]] std::size_t size() const noexcept { return values.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values(i, j); }
};

/// Observation weights for the Pearson estimator. Exponential weights decay
/// as exp((t - t_end) / theta) away from the most recent observation.
struct WeightScheme {
    enum class Kind { Uniform, Exponential };

    Kind kind = Kind::Uniform;
    double theta = std::numeric_limits<double>::infinity();  // trading days

    static WeightScheme uniform() { return {}; }
    static WeightScheme exponential(double theta);
    /// theta = window / 3
    static WeightScheme exponential_for_window(std::size_t window_length);

    /// Normalized weights (sum 1) for a window of `length` observations.
    [[nodiscard]] std::vector<double> weights(std::size_t length) const;
};

CorrelationMatrix pearson(const ReturnsPanel& returns, const WeightScheme& weights);
CorrelationMatrix pearson(const Matrix& returns, const WeightScheme& weights,
                          std::vector<std::string> tickers = {});

/// D_ij = sqrt(2 (1 - rho_ij)).
DistanceMatrix to_distance(const CorrelationMatrix& corr);

/// Arithmetic mean of the strict upper triangle.
double mean_offdiagonal(const CorrelationMatrix& corr);

/// Dense CSV with a ticker header row and column.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& values,
                      const std::vector<std::string>& tickers);

}  // namespace corrfilter
