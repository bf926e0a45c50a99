#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "corrfilter/ingest.hpp"
#include "corrfilter/linkage.hpp"

namespace corrfilter {

/// m(i, j) = |Y_i ∩ Y'_j|.
struct ContingencyTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int64_t> counts;  // row-major
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t total = 0;

    [[nodiscard]] std::int64_t operator()(std::size_t i, std::size_t j) const noexcept { return counts[i * cols + j]; }
};

/// Coefficient of variation of cluster sizes (sample standard deviation).
double disparity(const Partition& p);
double disparity_of_sizes(const std::vector<std::size_t>& sizes);

ContingencyTable contingency(const Partition& p, const Partition& q);

double adjusted_rand(const Partition& p, const Partition& q);
/// ARI from a precomputed contingency table.
double adjusted_rand(const ContingencyTable& table);

/// P(X = k) for X ~ Hypergeometric(population, successes, draws).
double hypergeom_pmf(std::int64_t population, std::int64_t successes, std::int64_t draws, std::int64_t k);
/// P(X >= k).
double hypergeom_upper_tail(std::int64_t population, std::int64_t successes, std::int64_t draws, std::int64_t k);

enum class OverexpressionTest { UpperTail, PointMass };

struct OverexpressionOptions {
    double alpha = 0.01;
    /// Divide alpha by N_cl * N_sectors instead of 0.5 * N_cl * N_sectors.
    bool strict_bonferroni = false;
    OverexpressionTest test = OverexpressionTest::UpperTail;
};

struct OverexpressionEntry {
    int cluster = 0;
    int sector = 0;
    std::int64_t overlap = 0;
    double p_value = 1.0;
    bool rejected = false;
};

struct OverexpressionReport {
    std::vector<OverexpressionEntry> entries;  // one per (cluster, sector) pair
    double alpha = 0.0;
    double bonferroni_divisor = 0.0;
    double threshold = 0.0;  // alpha / divisor
    std::size_t rejections = 0;   // the count 𝒩
    double normalized_rejections = 0.0;  // 2 𝒩 / (N_cl N_sectors)
};

/// Hypergeometric over-representation of every sector in every cluster.
/// `sector_labels[i]` in [0, sector_count) is the reference sector of item i;
/// sector_count is the size of the label universe (N_ICB), which may include
/// sectors with no items.
OverexpressionReport overexpression_scan(const Partition& clusters, std::span<const int> sector_labels,
                                         std::size_t sector_count, const OverexpressionOptions& options = {});

OverexpressionReport overexpression_scan(const Partition& clusters, const Taxonomy& taxonomy,
                                         const std::vector<std::string>& tickers,
                                         const OverexpressionOptions& options = {});

}  // namespace corrfilter
