#include "corrfilter/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "corrfilter/error.hpp"

namespace corrfilter {

namespace {

std::int64_t pairs(std::int64_t n) { return n * (n - 1) / 2; }

long double log_choose(std::int64_t n, std::int64_t k) {
    int sign = 0;
    return lgammal_r(static_cast<long double>(n) + 1.0L, &sign) -
           lgammal_r(static_cast<long double>(k) + 1.0L, &sign) -
           lgammal_r(static_cast<long double>(n - k) + 1.0L, &sign);
}

void check_hypergeom_domain(std::int64_t population, std::int64_t successes, std::int64_t draws, std::int64_t k) {
    if (population < 0 || successes < 0 || draws < 0 || k < 0 || successes > population || draws > population ||
        k > std::min(successes, draws)) {
        throw Error(ErrorCode::DomainError, "hypergeometric(N=" + std::to_string(population) + ", K=" +
                                                std::to_string(successes) + ", n=" + std::to_string(draws) +
                                                ", k=" + std::to_string(k) + ")");
    }
}

long double pmf_unchecked(std::int64_t population, std::int64_t successes, std::int64_t draws, std::int64_t k) {
    if (draws - k > population - successes) return 0.0L;
    return std::exp(log_choose(successes, k) + log_choose(population - successes, draws - k) -
                    log_choose(population, draws));
}

}  // namespace

double disparity_of_sizes(const std::vector<std::size_t>& sizes) {
    const std::size_t count = sizes.size();
    if (count < 2) throw Error(ErrorCode::UndefinedForSingleCluster, "disparity needs at least two clusters");
    double mean = 0.0;
    for (const auto s : sizes) mean += static_cast<double>(s);
    mean /= static_cast<double>(count);
    double ss = 0.0;
    for (const auto s : sizes) ss += (static_cast<double>(s) - mean) * (static_cast<double>(s) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(count - 1));
    return sd / mean;
}

double disparity(const Partition& p) { return disparity_of_sizes(p.cluster_sizes()); }

ContingencyTable contingency(const Partition& p, const Partition& q) {
    if (p.size() != q.size()) {
        throw Error(ErrorCode::UniverseMismatch,
                    std::to_string(p.size()) + " vs " + std::to_string(q.size()) + " items");
    }
    ContingencyTable t;
    t.rows = p.cluster_count();
    t.cols = q.cluster_count();
    t.counts.assign(t.rows * t.cols, 0);
    t.row_sums.assign(t.rows, 0);
    t.col_sums.assign(t.cols, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto a = static_cast<std::size_t>(p[i]);
        const auto b = static_cast<std::size_t>(q[i]);
        ++t.counts[a * t.cols + b];
        ++t.row_sums[a];
        ++t.col_sums[b];
    }
    t.total = static_cast<std::int64_t>(p.size());
    return t;
}

double adjusted_rand(const ContingencyTable& table) {
    const std::int64_t n = table.total;
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "ARI needs at least two items");
    std::int64_t same_both = 0;
    for (const auto m : table.counts) same_both += pairs(m);
    std::int64_t t1 = 0;
    for (const auto s : table.row_sums) t1 += pairs(s);
    std::int64_t t2 = 0;
    for (const auto s : table.col_sums) t2 += pairs(s);

    // 0.5 (t1 + t2) >= t1 t2 / P with equality only at t1 = t2 in {0, P}:
    // both partitions all singletons, or both a single cluster
    const std::int64_t all_pairs = pairs(n);
    if (t1 == t2 && (t1 == 0 || t1 == all_pairs)) {
        if (same_both == t1) return 1.0;
        throw Error(ErrorCode::DegenerateDenominator, "ARI undefined for these partitions");
    }
    const double t3 = 2.0 * static_cast<double>(t1) * static_cast<double>(t2) /
                      (static_cast<double>(n) * static_cast<double>(n - 1));
    const double numerator = static_cast<double>(same_both) - t3;
    const double denominator = 0.5 * (static_cast<double>(t1) + static_cast<double>(t2)) - t3;
    return numerator / denominator;
}

double adjusted_rand(const Partition& p, const Partition& q) { return adjusted_rand(contingency(p, q)); }

double hypergeom_pmf(std::int64_t population, std::int64_t successes, std::int64_t draws, std::int64_t k) {
    check_hypergeom_domain(population, successes, draws, k);
    return static_cast<double>(pmf_unchecked(population, successes, draws, k));
}

double hypergeom_upper_tail(std::int64_t population, std::int64_t successes, std::int64_t draws, std::int64_t k) {
    check_hypergeom_domain(population, successes, draws, k);
    const std::int64_t lowest = std::max<std::int64_t>(0, draws - (population - successes));
    if (k <= lowest) return 1.0;
    // pmf(x + 1) / pmf(x) = (K - x)(n - x) / ((x + 1)(N - K - n + x + 1))
    const std::int64_t top = std::min(successes, draws);
    long double term = pmf_unchecked(population, successes, draws, k);
    long double tail = term;
    for (std::int64_t x = k; x < top; ++x) {
        term *= static_cast<long double>(successes - x) * static_cast<long double>(draws - x) /
                (static_cast<long double>(x + 1) * static_cast<long double>(population - successes - draws + x + 1));
        tail += term;
    }
    return static_cast<double>(std::min(tail, 1.0L));
}

OverexpressionReport overexpression_scan(const Partition& clusters, std::span<const int> sector_labels,
                                         std::size_t sector_count, const OverexpressionOptions& options) {
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
    }
    if (sector_labels.size() != clusters.size()) {
        throw Error(ErrorCode::UniverseMismatch, "sector labels do not cover the clustered items");
    }
    const auto population = static_cast<std::int64_t>(clusters.size());
    const std::size_t n_cl = clusters.cluster_count();

    std::vector<std::int64_t> overlap(n_cl * sector_count, 0);
    std::vector<std::int64_t> sector_size(sector_count, 0);
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        const int s = sector_labels[i];
        if (s < 0 || static_cast<std::size_t>(s) >= sector_count) {
            throw Error(ErrorCode::InvalidArgument, "sector label out of range");
        }
        ++overlap[static_cast<std::size_t>(clusters[i]) * sector_count + static_cast<std::size_t>(s)];
        ++sector_size[static_cast<std::size_t>(s)];
    }

    OverexpressionReport report;
    report.alpha = options.alpha;
    const double tests = static_cast<double>(n_cl) * static_cast<double>(sector_count);
    report.bonferroni_divisor = options.strict_bonferroni ? tests : 0.5 * tests;
    report.threshold = options.alpha / report.bonferroni_divisor;
    for (std::size_t c = 0; c < n_cl; ++c) {
        const auto draws = static_cast<std::int64_t>(clusters.cluster_sizes()[c]);
        for (std::size_t s = 0; s < sector_count; ++s) {
            const std::int64_t k = overlap[c * sector_count + s];
            const double p = options.test == OverexpressionTest::UpperTail
                                 ? hypergeom_upper_tail(population, sector_size[s], draws, k)
                                 : hypergeom_pmf(population, sector_size[s], draws, k);
            const bool rejected = p < report.threshold;
            report.entries.push_back({static_cast<int>(c), static_cast<int>(s), k, p, rejected});
            if (rejected) ++report.rejections;
        }
    }
    report.normalized_rejections = tests > 0 ? 2.0 * static_cast<double>(report.rejections) / tests : 0.0;
    return report;
}

OverexpressionReport overexpression_scan(const Partition& clusters, const Taxonomy& taxonomy,
                                         const std::vector<std::string>& tickers,
                                         const OverexpressionOptions& options) {
    const auto labels = taxonomy.supersector_labels(tickers);
    return overexpression_scan(clusters, labels, taxonomy.supersectors().size(), options);
}

}  // namespace corrfilter
