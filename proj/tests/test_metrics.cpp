#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <random>

#include "corrfilter/error.hpp"
#include "corrfilter/metrics.hpp"
#include "support.hpp"

using namespace corrfilter;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

// ARI by counting agreeing pairs directly over all item pairs.
double pair_count_ari(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    double both = 0, in_a = 0, in_b = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool sa = a[i] == a[j];
            const bool sb = b[i] == b[j];
            both += sa && sb;
            in_a += sa;
            in_b += sb;
            pairs += 1;
        }
    }
    const double expected = in_a * in_b / pairs;
    return (both - expected) / (0.5 * (in_a + in_b) - expected);
}

cpp_int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    cpp_int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

cpp_rational exact_pmf(int pop, int succ, int draws, int k) {
    return cpp_rational(binom(succ, k) * binom(pop - succ, draws - k), binom(pop, draws));
}

double direct_disparity(const std::vector<std::size_t>& sizes) {
    const double m = static_cast<double>(sizes.size());
    double mean = 0;
    for (const auto s : sizes) mean += static_cast<double>(s);
    mean /= m;
    double var = 0;
    for (const auto s : sizes) var += (static_cast<double>(s) - mean) * (static_cast<double>(s) - mean);
    return std::sqrt(var / (m - 1)) / mean;
}

Partition labels(std::initializer_list<int> l) { return Partition(std::vector<int>(l)); }

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("disparity examples") {
    CHECK(disparity_of_sizes({2, 2, 2}) == 0.0);
    CHECK(disparity_of_sizes({1, 3}) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
    CHECK(disparity_of_sizes({1, 1, 4}) == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));
    CHECK(disparity(labels({0, 1, 1, 1})) == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK_THROWS_AS((void)disparity(labels({0, 0, 0})), Error);
}

TEST_CASE("disparity matches direct evaluation") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> count(2, 40);
    std::uniform_int_distribution<std::size_t> size(1, 60);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<std::size_t> sizes(count(rng));
        for (auto& s : sizes) s = size(rng);
        CHECK(std::abs(disparity_of_sizes(sizes) - direct_disparity(sizes)) < 1e-12);
    }
}

TEST_CASE("contingency") {
    const auto t = contingency(labels({0, 0, 1, 1}), labels({0, 1, 0, 1}));
    CHECK(t.rows == 2);
    CHECK(t.cols == 2);
    for (const auto c : t.counts) CHECK(c == 1);
    const auto row = contingency(labels({0, 0, 0}), labels({0, 1, 2}));
    CHECK(row.rows == 1);
    CHECK(row.counts == std::vector<std::int64_t>{1, 1, 1});
    const auto same = contingency(labels({0, 1, 1, 2}), labels({0, 1, 1, 2}));
    CHECK(same(1, 1) == 2);
    CHECK(same(0, 1) == 0);
    CHECK_THROWS_AS((void)contingency(labels({0, 1}), labels({0, 1, 2})), Error);
}

TEST_CASE("adjusted rand examples") {
    CHECK(adjusted_rand(labels({0, 0, 1, 2, 2}), labels({5, 5, 3, 1, 1})) == 1.0);
    CHECK(adjusted_rand(labels({0, 0, 1, 1}), labels({0, 1, 0, 1})) == doctest::Approx(-0.5).epsilon(1e-15));
    // both all-singletons or both one cluster: identical, defined as 1
    CHECK(adjusted_rand(labels({0, 1, 2}), labels({0, 1, 2})) == 1.0);
    CHECK(adjusted_rand(labels({0, 0, 0}), labels({0, 0, 0})) == 1.0);
    // one side all-together, the other all-apart: no agreement beyond chance
    CHECK(adjusted_rand(labels({0, 0, 0}), labels({0, 1, 2})) == 0.0);
    CHECK(adjusted_rand(labels({0, 0}), labels({0, 1})) == 0.0);
    CHECK_THROWS_AS((void)adjusted_rand(labels({0}), labels({0})), Error);
}

TEST_CASE("adjusted rand matches pair counting") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(2, 12);
    std::size_t checked = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = size(rng);
        std::uniform_int_distribution<int> k(1, static_cast<int>(n));
        const auto a = testing::random_labels(n, k(rng), rng);
        const auto b = testing::random_labels(n, k(rng), rng);
        const double expected = pair_count_ari(a, b);
        if (!std::isfinite(expected)) continue;
        CHECK(adjusted_rand(Partition(a), Partition(b)) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(adjusted_rand(Partition(a), Partition(b)) == adjusted_rand(Partition(b), Partition(a)));
        ++checked;
    }
    CHECK(checked > 400);
}

TEST_CASE("hypergeometric examples") {
    CHECK(hypergeom_pmf(10, 5, 4, 2) == doctest::Approx(100.0 / 210.0).epsilon(1e-14));
    CHECK(hypergeom_pmf(7, 7, 7, 7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hypergeom_pmf(10, 8, 4, 0) == 0.0);
    CHECK_THROWS_AS((void)hypergeom_pmf(10, 3, 4, 4), Error);
    CHECK_THROWS_AS((void)hypergeom_pmf(10, 11, 4, 2), Error);
    CHECK_THROWS_AS((void)hypergeom_pmf(10, 5, -1, 0), Error);
}

TEST_CASE("hypergeometric pmf matches exact rationals") {
    for (int pop = 1; pop <= 30; ++pop) {
        for (int succ = 0; succ <= pop; ++succ) {
            for (int draws = 0; draws <= pop; ++draws) {
                for (int k = 0; k <= std::min(succ, draws); ++k) {
                    const double exact = static_cast<double>(exact_pmf(pop, succ, draws, k));
                    CHECK(std::abs(hypergeom_pmf(pop, succ, draws, k) - exact) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("hypergeometric pmf sums to one") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 60; ++rep) {
        const std::int64_t pop = std::uniform_int_distribution<std::int64_t>(1, 500)(rng);
        const std::int64_t succ = std::uniform_int_distribution<std::int64_t>(0, pop)(rng);
        const std::int64_t draws = std::uniform_int_distribution<std::int64_t>(0, pop)(rng);
        double total = 0;
        for (std::int64_t k = 0; k <= std::min(succ, draws); ++k) total += hypergeom_pmf(pop, succ, draws, k);
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("upper tail") {
    for (int pop = 2; pop <= 30; pop += 7) {
        for (int succ = 0; succ <= pop; succ += 3) {
            for (int draws = 0; draws <= pop; draws += 2) {
                for (int k = 0; k <= std::min(succ, draws); ++k) {
                    cpp_rational tail = 0;
                    for (int x = k; x <= std::min(succ, draws); ++x) tail += exact_pmf(pop, succ, draws, x);
                    CHECK(std::abs(hypergeom_upper_tail(pop, succ, draws, k) - static_cast<double>(tail)) <= 1e-12);
                }
            }
        }
    }
    // a cluster equal to a 10-stock sector out of 100
    const double p = hypergeom_upper_tail(100, 10, 10, 10);
    CHECK(p == doctest::Approx(5.776e-14).epsilon(1e-3));
    CHECK(p == doctest::Approx(hypergeom_pmf(100, 10, 10, 10)).epsilon(1e-12));
}

TEST_CASE("overexpression scan") {
    std::vector<int> sectors(100);
    for (std::size_t i = 0; i < 100; ++i) sectors[i] = static_cast<int>(i / 10);
    const auto rep = overexpression_scan(Partition(sectors), sectors, 10);
    CHECK(rep.entries.size() == 100);
    CHECK(rep.rejections == 10);
    CHECK(rep.bonferroni_divisor == doctest::Approx(50.0));
    CHECK(rep.normalized_rejections == doctest::Approx(0.2));
    for (const auto& e : rep.entries) {
        if (e.cluster == e.sector) {
            CHECK(e.rejected);
            CHECK(e.p_value < 1e-13);
        } else {
            CHECK_FALSE(e.rejected);
        }
    }

    // a sector without members is part of the universe
    const auto wide = overexpression_scan(Partition(sectors), sectors, 19);
    CHECK(wide.entries.size() == 190);
    CHECK(wide.bonferroni_divisor == doctest::Approx(95.0));

    OverexpressionOptions strict;
    strict.strict_bonferroni = true;
    CHECK(overexpression_scan(Partition(sectors), sectors, 10, strict).bonferroni_divisor == doctest::Approx(100.0));

    OverexpressionOptions bad;
    bad.alpha = 1.5;
    CHECK_THROWS_AS((void)overexpression_scan(Partition(sectors), sectors, 10, bad), Error);
}

TEST_CASE("bonferroni threshold for 23 clusters and 19 supersectors") {
    std::vector<int> clusters(230);
    std::vector<int> sectors(230);
    for (std::size_t i = 0; i < 230; ++i) {
        clusters[i] = static_cast<int>(i % 23);
        sectors[i] = static_cast<int>(i % 19);
    }
    const auto rep = overexpression_scan(Partition(clusters), sectors, 19);
    CHECK(rep.bonferroni_divisor == doctest::Approx(218.5));
    CHECK(rep.threshold == doctest::Approx(4.577e-5).epsilon(1e-3));
}

TEST_CASE("null calibration") {
    std::mt19937_64 rng(42);
    double ari_sum = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto a = testing::random_labels(1000, 10, rng);
        const auto b = testing::random_labels(1000, 10, rng);
        ari_sum += adjusted_rand(Partition(a), Partition(b));
    }
    CHECK(std::abs(ari_sum / 200) <= 0.02);

    std::size_t rejections = 0;
    std::size_t tests = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const auto clusters = testing::random_labels(200, 12, rng);
        const auto sectors = testing::random_labels(200, 8, rng);
        const auto r = overexpression_scan(Partition(clusters), sectors, 8);
        rejections += r.rejections;
        tests += r.entries.size();
    }
    CHECK(static_cast<double>(rejections) / static_cast<double>(tests) <= 0.01);
}

}
