#include "corrfilter/kmedoids.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "corrfilter/error.hpp"
#include "corrfilter/parallel.hpp"

namespace corrfilter {

namespace {

struct Assignment {
    std::vector<int> nearest;  // index into medoids
    std::vector<double> d_nearest;
    std::vector<double> d_second;
    double cost = 0.0;
};

Assignment assign(const Matrix& dist, const std::vector<int>& medoids) {
    const std::size_t n = dist.rows();
    constexpr double inf = std::numeric_limits<double>::infinity();
    Assignment a{std::vector<int>(n, 0), std::vector<double>(n, inf), std::vector<double>(n, inf), 0.0};
    for (std::size_t o = 0; o < n; ++o) {
        for (std::size_t j = 0; j < medoids.size(); ++j) {
            const double d = dist(o, static_cast<std::size_t>(medoids[j]));
            if (d < a.d_nearest[o]) {
                a.d_second[o] = a.d_nearest[o];
                a.d_nearest[o] = d;
                a.nearest[o] = static_cast<int>(j);
            } else if (d < a.d_second[o]) {
                a.d_second[o] = d;
            }
        }
        a.cost += a.d_nearest[o];
    }
    return a;
}

std::vector<int> random_medoids(std::size_t n, std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace

double medoid_cost(const Matrix& dist, const std::vector<int>& medoids) { return assign(dist, medoids).cost; }

PamResult pam_from(const Matrix& dist, std::vector<int> medoids, std::size_t max_iterations) {
    const std::size_t n = dist.rows();
    const std::size_t k = medoids.size();
    std::ranges::sort(medoids);
    std::vector<char> is_medoid(n, 0);
    std::vector<double> delta(k);

    Assignment current = assign(dist, medoids);
    std::size_t iterations = 0;
    while (iterations < max_iterations) {
        std::ranges::fill(is_medoid, 0);
        for (const int m : medoids) is_medoid[static_cast<std::size_t>(m)] = 1;

        // Change in total cost for swapping medoid j with candidate x, for all
        // j at once: points closer to x than to their medoid move to x
        // whichever medoid leaves; others only move if their own medoid leaves.
        const double tolerance = 1e-12 * (1.0 + current.cost);
        double best = -tolerance;
        int best_x = -1;
        std::size_t best_j = 0;
        for (std::size_t x = 0; x < n; ++x) {
            if (is_medoid[x]) continue;
            std::ranges::fill(delta, 0.0);
            double shared = 0.0;
            const auto row_x = dist.row(x);
            for (std::size_t o = 0; o < n; ++o) {
                const double dox = row_x[o];
                if (dox < current.d_nearest[o]) {
                    shared += dox - current.d_nearest[o];
                } else {
                    delta[static_cast<std::size_t>(current.nearest[o])] +=
                        std::min(dox, current.d_second[o]) - current.d_nearest[o];
                }
            }
            for (std::size_t j = 0; j < k; ++j) {
                const double total = shared + delta[j];
                if (total < best) {
                    best = total;
                    best_x = static_cast<int>(x);
                    best_j = j;
                }
            }
        }
        if (best_x < 0) break;
        medoids[best_j] = best_x;
        std::ranges::sort(medoids);
        current = assign(dist, medoids);
        ++iterations;
    }

    return PamResult{Partition(current.nearest), medoids, current.cost, iterations};
}

PamResult kmedoids(const DistanceMatrix& dist, const PamConfig& cfg) { return kmedoids(dist.values, cfg); }

PamResult kmedoids(const Matrix& dist, const PamConfig& cfg) {
    const std::size_t n = dist.rows();
    if (cfg.n_clusters < 1 || cfg.n_clusters > n) {
        throw Error(ErrorCode::InvalidClusterCount,
                    std::to_string(cfg.n_clusters) + " medoids for " + std::to_string(n) + " items");
    }
    if (cfg.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");

    std::vector<PamResult> runs(cfg.restarts);
    parallel_for(cfg.restarts, [&](std::size_t r) {
        runs[r] = pam_from(dist, random_medoids(n, cfg.n_clusters, derive_seed(cfg.seed, r)), cfg.max_iterations);
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].cost < runs[best].cost) best = r;
    }
    return std::move(runs[best]);
}

}  // namespace corrfilter
