#pragma once

#include <cstdint>
#include <vector>

#include "corrfilter/correlation.hpp"
#include "corrfilter/linkage.hpp"

namespace corrfilter {

struct PamConfig {
    std::size_t n_clusters = 2;
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 300;
};

struct PamResult {
    Partition partition;
    std::vector<int> medoids;  // ascending point ids; medoids[label] is not implied
    double cost = 0.0;         // sum of point-to-medoid distances
    std::size_t iterations = 0;
};

/// Partitioning Around Medoids: random initial medoids, nearest-medoid
/// assignment, then repeatedly apply the best improving medoid/non-medoid
/// swap until none improves. Best of `restarts` seeded runs.
PamResult kmedoids(const DistanceMatrix& dist, const PamConfig& cfg);
PamResult kmedoids(const Matrix& dist, const PamConfig& cfg);

/// One PAM run from the given initial medoids.
PamResult pam_from(const Matrix& dist, std::vector<int> medoids, std::size_t max_iterations);

/// Total distance of every point to its nearest medoid.
double medoid_cost(const Matrix& dist, const std::vector<int>& medoids);

}  // namespace corrfilter
