#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "corrfilter/correlation.hpp"

namespace corrfilter {

/// Cluster label per item, labels 0..cluster_count()-1, numbered in order of
/// each cluster's smallest item.
class Partition {
public:
    Partition() = default;
    /// Any integer labels; they are renumbered canonically.
    explicit Partition(std::span<const int> raw_labels);

    [[nodiscard]] const std::vector<int>& labels() const noexcept { return labels_; }
    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] std::size_t cluster_count() const noexcept { return sizes_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& cluster_sizes() const noexcept { return sizes_; }
    int operator[](std::size_t i) const noexcept { return labels_[i]; }

    friend bool operator==(const Partition& a, const Partition& b) { return a.labels_ == b.labels_; }

private:
    std::vector<int> labels_;
    std::vector<std::size_t> sizes_;
};

struct Merge {
    int left = 0;   // node ids: leaves 0..N-1, merge k creates node N+k
    int right = 0;
    double height = 0.0;
    std::size_t size = 0;
};

struct Dendrogram {
    std::size_t leaf_count = 0;
    std::vector<Merge> merges;  // N - 1 records
};

enum class LinkageRule { Single, Average, Complete };

std::string_view to_string(LinkageRule rule) noexcept;

/// Agglomerative clustering. Average is the unweighted cross-pair mean
/// (UPGMA). Ties go to the smallest (left id, right id).
Dendrogram linkage(const DistanceMatrix& dist, LinkageRule rule);
Dendrogram linkage(const Matrix& dist, LinkageRule rule);

/// Agglomeration under nested grouping constraints. `levels` lists per-item
/// group labels from finest to coarsest; every group at a finer level must
/// lie inside one group of each coarser level. Merges are only allowed inside
/// a group of the current level until every group is a single cluster, then
/// the next level applies, and finally merges are unrestricted.
Dendrogram constrained_linkage(const Matrix& dist, LinkageRule rule,
                               std::span<const std::vector<int>> levels);

/// Undo the last n_clusters - 1 merges.
Partition cut(const Dendrogram& dendro, std::size_t n_clusters);

/// Cophenetic (merge-height) distance between leaves.
Matrix cophenetic(const Dendrogram& dendro);

}  // namespace corrfilter
