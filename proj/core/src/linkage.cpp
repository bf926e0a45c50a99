#include "corrfilter/linkage.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "corrfilter/disjoint_sets.hpp"
#include "corrfilter/error.hpp"

namespace corrfilter {

Partition::Partition(std::span<const int> raw_labels) : labels_(raw_labels.size()) {
    std::vector<std::pair<int, int>> seen;  // raw label -> canonical
    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
        const int raw = raw_labels[i];
        auto it = std::ranges::find(seen, raw, &std::pair<int, int>::first);
        int label = 0;
        if (it == seen.end()) {
            label = static_cast<int>(seen.size());
            seen.emplace_back(raw, label);
            sizes_.push_back(0);
        } else {
            label = it->second;
        }
        labels_[i] = label;
        ++sizes_[static_cast<std::size_t>(label)];
    }
}

std::string_view to_string(LinkageRule rule) noexcept {
    switch (rule) {
        case LinkageRule::Single: return "single";
        case LinkageRule::Average: return "average";
        case LinkageRule::Complete: return "complete";
    }
    return "unknown";
}

Dendrogram linkage(const DistanceMatrix& dist, LinkageRule rule) { return linkage(dist.values, rule); }

Dendrogram linkage(const Matrix& dist, LinkageRule rule) { return constrained_linkage(dist, rule, {}); }

Dendrogram constrained_linkage(const Matrix& dist, LinkageRule rule, std::span<const std::vector<int>> levels) {
    const std::size_t n = dist.rows();
    if (n < 1 || dist.cols() != n) throw Error(ErrorCode::InvalidArgument, "distance matrix must be square");
    for (const auto& level : levels) {
        if (level.size() != n) throw Error(ErrorCode::InvalidArgument, "constraint level size mismatch");
    }
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        std::map<int, int> parent;
        for (std::size_t i = 0; i < n; ++i) {
            const auto [it, fresh] = parent.emplace(levels[k][i], levels[k + 1][i]);
            if (!fresh && it->second != levels[k + 1][i]) {
                throw Error(ErrorCode::InvalidArgument, "constraint levels are not nested");
            }
        }
    }

    // Clusters live in slots 0..n-1; a merged cluster reuses the smaller slot.
    Matrix d = dist;
    std::vector<int> node_of_slot(n);
    std::vector<std::size_t> size_of_slot(n, 1);
    std::vector<int> leaf_of_slot(n);  // any member, for group lookup
    std::vector<std::size_t> active(n);  // slots, ascending node id
    for (std::size_t s = 0; s < n; ++s) {
        node_of_slot[s] = static_cast<int>(s);
        leaf_of_slot[s] = static_cast<int>(s);
        active[s] = s;
    }

    Dendrogram out{n, {}};
    out.merges.reserve(n > 0 ? n - 1 : 0);
    std::size_t level = 0;

    while (active.size() > 1) {
        const bool constrained = level < levels.size();
        auto group = [&](std::size_t slot) {
            return levels[level][static_cast<std::size_t>(leaf_of_slot[slot])];
        };
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_a = active.size();
        std::size_t best_b = active.size();
        for (std::size_t a = 0; a < active.size(); ++a) {
            const std::size_t sa = active[a];
            const auto row = d.row(sa);
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                const std::size_t sb = active[b];
                if (constrained && group(sa) != group(sb)) continue;
                if (best_a == active.size() || row[sb] < best) {
                    best = row[sb];
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (best_a == active.size()) {
            if (!constrained) throw Error(ErrorCode::InvalidArgument, "no mergeable pair");
            ++level;
            continue;
        }

        const std::size_t sa = active[best_a];
        const std::size_t sb = active[best_b];
        const std::size_t na = size_of_slot[sa];
        const std::size_t nb = size_of_slot[sb];
        out.merges.push_back({node_of_slot[sa], node_of_slot[sb], best, na + nb});

        const std::size_t keep = std::min(sa, sb);
        for (const std::size_t sc : active) {
            if (sc == sa || sc == sb) continue;
            const double da = d(sa, sc);
            const double db = d(sb, sc);
            double merged = 0.0;
            switch (rule) {
                case LinkageRule::Single: merged = std::min(da, db); break;
                case LinkageRule::Complete: merged = std::max(da, db); break;
                case LinkageRule::Average:
                    merged = (static_cast<double>(na) * da + static_cast<double>(nb) * db) /
                             static_cast<double>(na + nb);
                    break;
            }
            d(keep, sc) = merged;
            d(sc, keep) = merged;
        }
        node_of_slot[keep] = static_cast<int>(n + out.merges.size() - 1);
        size_of_slot[keep] = na + nb;
        leaf_of_slot[keep] = std::min(leaf_of_slot[sa], leaf_of_slot[sb]);

        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_a));
        active.push_back(keep);  // newest node id is the largest
    }
    return out;
}

Partition cut(const Dendrogram& dendro, std::size_t n_clusters) {
    const std::size_t n = dendro.leaf_count;
    if (n_clusters < 1 || n_clusters > n) {
        throw Error(ErrorCode::InvalidClusterCount,
                    std::to_string(n_clusters) + " clusters for " + std::to_string(n) + " items");
    }
    // node id -> representative leaf
    std::vector<int> leaf(n + dendro.merges.size());
    for (std::size_t i = 0; i < n; ++i) leaf[i] = static_cast<int>(i);
    DisjointSets sets(n);
    const std::size_t keep = n - n_clusters;
    for (std::size_t k = 0; k < dendro.merges.size(); ++k) {
        const auto& m = dendro.merges[k];
        const int a = leaf[static_cast<std::size_t>(m.left)];
        const int b = leaf[static_cast<std::size_t>(m.right)];
        leaf[n + k] = a;
        if (k < keep) sets.unite(a, b);
    }
    std::vector<int> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = sets.find(static_cast<int>(i));
    return Partition(raw);
}

Matrix cophenetic(const Dendrogram& dendro) {
    const std::size_t n = dendro.leaf_count;
    Matrix out(n, n, 0.0);
    std::vector<std::vector<int>> members(n + dendro.merges.size());
    for (std::size_t i = 0; i < n; ++i) members[i] = {static_cast<int>(i)};
    for (std::size_t k = 0; k < dendro.merges.size(); ++k) {
        const auto& m = dendro.merges[k];
        auto& left = members[static_cast<std::size_t>(m.left)];
        auto& right = members[static_cast<std::size_t>(m.right)];
        for (const int a : left) {
            for (const int b : right) {
                out(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) = m.height;
                out(static_cast<std::size_t>(b), static_cast<std::size_t>(a)) = m.height;
            }
        }
        auto& merged = members[n + k];
        merged = std::move(left);
        merged.insert(merged.end(), right.begin(), right.end());
        right.clear();
    }
    return out;
}

}  // namespace corrfilter
