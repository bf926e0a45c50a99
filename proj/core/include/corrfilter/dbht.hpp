#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "corrfilter/correlation.hpp"
#include "corrfilter/filtergraph.hpp"
#include "corrfilter/linkage.hpp"

namespace corrfilter {

enum class BubbleKind { Converging, Diverging, Passage };

std::string_view to_string(BubbleKind kind) noexcept;

struct DirectedBubbleTree {
    BubbleTree tree;
    std::vector<int> head;  // per tree edge, the bubble it points to
    std::vector<BubbleKind> kinds;  // per bubble
    std::vector<double> strength_a;  // per tree edge, attachment toward edge.a
    std::vector<double> strength_b;

    [[nodiscard]] std::vector<int> converging() const;
};

/// Attachment of the separator's vertices to `bubble`: the sum of rho over
/// graph edges (v, u) with v in the separator and u in the bubble but not in
/// the separator.
double attachment(const Triangle& separator, const std::vector<int>& bubble, const CorrelationMatrix& corr,
                  const PlanarGraph& g);

/// Points every tree edge toward the side with stronger attachment; equal
/// strengths go to the bubble holding the smaller non-separator vertex.
DirectedBubbleTree direct_bubble_tree(const BubbleTree& bt, const CorrelationMatrix& corr, const PlanarGraph& g);

/// One cluster per converging bubble (in bubble order). Vertices of
/// converging bubbles join the one they are most attached to; the rest are
/// assigned outward from there, each to the cluster reachable downstream of
/// its bubbles with the strongest rho to already assigned neighbours.
Partition dbht_partition(const DirectedBubbleTree& dbt, const CorrelationMatrix& corr, const PlanarGraph& g);

/// Complete linkage inside each cluster until every cluster is one node,
/// then complete linkage across clusters. `bt` is only checked for size.
Dendrogram dbht_hierarchy(const Partition& partition, const DistanceMatrix& dist, const BubbleTree& bt);

struct DbhtResult {
    Partition partition;
    Dendrogram dendrogram;
    std::size_t n_cl = 0;
    PlanarGraph graph;
    DirectedBubbleTree directed;
};

/// Full pipeline. `dist` must equal sqrt(2 (1 - corr)) within 1e-9.
DbhtResult dbht(const DistanceMatrix& dist, const CorrelationMatrix& corr);

}  // namespace corrfilter
