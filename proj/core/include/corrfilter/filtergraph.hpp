#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "corrfilter/correlation.hpp"
#include "corrfilter/planarity.hpp"

namespace corrfilter {

struct Edge {
    int i = 0;  // i < j
    int j = 0;
    double distance = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

using EdgeList = std::vector<Edge>;
using Triangle = std::array<int, 3>;  // ascending vertex ids

struct SpanningTree {
    std::size_t vertex_count = 0;
    EdgeList edges;  // in Kruskal acceptance order
};

/// Filtered graph with a combinatorial embedding (cyclic neighbor order per
/// vertex). For a completed PMFG |E| = 3(N - 2).
class PlanarGraph {
public:
    PlanarGraph() = default;
    /// `edges` must be planar; the embedding is computed here.
    PlanarGraph(std::size_t vertex_count, EdgeList edges);

    [[nodiscard]] std::size_t vertex_count() const noexcept { return n_; }
    [[nodiscard]] const EdgeList& edges() const noexcept { return edges_; }
    [[nodiscard]] bool has_edge(int a, int b) const noexcept {
        return adjacency_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)] != 0;
    }
    /// Sorted neighbor ids.
    [[nodiscard]] const std::vector<int>& neighbors(int v) const { return neighbors_[static_cast<std::size_t>(v)]; }
    /// Neighbors of v in cyclic (embedding) order.
    [[nodiscard]] const std::vector<int>& rotation(int v) const { return rotation_[static_cast<std::size_t>(v)]; }
    [[nodiscard]] bool is_maximal_planar() const noexcept {
        return n_ >= 3 && edges_.size() == 3 * (n_ - 2);
    }
    [[nodiscard]] std::vector<VertexPair> vertex_pairs() const;

private:
    std::size_t n_ = 0;
    EdgeList edges_;
    std::vector<char> adjacency_;
    std::vector<std::vector<int>> neighbors_;
    std::vector<std::vector<int>> rotation_;
};

struct BubbleTreeEdge {
    int a = 0;  // bubble ids
    int b = 0;
    Triangle separator{};
};

/// Decomposition of a maximal planar graph along its separating triangles.
struct BubbleTree {
    std::vector<std::vector<int>> bubbles;     // sorted vertex ids, bubbles in lexicographic order
    std::vector<BubbleTreeEdge> edges;         // one per separating triangle
    std::vector<std::vector<int>> membership;  // per vertex, ascending bubble ids
};

/// All pairs i < j sorted by distance, ties by (i, j).
EdgeList sorted_edges(const DistanceMatrix& dist);

/// Kruskal over sorted_edges.
SpanningTree mst(const DistanceMatrix& dist);

/// Planar maximally filtered graph: greedy over sorted_edges keeping planarity.
PlanarGraph pmfg(const DistanceMatrix& dist);

std::vector<Triangle> three_cliques(const PlanarGraph& g);

/// Triangles whose removal disconnects the graph.
std::vector<Triangle> separating_triangles(const PlanarGraph& g);

BubbleTree bubble_tree(const PlanarGraph& g);

/// Boyer-Myrvold planarity test (Boost), independent of the left-right test
/// used while building the PMFG.
bool verify_planar(std::size_t vertex_count, std::span<const VertexPair> edges);

/// Number of faces traced from the rotation system of g.
std::size_t count_faces(const PlanarGraph& g);

}  // namespace corrfilter
