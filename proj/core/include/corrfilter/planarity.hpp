#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace corrfilter {

using VertexPair = std::pair<int, int>;

/// Left-right planarity test (de Fraysseix-Rosenstiehl criterion in Brandes'
/// formulation). Runs in O(V + E). The object keeps its scratch buffers so
/// repeated calls on graphs of similar size do not reallocate.
///
/// Only answers the yes/no question; no embedding is produced.
class LrPlanarityTester {
public:
    /// Tests the whole graph. Edges must be simple (no loops, no duplicates).
    bool is_planar(std::size_t vertex_count, std::span<const VertexPair> edges);

    /// Tests only the connected component that contains `root`. The caller
    /// vouches that the remaining components are planar.
    bool is_component_planar(std::size_t vertex_count, std::span<const VertexPair> edges, int root);

private:
    struct Interval {
        int low = -1;
        int high = -1;
        [[nodiscard]] bool empty() const noexcept { return low == -1 && high == -1; }
    };
    struct ConflictPair {
        Interval left;
        Interval right;
    };

    void build(std::size_t vertex_count, std::span<const VertexPair> edges);
    void order_out_edges();
    void orient(int v);
    bool test(int v);
    bool add_constraints(int ei, int e);
    void remove_back_edges(int e);
    [[nodiscard]] bool conflicting(const Interval& i, int edge) const noexcept;
    [[nodiscard]] int lowest(const ConflictPair& p) const noexcept;

    std::size_t n_ = 0;
    // CSR adjacency: neighbor and undirected edge id
    std::vector<int> adj_offset_;
    std::vector<int> adj_vertex_;
    std::vector<int> adj_edge_;
    // ordered out-edges after orientation
    std::vector<int> out_offset_;
    std::vector<int> out_edge_;

    std::vector<int> height_;
    std::vector<int> parent_edge_;
    std::vector<char> oriented_;
    std::vector<int> src_;
    std::vector<int> dst_;
    std::vector<int> lowpt_;
    std::vector<int> lowpt2_;
    std::vector<int> nesting_;
    std::vector<int> ref_;
    std::vector<int> lowpt_edge_;
    std::vector<std::size_t> stack_bottom_;
    std::vector<int> visited_;
    std::vector<ConflictPair> stack_;
};

/// Convenience wrapper around a temporary tester.
bool is_planar(std::size_t vertex_count, std::span<const VertexPair> edges);

}  // namespace corrfilter
