#include "corrfilter/planarity.hpp"

#include <algorithm>

namespace corrfilter {

void LrPlanarityTester::build(std::size_t vertex_count, std::span<const VertexPair> edges) {
    n_ = vertex_count;
    const std::size_t m = edges.size();

    adj_offset_.assign(n_ + 1, 0);
    for (const auto& [a, b] : edges) {
        ++adj_offset_[static_cast<std::size_t>(a) + 1];
        ++adj_offset_[static_cast<std::size_t>(b) + 1];
    }
    for (std::size_t v = 0; v < n_; ++v) adj_offset_[v + 1] += adj_offset_[v];
    adj_vertex_.resize(2 * m);
    adj_edge_.resize(2 * m);
    visited_.assign(adj_offset_.begin(), adj_offset_.end() - 1);  // fill cursor
    for (std::size_t e = 0; e < m; ++e) {
        const auto [a, b] = edges[e];
        int& ca = visited_[static_cast<std::size_t>(a)];
        adj_vertex_[static_cast<std::size_t>(ca)] = b;
        adj_edge_[static_cast<std::size_t>(ca)] = static_cast<int>(e);
        ++ca;
        int& cb = visited_[static_cast<std::size_t>(b)];
        adj_vertex_[static_cast<std::size_t>(cb)] = a;
        adj_edge_[static_cast<std::size_t>(cb)] = static_cast<int>(e);
        ++cb;
    }

    height_.assign(n_, -1);
    parent_edge_.assign(n_, -1);
    oriented_.assign(m, 0);
    src_.assign(m, -1);
    dst_.assign(m, -1);
    lowpt_.assign(m, 0);
    lowpt2_.assign(m, 0);
    nesting_.assign(m, 0);
    ref_.assign(m, -1);
    lowpt_edge_.assign(m, -1);
    stack_bottom_.assign(m, 0);
    stack_.clear();
}

bool LrPlanarityTester::is_planar(std::size_t vertex_count, std::span<const VertexPair> edges) {
    if (vertex_count > 2 && edges.size() > 3 * vertex_count - 6) return false;
    build(vertex_count, edges);
    std::vector<int> roots;
    for (std::size_t v = 0; v < n_; ++v) {
        if (height_[v] == -1) {
            height_[v] = 0;
            orient(static_cast<int>(v));
            roots.push_back(static_cast<int>(v));
        }
    }
    order_out_edges();
    for (const int root : roots) {
        stack_.clear();
        if (!test(root)) return false;
    }
    return true;
}

bool LrPlanarityTester::is_component_planar(std::size_t vertex_count,
                                            std::span<const VertexPair> edges, int root) {
    if (vertex_count > 2 && edges.size() > 3 * vertex_count - 6) return false;
    build(vertex_count, edges);
    height_[static_cast<std::size_t>(root)] = 0;
    orient(root);
    order_out_edges();
    stack_.clear();
    return test(root);
}

void LrPlanarityTester::order_out_edges() {
    // Order the out-edges of every vertex by nesting depth: bucket sort over
    // all edges oriented so far, then scatter by source vertex (stable).
    const std::size_t m = src_.size();
    const std::size_t depth_range = 2 * n_ + 2;
    visited_.assign(depth_range + 1, 0);
    std::size_t oriented_count = 0;
    for (std::size_t e = 0; e < m; ++e) {
        if (oriented_[e]) {
            ++visited_[static_cast<std::size_t>(nesting_[e]) + 1];
            ++oriented_count;
        }
    }
    for (std::size_t d = 0; d < depth_range; ++d) visited_[d + 1] += visited_[d];
    std::vector<int>& by_depth = out_edge_;
    by_depth.assign(oriented_count, -1);
    for (std::size_t e = 0; e < m; ++e) {
        if (oriented_[e]) {
            by_depth[static_cast<std::size_t>(visited_[static_cast<std::size_t>(nesting_[e])]++)] =
                static_cast<int>(e);
        }
    }
    out_offset_.assign(n_ + 1, 0);
    for (const int e : by_depth) ++out_offset_[static_cast<std::size_t>(src_[static_cast<std::size_t>(e)]) + 1];
    for (std::size_t v = 0; v < n_; ++v) out_offset_[v + 1] += out_offset_[v];
    visited_.assign(out_offset_.begin(), out_offset_.end() - 1);
    std::vector<int> ordered(oriented_count);
    for (const int e : by_depth) {
        int& cursor = visited_[static_cast<std::size_t>(src_[static_cast<std::size_t>(e)])];
        ordered[static_cast<std::size_t>(cursor++)] = e;
    }
    out_edge_ = std::move(ordered);
}

void LrPlanarityTester::orient(int v) {
    const auto vi = static_cast<std::size_t>(v);
    const int e = parent_edge_[vi];
    for (int idx = adj_offset_[vi]; idx < adj_offset_[vi + 1]; ++idx) {
        const int k = adj_edge_[static_cast<std::size_t>(idx)];
        const auto ki = static_cast<std::size_t>(k);
        if (oriented_[ki]) continue;
        const int w = adj_vertex_[static_cast<std::size_t>(idx)];
        const auto wi = static_cast<std::size_t>(w);
        oriented_[ki] = 1;
        src_[ki] = v;
        dst_[ki] = w;
        lowpt_[ki] = height_[vi];
        lowpt2_[ki] = height_[vi];
        if (height_[wi] == -1) {  // tree edge
            parent_edge_[wi] = k;
            height_[wi] = height_[vi] + 1;
            orient(w);
        } else {  // back edge
            lowpt_[ki] = height_[wi];
        }

        nesting_[ki] = 2 * lowpt_[ki];
        if (lowpt2_[ki] < height_[vi]) ++nesting_[ki];  // chordal

        if (e != -1) {
            const auto ei = static_cast<std::size_t>(e);
            if (lowpt_[ki] < lowpt_[ei]) {
                lowpt2_[ei] = std::min(lowpt_[ei], lowpt2_[ki]);
                lowpt_[ei] = lowpt_[ki];
            } else if (lowpt_[ki] > lowpt_[ei]) {
                lowpt2_[ei] = std::min(lowpt2_[ei], lowpt_[ki]);
            } else {
                lowpt2_[ei] = std::min(lowpt2_[ei], lowpt2_[ki]);
            }
        }
    }
}

bool LrPlanarityTester::test(int v) {
    const auto vi = static_cast<std::size_t>(v);
    const int e = parent_edge_[vi];
    for (int idx = out_offset_[vi]; idx < out_offset_[vi + 1]; ++idx) {
        const int k = out_edge_[static_cast<std::size_t>(idx)];
        const auto ki = static_cast<std::size_t>(k);
        stack_bottom_[ki] = stack_.size();
        const int w = dst_[ki];
        if (k == parent_edge_[static_cast<std::size_t>(w)]) {
            if (!test(w)) return false;
        } else {
            lowpt_edge_[ki] = k;
            stack_.push_back(ConflictPair{{}, {k, k}});
        }

        if (lowpt_[ki] < height_[vi]) {
            if (idx == out_offset_[vi]) {
                lowpt_edge_[static_cast<std::size_t>(e)] = lowpt_edge_[ki];
            } else if (!add_constraints(k, e)) {
                return false;
            }
        }
    }
    if (e != -1) remove_back_edges(e);
    return true;
}

bool LrPlanarityTester::conflicting(const Interval& i, int edge) const noexcept {
    return !i.empty() &&
           lowpt_[static_cast<std::size_t>(i.high)] > lowpt_[static_cast<std::size_t>(edge)];
}

int LrPlanarityTester::lowest(const ConflictPair& p) const noexcept {
    if (p.left.empty()) return lowpt_[static_cast<std::size_t>(p.right.low)];
    if (p.right.empty()) return lowpt_[static_cast<std::size_t>(p.left.low)];
    return std::min(lowpt_[static_cast<std::size_t>(p.left.low)],
                    lowpt_[static_cast<std::size_t>(p.right.low)]);
}

bool LrPlanarityTester::add_constraints(int ei, int e) {
    ConflictPair merged;
    const std::size_t bottom = stack_bottom_[static_cast<std::size_t>(ei)];
    const int lowpt_e = lowpt_[static_cast<std::size_t>(e)];

    // return edges of ei go to the right
    do {
        ConflictPair q = stack_.back();
        stack_.pop_back();
        if (!q.left.empty()) std::swap(q.left, q.right);
        if (!q.left.empty()) return false;
        if (lowpt_[static_cast<std::size_t>(q.right.low)] > lowpt_e) {
            if (merged.right.empty()) {
                merged.right = q.right;
            } else {
                ref_[static_cast<std::size_t>(merged.right.low)] = q.right.high;
            }
            merged.right.low = q.right.low;
        } else {
            ref_[static_cast<std::size_t>(q.right.low)] = lowpt_edge_[static_cast<std::size_t>(e)];
        }
    } while (stack_.size() != bottom);

    // conflicting return edges of earlier siblings go to the left
    while (!stack_.empty() &&
           (conflicting(stack_.back().left, ei) || conflicting(stack_.back().right, ei))) {
        ConflictPair q = stack_.back();
        stack_.pop_back();
        if (conflicting(q.right, ei)) std::swap(q.left, q.right);
        if (conflicting(q.right, ei)) return false;
        if (merged.right.low != -1) {
            ref_[static_cast<std::size_t>(merged.right.low)] = q.right.high;
        }
        if (q.right.low != -1) merged.right.low = q.right.low;

        if (merged.left.empty()) {
            merged.left = q.left;
        } else {
            ref_[static_cast<std::size_t>(merged.left.low)] = q.left.high;
        }
        merged.left.low = q.left.low;
    }

    if (!(merged.left.empty() && merged.right.empty())) stack_.push_back(merged);
    return true;
}

void LrPlanarityTester::remove_back_edges(int e) {
    const auto ei = static_cast<std::size_t>(e);
    const int u = src_[ei];
    const int height_u = height_[static_cast<std::size_t>(u)];

    while (!stack_.empty() && lowest(stack_.back()) == height_u) stack_.pop_back();

    if (!stack_.empty()) {
        ConflictPair p = stack_.back();
        stack_.pop_back();
        while (p.left.high != -1 && dst_[static_cast<std::size_t>(p.left.high)] == u) {
            p.left.high = ref_[static_cast<std::size_t>(p.left.high)];
        }
        if (p.left.high == -1 && p.left.low != -1) {
            ref_[static_cast<std::size_t>(p.left.low)] = p.right.low;
            p.left.low = -1;
        }
        while (p.right.high != -1 && dst_[static_cast<std::size_t>(p.right.high)] == u) {
            p.right.high = ref_[static_cast<std::size_t>(p.right.high)];
        }
        if (p.right.high == -1 && p.right.low != -1) {
            ref_[static_cast<std::size_t>(p.right.low)] = p.left.low;
            p.right.low = -1;
        }
        stack_.push_back(p);
    }

    if (lowpt_[ei] < height_u && !stack_.empty()) {
        const int hl = stack_.back().left.high;
        const int hr = stack_.back().right.high;
        if (hl != -1 && (hr == -1 || lowpt_[static_cast<std::size_t>(hl)] >
                                         lowpt_[static_cast<std::size_t>(hr)])) {
            ref_[ei] = hl;
        } else {
            ref_[ei] = hr;
        }
    }
}

bool is_planar(std::size_t vertex_count, std::span<const VertexPair> edges) {
    LrPlanarityTester tester;
    return tester.is_planar(vertex_count, edges);
}

}  // namespace corrfilter
