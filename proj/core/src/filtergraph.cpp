#include "corrfilter/filtergraph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/graph/graph_traits.hpp>

#include "corrfilter/disjoint_sets.hpp"
#include "corrfilter/error.hpp"

namespace corrfilter {

namespace {

using BoostGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                         boost::property<boost::vertex_index_t, int>,
                                         boost::property<boost::edge_index_t, int>>;
using BoostEdge = boost::graph_traits<BoostGraph>::edge_descriptor;

BoostGraph to_boost(std::size_t n, std::span<const VertexPair> edges) {
    BoostGraph g(n);
    int index = 0;
    for (const auto& [a, b] : edges) {
        const auto [e, added] = boost::add_edge(static_cast<std::size_t>(a), static_cast<std::size_t>(b), g);
        boost::put(boost::edge_index, g, e, index++);
    }
    return g;
}

/// Components of the subgraph induced by vertices with mask[v] != 0.
std::vector<std::vector<int>> induced_components(const PlanarGraph& g, const std::vector<char>& mask) {
    const std::size_t n = g.vertex_count();
    std::vector<char> seen(n, 0);
    std::vector<std::vector<int>> components;
    std::vector<int> queue;
    for (std::size_t s = 0; s < n; ++s) {
        if (!mask[s] || seen[s]) continue;
        components.emplace_back();
        queue.assign(1, static_cast<int>(s));
        seen[s] = 1;
        while (!queue.empty()) {
            const int v = queue.back();
            queue.pop_back();
            components.back().push_back(v);
            for (const int w : g.neighbors(v)) {
                const auto wi = static_cast<std::size_t>(w);
                if (mask[wi] && !seen[wi]) {
                    seen[wi] = 1;
                    queue.push_back(w);
                }
            }
        }
        std::ranges::sort(components.back());
    }
    return components;
}

bool contains_all(const std::vector<char>& mask, const Triangle& t) {
    return mask[static_cast<std::size_t>(t[0])] && mask[static_cast<std::size_t>(t[1])] &&
           mask[static_cast<std::size_t>(t[2])];
}

}  // namespace

PlanarGraph::PlanarGraph(std::size_t vertex_count, EdgeList edges)
    : n_(vertex_count),
      edges_(std::move(edges)),
      adjacency_(vertex_count * vertex_count, 0),
      neighbors_(vertex_count),
      rotation_(vertex_count) {
    for (const auto& e : edges_) {
        if (e.i < 0 || e.j < 0 || static_cast<std::size_t>(e.i) >= n_ || static_cast<std::size_t>(e.j) >= n_ ||
            e.i == e.j) {
            throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
        }
        auto& cell = adjacency_[static_cast<std::size_t>(e.i) * n_ + static_cast<std::size_t>(e.j)];
        if (cell) throw Error(ErrorCode::InvalidArgument, "duplicate edge");
        cell = 1;
        adjacency_[static_cast<std::size_t>(e.j) * n_ + static_cast<std::size_t>(e.i)] = 1;
        neighbors_[static_cast<std::size_t>(e.i)].push_back(e.j);
        neighbors_[static_cast<std::size_t>(e.j)].push_back(e.i);
    }
    for (auto& nb : neighbors_) std::ranges::sort(nb);

    const auto pairs = vertex_pairs();
    BoostGraph g = to_boost(n_, pairs);
    std::vector<std::vector<BoostEdge>> storage(n_);
    const bool planar = boost::boyer_myrvold_planarity_test(
        boost::boyer_myrvold_params::graph = g,
        boost::boyer_myrvold_params::embedding =
            boost::make_iterator_property_map(storage.begin(), boost::get(boost::vertex_index, g)));
    if (!planar) throw Error(ErrorCode::InvalidArgument, "edge set is not planar");
    for (std::size_t v = 0; v < n_; ++v) {
        for (const auto& e : storage[v]) {
            const auto s = boost::source(e, g);
            const auto t = boost::target(e, g);
            rotation_[v].push_back(static_cast<int>(s == v ? t : s));
        }
    }
}

std::vector<VertexPair> PlanarGraph::vertex_pairs() const {
    std::vector<VertexPair> pairs;
    pairs.reserve(edges_.size());
    for (const auto& e : edges_) pairs.emplace_back(e.i, e.j);
    return pairs;
}

EdgeList sorted_edges(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two vertices");
    EdgeList edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            edges.push_back({static_cast<int>(i), static_cast<int>(j), dist(i, j)});
        }
    }
    // pairs are generated in (i, j) order, so a stable sort keeps the tie rule
    std::ranges::stable_sort(edges, {}, &Edge::distance);
    return edges;
}

SpanningTree mst(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    SpanningTree tree{n, {}};
    DisjointSets sets(n);
    for (const auto& e : sorted_edges(dist)) {
        if (sets.unite(e.i, e.j)) {
            tree.edges.push_back(e);
            if (tree.edges.size() + 1 == n) break;
        }
    }
    return tree;
}

PlanarGraph pmfg(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "PMFG needs N >= 3");
    const std::size_t target = 3 * (n - 2);

    EdgeList accepted;
    std::vector<VertexPair> pairs;
    accepted.reserve(target);
    pairs.reserve(target);
    DisjointSets components(n);
    LrPlanarityTester tester;

    for (const auto& e : sorted_edges(dist)) {
        if (accepted.size() == target) break;
        pairs.emplace_back(e.i, e.j);
        // joining two planar components by an edge keeps planarity
        if (!components.unite(e.i, e.j) && !tester.is_component_planar(n, pairs, e.i)) {
            pairs.pop_back();
            continue;
        }
        accepted.push_back(e);
    }
    return PlanarGraph(n, std::move(accepted));
}

std::vector<Triangle> three_cliques(const PlanarGraph& g) {
    std::vector<Triangle> out;
    const auto n = static_cast<int>(g.vertex_count());
    for (int i = 0; i < n; ++i) {
        for (const int j : g.neighbors(i)) {
            if (j <= i) continue;
            for (const int k : g.neighbors(j)) {
                if (k <= j) continue;
                if (g.has_edge(i, k)) out.push_back({i, j, k});
            }
        }
    }
    return out;
}

std::vector<Triangle> separating_triangles(const PlanarGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<Triangle> out;
    if (n <= 4) return out;
    std::vector<char> mask(n, 1);
    for (const auto& t : three_cliques(g)) {
        for (const int v : t) mask[static_cast<std::size_t>(v)] = 0;
        if (induced_components(g, mask).size() > 1) out.push_back(t);
        for (const int v : t) mask[static_cast<std::size_t>(v)] = 1;
    }
    return out;
}

BubbleTree bubble_tree(const PlanarGraph& g) {
    const std::size_t n = g.vertex_count();
    if (!g.is_maximal_planar()) {
        throw Error(ErrorCode::NotMaximalPlanar, std::to_string(g.edges().size()) + " edges for N = " +
                                                     std::to_string(n));
    }

    std::vector<std::vector<char>> pieces{std::vector<char>(n, 1)};
    struct PieceEdge {
        std::size_t a;
        std::size_t b;
        Triangle t;
    };
    std::vector<PieceEdge> links;

    for (const auto& t : separating_triangles(g)) {
        const auto it = std::ranges::find_if(pieces, [&](const auto& mask) { return contains_all(mask, t); });
        if (it == pieces.end()) throw std::logic_error("separating triangle outside every bubble");
        const auto p = static_cast<std::size_t>(it - pieces.begin());

        std::vector<char> inner = pieces[p];
        for (const int v : t) inner[static_cast<std::size_t>(v)] = 0;
        const auto parts = induced_components(g, inner);
        if (parts.size() != 2) throw std::logic_error("separating triangle does not split its bubble in two");

        std::vector<char> first(n, 0);
        std::vector<char> second(n, 0);
        for (const int v : parts[0]) first[static_cast<std::size_t>(v)] = 1;
        for (const int v : parts[1]) second[static_cast<std::size_t>(v)] = 1;
        for (const int v : t) {
            first[static_cast<std::size_t>(v)] = 1;
            second[static_cast<std::size_t>(v)] = 1;
        }
        pieces[p] = std::move(first);
        pieces.push_back(std::move(second));
        const std::size_t q = pieces.size() - 1;
        for (auto& link : links) {
            if (link.a == p && !contains_all(pieces[p], link.t)) link.a = q;
            if (link.b == p && !contains_all(pieces[p], link.t)) link.b = q;
        }
        links.push_back({p, q, t});
    }

    std::vector<std::vector<int>> vertex_sets;
    for (const auto& mask : pieces) {
        std::vector<int> vs;
        for (std::size_t v = 0; v < n; ++v) {
            if (mask[v]) vs.push_back(static_cast<int>(v));
        }
        vertex_sets.push_back(std::move(vs));
    }
    std::vector<std::size_t> order(vertex_sets.size());
    std::iota(order.begin(), order.end(), 0);
    std::ranges::sort(order, [&](std::size_t a, std::size_t b) { return vertex_sets[a] < vertex_sets[b]; });
    std::vector<int> rank(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r);

    BubbleTree tree;
    tree.membership.resize(n);
    for (const std::size_t idx : order) tree.bubbles.push_back(vertex_sets[idx]);
    for (std::size_t b = 0; b < tree.bubbles.size(); ++b) {
        for (const int v : tree.bubbles[b]) tree.membership[static_cast<std::size_t>(v)].push_back(static_cast<int>(b));
    }
    for (const auto& link : links) {
        int a = rank[link.a];
        int b = rank[link.b];
        if (a > b) std::swap(a, b);
        tree.edges.push_back({a, b, link.t});
    }
    std::ranges::sort(tree.edges, [](const BubbleTreeEdge& x, const BubbleTreeEdge& y) {
        return std::tie(x.a, x.b, x.separator) < std::tie(y.a, y.b, y.separator);
    });
    return tree;
}

bool verify_planar(std::size_t vertex_count, std::span<const VertexPair> edges) {
    BoostGraph g = to_boost(vertex_count, edges);
    return boost::boyer_myrvold_planarity_test(g);
}

std::size_t count_faces(const PlanarGraph& g) {
    // darts (u -> rotation index); the face after dart u->v continues with
    // v -> successor of u in v's rotation
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<char>> used(n);
    for (std::size_t v = 0; v < n; ++v) used[v].assign(g.rotation(static_cast<int>(v)).size(), 0);
    auto position = [&](int v, int w) {
        const auto& rot = g.rotation(v);
        return static_cast<std::size_t>(std::ranges::find(rot, w) - rot.begin());
    };
    std::size_t faces = 0;
    for (std::size_t u0 = 0; u0 < n; ++u0) {
        for (std::size_t k0 = 0; k0 < used[u0].size(); ++k0) {
            if (used[u0][k0]) continue;
            ++faces;
            auto u = static_cast<int>(u0);
            std::size_t k = k0;
            while (!used[static_cast<std::size_t>(u)][k]) {
                used[static_cast<std::size_t>(u)][k] = 1;
                const int v = g.rotation(u)[k];
                const auto& rot_v = g.rotation(v);
                const std::size_t back = position(v, u);
                k = (back + 1) % rot_v.size();
                u = v;
            }
        }
    }
    return faces;
}

}  // namespace corrfilter
