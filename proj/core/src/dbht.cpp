#include "corrfilter/dbht.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "corrfilter/error.hpp"

namespace corrfilter {

namespace {

bool in_triangle(const Triangle& t, int v) { return v == t[0] || v == t[1] || v == t[2]; }

int smallest_outside(const std::vector<int>& bubble, const Triangle& t) {
    for (const int v : bubble) {
        if (!in_triangle(t, v)) return v;
    }
    return std::numeric_limits<int>::max();
}

double rho_sum(int v, const std::vector<int>& vertices, const Matrix& rho) {
    double s = 0.0;
    for (const int u : vertices) {
        if (u != v) s += rho(static_cast<std::size_t>(v), static_cast<std::size_t>(u));
    }
    return s;
}

}  // namespace

std::string_view to_string(BubbleKind kind) noexcept {
    switch (kind) {
        case BubbleKind::Converging: return "converging";
        case BubbleKind::Diverging: return "diverging";
        case BubbleKind::Passage: return "passage";
    }
    return "unknown";
}

std::vector<int> DirectedBubbleTree::converging() const {
    std::vector<int> out;
    for (std::size_t b = 0; b < kinds.size(); ++b) {
        if (kinds[b] == BubbleKind::Converging) out.push_back(static_cast<int>(b));
    }
    return out;
}

double attachment(const Triangle& separator, const std::vector<int>& bubble, const CorrelationMatrix& corr,
                  const PlanarGraph& g) {
    double s = 0.0;
    for (const int v : separator) {
        for (const int u : bubble) {
            if (in_triangle(separator, u) || !g.has_edge(v, u)) continue;
            s += corr(static_cast<std::size_t>(v), static_cast<std::size_t>(u));
        }
    }
    return s;
}

DirectedBubbleTree direct_bubble_tree(const BubbleTree& bt, const CorrelationMatrix& corr, const PlanarGraph& g) {
    DirectedBubbleTree out;
    out.tree = bt;
    const std::size_t n_bubbles = bt.bubbles.size();
    std::vector<std::size_t> in_degree(n_bubbles, 0);
    std::vector<std::size_t> degree(n_bubbles, 0);

    for (const auto& e : bt.edges) {
        const auto& ba = bt.bubbles[static_cast<std::size_t>(e.a)];
        const auto& bb = bt.bubbles[static_cast<std::size_t>(e.b)];
        const double sa = attachment(e.separator, ba, corr, g);
        const double sb = attachment(e.separator, bb, corr, g);
        int head = 0;
        if (sa != sb) {
            head = sa > sb ? e.a : e.b;
        } else {
            head = smallest_outside(ba, e.separator) < smallest_outside(bb, e.separator) ? e.a : e.b;
        }
        out.head.push_back(head);
        out.strength_a.push_back(sa);
        out.strength_b.push_back(sb);
        ++in_degree[static_cast<std::size_t>(head)];
        ++degree[static_cast<std::size_t>(e.a)];
        ++degree[static_cast<std::size_t>(e.b)];
    }

    out.kinds.resize(n_bubbles);
    for (std::size_t b = 0; b < n_bubbles; ++b) {
        if (in_degree[b] == degree[b]) {
            out.kinds[b] = BubbleKind::Converging;
        } else if (in_degree[b] == 0) {
            out.kinds[b] = BubbleKind::Diverging;
        } else {
            out.kinds[b] = BubbleKind::Passage;
        }
    }
    return out;
}

Partition dbht_partition(const DirectedBubbleTree& dbt, const CorrelationMatrix& corr, const PlanarGraph& g) {
    const std::size_t n = g.vertex_count();
    const auto& bt = dbt.tree;
    const std::size_t n_bubbles = bt.bubbles.size();
    const std::vector<int> sinks = dbt.converging();
    if (sinks.empty()) throw std::logic_error("directed bubble tree without a converging bubble");

    std::vector<int> cluster_of_bubble(n_bubbles, -1);
    for (std::size_t c = 0; c < sinks.size(); ++c) cluster_of_bubble[static_cast<std::size_t>(sinks[c])] = static_cast<int>(c);

    // reachable[b] = clusters downstream of bubble b along directed edges
    std::vector<std::vector<int>> out_edges(n_bubbles);
    for (std::size_t k = 0; k < bt.edges.size(); ++k) {
        const auto& e = bt.edges[k];
        const int tail = dbt.head[k] == e.a ? e.b : e.a;
        out_edges[static_cast<std::size_t>(tail)].push_back(dbt.head[k]);
    }
    std::vector<std::vector<char>> reachable(n_bubbles, std::vector<char>(sinks.size(), 0));
    for (std::size_t b = 0; b < n_bubbles; ++b) {
        std::vector<int> stack{static_cast<int>(b)};
        std::vector<char> seen(n_bubbles, 0);
        seen[b] = 1;
        while (!stack.empty()) {
            const auto x = static_cast<std::size_t>(stack.back());
            stack.pop_back();
            if (cluster_of_bubble[x] >= 0) reachable[b][static_cast<std::size_t>(cluster_of_bubble[x])] = 1;
            for (const int y : out_edges[x]) {
                if (!seen[static_cast<std::size_t>(y)]) {
                    seen[static_cast<std::size_t>(y)] = 1;
                    stack.push_back(y);
                }
            }
        }
    }

    std::vector<int> label(n, -1);
    for (std::size_t v = 0; v < n; ++v) {
        double best = -std::numeric_limits<double>::infinity();
        for (const int b : bt.membership[v]) {
            const int c = cluster_of_bubble[static_cast<std::size_t>(b)];
            if (c < 0) continue;
            const double s = rho_sum(static_cast<int>(v), bt.bubbles[static_cast<std::size_t>(b)], corr.values);
            if (label[v] < 0 || s > best) {
                best = s;
                label[v] = c;
            }
        }
    }

    // Remaining vertices take the admissible cluster with the largest rho sum
    // to assigned neighbours, one frontier at a time so that order within a
    // round does not matter. A round without progress lifts the
    // reachability restriction.
    std::vector<std::vector<char>> admissible(n, std::vector<char>(sinks.size(), 0));
    for (std::size_t v = 0; v < n; ++v) {
        for (const int b : bt.membership[v]) {
            const auto& r = reachable[static_cast<std::size_t>(b)];
            for (std::size_t c = 0; c < sinks.size(); ++c) admissible[v][c] |= r[c];
        }
    }
    bool restricted = true;
    std::vector<double> score(sinks.size());
    std::vector<char> touched(sinks.size());
    while (std::ranges::find(label, -1) != label.end()) {
        std::vector<int> next = label;
        bool progress = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (label[v] >= 0) continue;
            std::ranges::fill(score, 0.0);
            std::ranges::fill(touched, 0);
            for (const int u : g.neighbors(static_cast<int>(v))) {
                const int c = label[static_cast<std::size_t>(u)];
                if (c < 0 || (restricted && !admissible[v][static_cast<std::size_t>(c)])) continue;
                score[static_cast<std::size_t>(c)] += corr(v, static_cast<std::size_t>(u));
                touched[static_cast<std::size_t>(c)] = 1;
            }
            int best_c = -1;
            for (std::size_t c = 0; c < sinks.size(); ++c) {
                if (touched[c] && (best_c < 0 || score[c] > score[static_cast<std::size_t>(best_c)])) {
                    best_c = static_cast<int>(c);
                }
            }
            if (best_c >= 0) {
                next[v] = best_c;
                progress = true;
            }
        }
        if (!progress) {
            if (!restricted) throw std::logic_error("dbht assignment stalled on a disconnected graph");
            restricted = false;
            continue;
        }
        label = std::move(next);
        restricted = true;
    }
    return Partition(label);
}

Dendrogram dbht_hierarchy(const Partition& partition, const DistanceMatrix& dist, const BubbleTree& bt) {
    const std::size_t n = dist.size();
    if (partition.size() != n) throw Error(ErrorCode::InvalidArgument, "partition and distance matrix differ in size");
    if (!bt.membership.empty() && bt.membership.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "bubble tree and distance matrix differ in size");
    }
    const std::vector<std::vector<int>> levels{partition.labels()};
    return constrained_linkage(dist.values, LinkageRule::Complete, levels);
}

DbhtResult dbht(const DistanceMatrix& dist, const CorrelationMatrix& corr) {
    const std::size_t n = dist.size();
    if (corr.size() != n || dist.values.cols() != n || corr.values.cols() != n) {
        throw Error(ErrorCode::InconsistentInputs, "distance and correlation matrices differ in size");
    }
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "DBHT needs at least 3 items");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double expected = std::sqrt(std::max(0.0, 2.0 * (1.0 - corr(i, j))));
            if (!(std::abs(dist(i, j) - expected) <= 1e-9)) {
                throw Error(ErrorCode::InconsistentInputs, "D(" + std::to_string(i) + ", " + std::to_string(j) +
                                                               ") does not match sqrt(2 (1 - rho))");
            }
        }
    }

    DbhtResult out;
    out.graph = pmfg(dist);
    const BubbleTree bt = bubble_tree(out.graph);
    out.directed = direct_bubble_tree(bt, corr, out.graph);
    out.partition = dbht_partition(out.directed, corr, out.graph);
    out.n_cl = out.partition.cluster_count();
    out.dendrogram = dbht_hierarchy(out.partition, dist, bt);
    return out;
}

}  // namespace corrfilter
