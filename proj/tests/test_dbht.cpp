#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "corrfilter/dbht.hpp"
#include "corrfilter/error.hpp"
#include "corrfilter/export.hpp"
#include "corrfilter/metrics.hpp"
#include "corrfilter/synth.hpp"
#include "support.hpp"

using namespace corrfilter;

namespace {

struct Hand {
    PlanarGraph graph;
    CorrelationMatrix corr;
};

// rho given on the listed edges, zero elsewhere
Hand hand_case(std::size_t n, const std::vector<std::tuple<int, int, double>>& edges) {
    Hand h;
    h.corr.values = Matrix(n, n);
    EdgeList el;
    for (std::size_t i = 0; i < n; ++i) h.corr.values(i, i) = 1.0;
    for (const auto& [a, b, r] : edges) {
        h.corr.values(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) = r;
        h.corr.values(static_cast<std::size_t>(b), static_cast<std::size_t>(a)) = r;
        el.push_back({a, b, 1.0 - r});
    }
    h.graph = PlanarGraph(n, el);
    return h;
}

// Tetrahedra on either side of triangle 0-1-2: 3 on one side, 4 on the other.
Hand glued(double to3, double to4) {
    return hand_case(5, {{0, 1, 0.5}, {0, 2, 0.5}, {1, 2, 0.5}, {0, 3, to3}, {1, 3, to3}, {2, 3, to3},
                         {0, 4, to4}, {1, 4, to4}, {2, 4, to4}});
}

bool cut_reproduces(const DbhtResult& r) { return cut(r.dendrogram, r.n_cl) == r.partition; }

}  // namespace

TEST_SUITE("dbht") {

TEST_CASE("single bubble") {
    const auto h = hand_case(4, {{0, 1, 0.3}, {0, 2, 0.2}, {0, 3, 0.1}, {1, 2, 0.4}, {1, 3, 0.5}, {2, 3, 0.6}});
    const auto dbt = direct_bubble_tree(bubble_tree(h.graph), h.corr, h.graph);
    CHECK(dbt.head.empty());
    CHECK(dbt.converging() == std::vector<int>{0});
    CHECK(dbht_partition(dbt, h.corr, h.graph).cluster_count() == 1);
}

TEST_CASE("edge points at the stronger side") {
    for (const bool three_wins : {true, false}) {
        const auto h = three_wins ? glued(0.8, 0.1) : glued(0.1, 0.8);
        const auto bt = bubble_tree(h.graph);
        REQUIRE(bt.bubbles == std::vector<std::vector<int>>{{0, 1, 2, 3}, {0, 1, 2, 4}});
        CHECK(attachment(bt.edges[0].separator, bt.bubbles[0], h.corr, h.graph) ==
              doctest::Approx(three_wins ? 2.4 : 0.3));
        const auto dbt = direct_bubble_tree(bt, h.corr, h.graph);
        CHECK(dbt.head[0] == (three_wins ? 0 : 1));
        CHECK(dbt.converging() == std::vector<int>{three_wins ? 0 : 1});
        CHECK(dbt.kinds[three_wins ? 1u : 0u] == BubbleKind::Diverging);
    }
}

TEST_CASE("equal attachments use the tie rule") {
    const auto h = glued(0.4, 0.4);
    const auto dbt = direct_bubble_tree(bubble_tree(h.graph), h.corr, h.graph);
    CHECK(dbt.strength_a[0] == dbt.strength_b[0]);
    CHECK(dbt.head[0] == 0);  // the bubble holding vertex 3
}

TEST_CASE("two converging ends of a chain") {
    // bubbles {0,1,2,4} - {0,1,2,3} - {0,1,3,5}; the ends pull harder
    const auto h = hand_case(6, {{0, 1, 0.3}, {0, 2, 0.5}, {1, 2, 0.5}, {0, 3, 0.4}, {1, 3, 0.4}, {2, 3, 0.2},
                                 {0, 4, 0.9}, {1, 4, 0.9}, {2, 4, 0.9}, {0, 5, 0.9}, {1, 5, 0.9}, {3, 5, 0.9}});
    const auto bt = bubble_tree(h.graph);
    const auto dbt = direct_bubble_tree(bt, h.corr, h.graph);
    REQUIRE(dbt.converging().size() == 2);
    std::size_t passage_or_diverging = 0;
    for (const auto k : dbt.kinds) passage_or_diverging += k != BubbleKind::Converging;
    CHECK(passage_or_diverging == 1);
    const Partition p = dbht_partition(dbt, h.corr, h.graph);
    CHECK(p.labels() == std::vector<int>{0, 0, 0, 1, 0, 1});

    DistanceMatrix d{Matrix(6, 6), {}};
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) d.values(i, j) = std::sqrt(2 * (1 - h.corr(i, j)));
    }
    CHECK(cut(dbht_hierarchy(p, d, bt), 2) == p);
}

TEST_CASE("hierarchy edge cases") {
    const auto d = testing::random_distances(9, 4);
    const auto h = dbht_hierarchy(Partition(std::vector<int>(9, 0)), d, BubbleTree{});
    const auto cl = linkage(d, LinkageRule::Complete);
    REQUIRE(h.merges.size() == cl.merges.size());
    for (std::size_t k = 0; k < cl.merges.size(); ++k) {
        CHECK(h.merges[k].left == cl.merges[k].left);
        CHECK(h.merges[k].right == cl.merges[k].right);
        CHECK(h.merges[k].height == cl.merges[k].height);
    }
    const auto pair = dbht_hierarchy(Partition(std::vector<int>{0, 1}), testing::from_values(2, {0.7}), BubbleTree{});
    REQUIRE(pair.merges.size() == 1);
    CHECK(pair.merges[0].height == 0.7);
}

namespace {

CorrelationMatrix block_diagonal(std::size_t n, std::size_t blocks, double within) {
    const auto lab = testing::block_labels(n, blocks);
    CorrelationMatrix c{Matrix(n, n), {}};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) c.values(i, j) = i == j ? 1.0 : (lab[i] == lab[j] ? within : 0.0);
    }
    return c;
}

}  // namespace

TEST_CASE("two strong blocks") {
    const auto c = block_diagonal(30, 2, 0.7);
    const auto r = dbht(to_distance(c), c);
    CHECK(r.n_cl == 2);
    CHECK(adjusted_rand(r.partition, Partition(testing::block_labels(30, 2))) == 1.0);
    CHECK(cut_reproduces(r));
}

TEST_CASE("four exact blocks of fifteen") {
    const auto c = block_diagonal(60, 4, 0.5);
    const auto r = dbht(to_distance(c), c);
    CHECK(r.n_cl == 4);
    CHECK(cut(r.dendrogram, 4) == Partition(testing::block_labels(60, 4)));
}

TEST_CASE("four planted sectors in a sampled panel") {
    SynthSpec spec{.n = 60, .t = 2000, .n_sectors = 4};
    spec.market_loading = {0, 0};
    spec.sector_loading = {2.0, 3.0};
    const auto [returns, taxonomy] = generate(spec);
    const Partition truth(taxonomy.supersector_labels(returns.tickers));
    const auto c = pearson(returns, WeightScheme::uniform());
    const auto r = dbht(to_distance(c), c);
    CHECK(r.n_cl == 4);
    CHECK(adjusted_rand(r.partition, truth) >= 0.9);
    CHECK(cut(r.dendrogram, 4) == truth);

    // homogeneous blocks can split once, but never across sectors
    for (std::uint64_t seed = 1; seed < 10; ++seed) {
        spec.seed = seed;
        const auto [rs, tx] = generate(spec);
        const auto cs = pearson(rs, WeightScheme::uniform());
        const auto rr = dbht(to_distance(cs), cs);
        CHECK(adjusted_rand(rr.partition, Partition(tx.supersector_labels(rs.tickers))) >= 0.9);
        CHECK(rr.n_cl >= 4);
        CHECK(rr.n_cl <= 5);
    }
}

TEST_CASE("identity correlation") {
    const std::size_t n = 12;
    CorrelationMatrix c{Matrix(n, n), {}};
    for (std::size_t i = 0; i < n; ++i) c.values(i, i) = 1.0;
    const auto r = dbht(to_distance(c), c);
    MESSAGE("n_cl on the identity: " << r.n_cl);
    CHECK(r.n_cl >= 1);
    CHECK(r.partition.size() == n);
    CHECK(cut_reproduces(r));
}

TEST_CASE("structural invariants on random inputs") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t n = 3 + seed * 3 % 60;
        const auto [c, d] = testing::corr_and_dist(testing::random_returns(n, 60, 500 + seed));
        const auto r = dbht(d, c);
        CHECK(r.n_cl == r.partition.cluster_count());
        CHECK(r.n_cl == r.directed.converging().size());
        CHECK(r.dendrogram.merges.size() == n - 1);
        CHECK(cut_reproduces(r));
        // every cluster reaches into some converging bubble
        std::vector<char> seeded(r.n_cl, 0);
        for (const int b : r.directed.converging()) {
            for (const int v : r.directed.tree.bubbles[static_cast<std::size_t>(b)]) {
                seeded[static_cast<std::size_t>(r.partition[static_cast<std::size_t>(v)])] = 1;
            }
        }
        CHECK(std::ranges::count(seeded, 1) == static_cast<std::ptrdiff_t>(r.n_cl));
    }
}

TEST_CASE("relabelling the items permutes the result") {
    const std::size_t n = 40;
    const Matrix returns = testing::block_returns(n, 400, 5, 0.7, 12);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(1));
    Matrix shuffled(n, 400);
    for (std::size_t i = 0; i < n; ++i) {
        std::ranges::copy(returns.row(perm[i]), shuffled.row(i).begin());
    }
    const auto [c1, d1] = testing::corr_and_dist(returns);
    const auto [c2, d2] = testing::corr_and_dist(shuffled);
    const auto a = dbht(d1, c1);
    const auto b = dbht(d2, c2);
    CHECK(a.n_cl == b.n_cl);
    std::vector<int> back(n);
    for (std::size_t i = 0; i < n; ++i) back[perm[i]] = b.partition[i];
    CHECK(Partition(back) == a.partition);
}

TEST_CASE("three items") {
    const auto [c, d] = testing::corr_and_dist(testing::random_returns(3, 50, 1));
    const auto r = dbht(d, c);
    CHECK(r.n_cl == 1);
    CHECK(r.dendrogram.merges.size() == 2);
}

TEST_CASE("input checks") {
    const auto [c, d] = testing::corr_and_dist(testing::random_returns(6, 50, 1));
    DistanceMatrix off = d;
    off.values(0, 1) += 1e-6;
    CHECK_THROWS_AS((void)dbht(off, c), Error);
    const auto [c2, d2] = testing::corr_and_dist(testing::random_returns(2, 50, 1));
    CHECK_THROWS_AS((void)dbht(d2, c2), Error);
    const auto [c5, d5] = testing::corr_and_dist(testing::random_returns(5, 50, 1));
    CHECK_THROWS_AS((void)dbht(d, c5), Error);
}

TEST_CASE("json export") {
    const auto [c, d] = testing::corr_and_dist(testing::block_returns(12, 300, 2, 1.5, 3));
    const auto r = dbht(d, c);
    std::vector<std::string> tickers;
    for (int i = 0; i < 12; ++i) tickers.push_back("T" + std::to_string(i));
    const std::string js = dbht_json(r, tickers);
    CHECK(js.find("\"n_cl\"") != std::string::npos);
    CHECK(js.find("\"merges\"") != std::string::npos);
    CHECK(js.find("\"bubbles\"") != std::string::npos);
    CHECK(js.find("\"converging\"") != std::string::npos);
}

}
