#include <doctest.h>

#include <cmath>

#include "corrfilter/correlation.hpp"
#include "corrfilter/dbht.hpp"
#include "corrfilter/error.hpp"
#include "corrfilter/metrics.hpp"
#include "corrfilter/synth.hpp"

using namespace corrfilter;

namespace {

struct BlockMeans {
    double within = 0;
    double across = 0;
};

BlockMeans block_means(const CorrelationMatrix& c, const std::vector<int>& sectors) {
    BlockMeans m;
    double nw = 0, na = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            if (sectors[i] == sectors[j]) {
                m.within += c(i, j);
                nw += 1;
            } else {
                m.across += c(i, j);
                na += 1;
            }
        }
    }
    m.within /= nw;
    m.across /= na;
    return m;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("planted sectors spread the remainder") {
    CHECK(planted_sectors(7, 3) == std::vector<int>{0, 0, 0, 1, 1, 2, 2});
    CHECK(planted_sectors(6, 3) == std::vector<int>{0, 0, 1, 1, 2, 2});
    const auto [returns, taxonomy] = generate(SynthSpec{.n = 23, .t = 10, .n_sectors = 5});
    CHECK(returns.tickers.front() == "T0001");
    CHECK(taxonomy.supersectors().size() == 5);
    CHECK(taxonomy.supersector_labels(returns.tickers) == planted_sectors(23, 5));
    CHECK(taxonomy.industries().size() == 3);
}

TEST_CASE("no loadings means no correlation") {
    SynthSpec spec;
    spec.market_loading = {0, 0};
    spec.sector_loading = {0, 0};
    spec.seed = 4;
    const auto [returns, taxonomy] = generate(spec);
    CHECK(returns.size() == 100);
    CHECK(returns.length() == 2000);
    CHECK(std::abs(mean_offdiagonal(pearson(returns, WeightScheme::uniform()))) <= 0.02);
}

TEST_CASE("sectors alone are recovered by DBHT") {
    SynthSpec spec;
    spec.market_loading = {0, 0};
    spec.sector_loading = {0.8, 1.2};
    spec.seed = 9;
    const auto [returns, taxonomy] = generate(spec);
    const auto c = pearson(returns, WeightScheme::uniform());
    const auto r = dbht(to_distance(c), c);
    CHECK(adjusted_rand(r.partition, Partition(taxonomy.supersector_labels(returns.tickers))) >= 0.9);
}

TEST_CASE("detrending removes most of a strong market mode") {
    SynthSpec spec;
    spec.market_loading = {1.0, 1.5};
    spec.sector_loading = {0.2, 0.5};
    spec.seed = 1;
    const auto returns = generate(spec).first;
    const double before = mean_offdiagonal(pearson(returns, WeightScheme::uniform()));
    const double after = mean_offdiagonal(pearson(detrend_market_mode(returns).first, WeightScheme::uniform()));
    CHECK(after < before);
    CHECK(after <= 0.6 * before);
}

TEST_CASE("estimates converge as the panel grows") {
    // loadings depend only on the seed, so a very long panel stands in for
    // the population correlation
    SynthSpec spec{.n = 20, .t = 64000, .n_sectors = 4};
    spec.seed = 5;
    const auto reference = pearson(generate(spec).first, WeightScheme::uniform());
    double previous = 1e9;
    for (const std::size_t t : {500u, 2000u, 8000u}) {
        spec.t = t;
        const auto [returns, taxonomy] = generate(spec);
        const auto c = pearson(returns, WeightScheme::uniform());
        const auto m = block_means(c, taxonomy.supersector_labels(returns.tickers));
        CHECK(m.within > m.across);
        double err = 0;
        for (std::size_t i = 0; i < 20; ++i) {
            for (std::size_t j = i + 1; j < 20; ++j) err += std::abs(c(i, j) - reference(i, j));
        }
        CHECK(err < previous);
        previous = err;
    }
}

TEST_CASE("seeded determinism") {
    SynthSpec spec{.n = 30, .t = 200, .n_sectors = 3};
    spec.seed = 17;
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(a.first.returns == b.first.returns);
    CHECK(a.first.dates == b.first.dates);
    spec.seed = 18;
    CHECK_FALSE(generate(spec).first.returns == a.first.returns);
}

TEST_CASE("student-t noise has unit variance") {
    SynthSpec spec{.n = 20, .t = 20000, .n_sectors = 2};
    spec.market_loading = {0, 0};
    spec.sector_loading = {0, 0};
    spec.noise = NoiseKind::StudentT;
    spec.student_df = 5;
    spec.scale = 1.0;
    const auto r = generate(spec).first.returns;
    double ss = 0;
    for (const double v : r.data()) ss += v * v;
    CHECK(ss / static_cast<double>(r.data().size()) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("prices round-trip through log returns") {
    SynthSpec spec{.n = 5, .t = 30, .n_sectors = 2};
    const auto returns = generate(spec).first;
    const auto prices = to_prices(returns);
    CHECK(prices.dates.size() == 31);
    CHECK(returns.dates.front() == "2000-01-04");
    CHECK(prices.dates.front() == "2000-01-03");
    const auto back = log_returns(prices);
    CHECK(back.dates == returns.dates);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t t = 0; t < 30; ++t) CHECK(back.returns(i, t) == doctest::Approx(returns.returns(i, t)).epsilon(1e-9));
    }
}

TEST_CASE("business days skip weekends") {
    const auto d = business_days("2021-01-01", 4);
    CHECK(d == std::vector<std::string>{"2021-01-01", "2021-01-04", "2021-01-05", "2021-01-06"});
    CHECK_THROWS_AS((void)business_days("2021-02-30", 2), Error);
}

TEST_CASE("generator settings are validated") {
    CHECK_THROWS_AS(validate(SynthSpec{.n = 1}), Error);
    CHECK_THROWS_AS(validate(SynthSpec{.n = 10, .t = 10, .n_sectors = 11}), Error);
    SynthSpec s;
    s.idio_vol = 0;
    CHECK_THROWS_AS(validate(s), Error);
    s = SynthSpec{};
    s.market_loading = {2, 1};
    CHECK_THROWS_AS(validate(s), Error);
    s = SynthSpec{};
    s.noise = NoiseKind::StudentT;
    s.student_df = 2;
    CHECK_THROWS_AS(validate(s), Error);
}

}
