#include <doctest.h>

#include <cmath>

#include "corrfilter/error.hpp"
#include "corrfilter/ingest.hpp"
#include "temp_dir.hpp"

using namespace corrfilter;
using testing::TempDir;

namespace {

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

PricePanel single(std::vector<double> prices) {
    PricePanel p;
    p.tickers = {"A"};
    for (std::size_t t = 0; t < prices.size(); ++t) p.dates.push_back("2020-01-0" + std::to_string(t + 1));
    p.prices = Matrix(1, prices.size());
    for (std::size_t t = 0; t < prices.size(); ++t) p.prices(0, t) = prices[t];
    return p;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("wide prices load with sorted tickers and dates") {
    TempDir dir;
    const auto f = dir.write("p.csv", "date,B,A\n2020-01-03,4,3\n2020-01-02,2,1\n2020-01-06,6,5\n");
    const PricePanel p = load_prices(f, PriceLayout::Wide);
    CHECK(p.tickers == std::vector<std::string>{"A", "B"});
    CHECK(p.dates == std::vector<std::string>{"2020-01-02", "2020-01-03", "2020-01-06"});
    CHECK(p.prices(0, 0) == 1.0);
    CHECK(p.prices(1, 2) == 6.0);
}

TEST_CASE("two tickers by three dates") {
    TempDir dir;
    const auto f = dir.write("p.csv", "date,A,B\n2020-01-02,1,2\n2020-01-03,1.5,2.5\n2020-01-06,1.25,3\n");
    const PricePanel p = load_prices(f, PriceLayout::Wide);
    CHECK(p.prices.rows() == 2);
    CHECK(p.prices.cols() == 3);
}

TEST_CASE("price rules") {
    TempDir dir;
    const auto zero = dir.write("z.csv", "date,A,B\n2020-01-02,1,2\n2020-01-03,0,2.5\n2020-01-06,1.25,3\n");
    CHECK(code_of([&] { (void)load_prices(zero, PriceLayout::Wide); }) == ErrorCode::NonPositivePrice);
    const auto neg = dir.write("n.csv", "date,A\n2020-01-02,-1\n");
    CHECK(code_of([&] { (void)load_prices(neg, PriceLayout::Wide); }) == ErrorCode::NonPositivePrice);
    const auto blank = dir.write("b.csv", "date,A,B\n2020-01-02,1,\n2020-01-03,1,2\n");
    CHECK(code_of([&] { (void)load_prices(blank, PriceLayout::Wide); }) == ErrorCode::MissingCell);
    const auto date = dir.write("d.csv", "date,A\n2020-02-30,1\n");
    CHECK(code_of([&] { (void)load_prices(date, PriceLayout::Wide); }) == ErrorCode::UnparsableDate);
    const auto text = dir.write("t.csv", "date,A\n2020-02-03,abc\n");
    CHECK(code_of([&] { (void)load_prices(text, PriceLayout::Wide); }) == ErrorCode::UnparsableNumber);
    const auto dup = dir.write("u.csv", "date,A,A\n2020-02-03,1,2\n");
    CHECK(code_of([&] { (void)load_prices(dup, PriceLayout::Wide); }) == ErrorCode::DuplicateTicker);
    CHECK(code_of([&] { (void)load_prices(dir / "absent.csv", PriceLayout::Wide); }) == ErrorCode::Io);
}

TEST_CASE("long layout") {
    TempDir dir;
    const auto ok = dir.write("l.csv",
                              "date,ticker,close\n2020-01-02,A,1\n2020-01-02,B,2\n2020-01-03,B,3\n2020-01-03,A,4\n");
    const PricePanel p = load_prices(ok, PriceLayout::Long);
    CHECK(p.tickers == std::vector<std::string>{"A", "B"});
    CHECK(p.prices(0, 1) == 4.0);
    CHECK(p.prices(1, 0) == 2.0);

    const auto gap = dir.write("g.csv", "date,ticker,close\n2020-01-02,A,1\n2020-01-02,B,2\n2020-01-03,A,4\n");
    CHECK(code_of([&] { (void)load_prices(gap, PriceLayout::Long); }) == ErrorCode::MissingCell);
}

TEST_CASE("log returns") {
    CHECK(log_returns(single({100, 100, 100})).returns == Matrix(1, 2, 0.0));
    CHECK(log_returns(single({100, 100 * std::exp(1.0)})).returns(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    const auto r = log_returns(single({100, 110, 99})).returns;
    CHECK(r(0, 0) == doctest::Approx(0.0953101798).epsilon(1e-9));
    CHECK(r(0, 1) == doctest::Approx(-0.1053605157).epsilon(1e-9));
    const auto panel = log_returns(single({1, 2, 3}));
    CHECK(panel.dates == std::vector<std::string>{"2020-01-02", "2020-01-03"});
    CHECK(code_of([] { (void)log_returns(single({1})); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("detrending") {
    SUBCASE("identical series leave nothing") {
        ReturnsPanel p;
        p.tickers = {"A", "B", "C"};
        p.returns = Matrix(3, 5);
        const double s[] = {0.1, -0.2, 0.05, 0.3, -0.1};
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t t = 0; t < 5; ++t) p.returns(i, t) = s[t];
        }
        const auto [res, fit] = detrend_market_mode(p);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(fit.beta[i] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(fit.alpha[i]) < 1e-15);
            for (std::size_t t = 0; t < 5; ++t) CHECK(std::abs(res.returns(i, t)) < 1e-15);
        }
    }
    SUBCASE("two-stock hand case") {
        ReturnsPanel p;
        p.tickers = {"A", "B"};
        p.returns = Matrix(2, 4);
        const double s[] = {1.0, -2.0, 3.0, -2.0};
        for (std::size_t t = 0; t < 4; ++t) p.returns(1, t) = s[t];
        const auto [res, fit] = detrend_market_mode(p);
        CHECK(std::abs(fit.beta[0]) < 1e-12);
        CHECK(fit.beta[1] == doctest::Approx(2.0).epsilon(1e-12));
        for (std::size_t t = 0; t < 4; ++t) {
            CHECK(fit.market_index[t] == doctest::Approx(s[t] / 2));
            CHECK(std::abs(res.returns(0, t)) < 1e-12);
            CHECK(std::abs(res.returns(1, t)) < 1e-12);
        }
    }
    SUBCASE("constant market index") {
        ReturnsPanel p;
        p.tickers = {"A", "B"};
        p.returns = Matrix(2, 4, 0.01);
        CHECK(code_of([&] { (void)detrend_market_mode(p); }) == ErrorCode::DegenerateMarketIndex);
    }
    SUBCASE("residuals carry no market exposure") {
        ReturnsPanel p;
        p.tickers = {"A", "B", "C", "D"};
        p.returns = Matrix(4, 50);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t t = 0; t < 50; ++t) p.returns(i, t) = std::sin(0.3 * double(t) * double(i + 1)) + 0.1 * double(i);
        }
        const auto [res, fit] = detrend_market_mode(p);
        // regressing the residuals on the original index gives zero slope
        const auto [again, refit] = regress_on(res.returns, fit.market_index);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(refit.beta[i]) < 1e-12);
            CHECK(std::abs(refit.alpha[i]) < 1e-12);
        }
    }
}

TEST_CASE("taxonomy") {
    TempDir dir;
    const auto ok = dir.write("t.csv", "ticker,supersector,industry\nA,Banks,Fin\nB,Insurance,Fin\nC,Oil,Energy\n");
    const Taxonomy t = load_taxonomy(ok);
    CHECK(t.size() == 3);
    CHECK(t.supersectors() == std::vector<std::string>{"Banks", "Insurance", "Oil"});
    CHECK(t.industries() == std::vector<std::string>{"Energy", "Fin"});
    CHECK(t.supersector_labels({"C", "A"}) == std::vector<int>{2, 0});
    CHECK(code_of([&] { (void)t.supersector_labels({"Z"}); }) == ErrorCode::UnknownTicker);
    CHECK(unclassified_tickers(t, {"Q", "A", "P"}) == std::vector<std::string>{"P", "Q"});

    const auto dup = dir.write("d.csv", "ticker,supersector,industry\nA,Banks,Fin\nA,Oil,Energy\n");
    CHECK(code_of([&] { (void)load_taxonomy(dup); }) == ErrorCode::DuplicateTicker);
    const auto empty = dir.write("e.csv", "ticker,supersector,industry\nA,,Fin\n");
    CHECK(code_of([&] { (void)load_taxonomy(empty); }) == ErrorCode::EmptyLabel);
    const auto split = dir.write("s.csv", "ticker,supersector,industry\nA,Banks,Fin\nB,Banks,Energy\n");
    CHECK(code_of([&] { (void)load_taxonomy(split); }) == ErrorCode::MalformedFile);
}

TEST_CASE("nineteen supersectors") {
    TempDir dir;
    std::string text = "ticker,supersector,industry\n";
    for (int i = 0; i < 57; ++i) {
        text += "T" + std::to_string(i) + ",S" + std::to_string(i % 19) + ",I" + std::to_string(i % 19 / 2) + "\n";
    }
    CHECK(load_taxonomy(dir.write("t.csv", text)).supersectors().size() == 19);
}

TEST_CASE("round trips") {
    TempDir dir;
    PricePanel p;
    p.tickers = {"A", "B"};
    p.dates = {"2021-03-01", "2021-03-02", "2021-03-03"};
    p.prices = Matrix(2, 3);
    const double v[] = {1.0, 1.1, 0.123456789012345, 17.0, 1e-3, 2.5};
    for (std::size_t k = 0; k < 6; ++k) p.prices(k / 3, k % 3) = v[k];
    write_prices_wide(dir / "p.csv", p);
    const PricePanel back = load_prices(dir / "p.csv", PriceLayout::Wide);
    CHECK(back.tickers == p.tickers);
    CHECK(back.dates == p.dates);
    CHECK(back.prices == p.prices);

    const Taxonomy t({{"A", {"S1", "I1"}}, {"B", {"S2", "I1"}}});
    write_taxonomy(dir / "t.csv", t);
    CHECK(load_taxonomy(dir / "t.csv").entries().at("B").supersector == "S2");
}

TEST_CASE("slicing") {
    ReturnsPanel p;
    p.tickers = {"A"};
    p.dates = {"d1", "d2", "d3", "d4"};
    p.returns = Matrix(1, 4);
    for (std::size_t t = 0; t < 4; ++t) p.returns(0, t) = double(t);
    const auto s = p.slice(1, 3);
    CHECK(s.dates == std::vector<std::string>{"d2", "d3"});
    CHECK(s.returns(0, 0) == 1.0);
    CHECK(s.returns(0, 1) == 2.0);
}

TEST_CASE("iso dates") {
    CHECK(is_iso_date("2020-02-29"));
    CHECK_FALSE(is_iso_date("2019-02-29"));
    CHECK_FALSE(is_iso_date("2020-1-02"));
    CHECK_FALSE(is_iso_date("2020-13-01"));
}

}
