#include "corrfilter/synth.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>

#include "corrfilter/error.hpp"
#include "corrfilter/parallel.hpp"

namespace corrfilter {

namespace {

using std::chrono::sys_days;
using std::chrono::year_month_day;

sys_days parse_day(const std::string& iso) {
    if (!is_iso_date(iso)) throw Error(ErrorCode::UnparsableDate, iso);
    const int y = std::stoi(iso.substr(0, 4));
    const unsigned m = static_cast<unsigned>(std::stoi(iso.substr(5, 2)));
    const unsigned d = static_cast<unsigned>(std::stoi(iso.substr(8, 2)));
    return sys_days{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

std::string format_day(sys_days day) {
    const year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

bool is_weekend(sys_days day) {
    const std::chrono::weekday wd{day};
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

std::string padded(const char* prefix, std::size_t value, std::size_t width) {
    std::string digits = std::to_string(value);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return prefix + digits;
}

std::size_t digit_count(std::size_t v) { return std::to_string(v).size(); }

class NoiseSource {
public:
    NoiseSource(const SynthSpec& spec, std::uint64_t seed)
        : kind_(spec.noise), rng_(seed), student_(spec.student_df),
          student_scale_(std::sqrt((spec.student_df - 2.0) / spec.student_df)) {}

    double operator()() {
        if (kind_ == NoiseKind::Gaussian) return gauss_(rng_);
        return student_(rng_) * student_scale_;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    NoiseKind kind_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    std::student_t_distribution<double> student_;
    double student_scale_;
};

}  // namespace

void validate(const SynthSpec& spec) {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (spec.n < 2) bad("synthetic panel needs at least 2 tickers");
    if (spec.t < 2) bad("synthetic panel needs at least 2 observations");
    if (spec.n_sectors < 1 || spec.n_sectors > spec.n) bad("sector count must lie in [1, N]");
    for (const auto& r : {spec.market_loading, spec.sector_loading}) {
        if (!(r.low <= r.high) || !std::isfinite(r.low) || !std::isfinite(r.high)) bad("invalid loading range");
    }
    if (!(spec.idio_vol > 0.0)) bad("idiosyncratic volatility must be positive");
    if (!(spec.scale > 0.0)) bad("scale must be positive");
    if (spec.noise == NoiseKind::StudentT && !(spec.student_df > 2.0)) bad("Student-t noise needs df > 2");
}

std::vector<int> planted_sectors(std::size_t n, std::size_t n_sectors) {
    std::vector<int> out;
    out.reserve(n);
    const std::size_t base = n / n_sectors;
    const std::size_t extra = n % n_sectors;
    for (std::size_t s = 0; s < n_sectors; ++s) {
        const std::size_t size = base + (s < extra ? 1 : 0);
        out.insert(out.end(), size, static_cast<int>(s));
    }
    return out;
}

std::vector<std::string> business_days(const std::string& start, std::size_t count) {
    std::vector<std::string> out;
    out.reserve(count);
    for (sys_days day = parse_day(start); out.size() < count; day += std::chrono::days{1}) {
        if (!is_weekend(day)) out.push_back(format_day(day));
    }
    return out;
}

std::pair<ReturnsPanel, Taxonomy> generate(const SynthSpec& spec) {
    validate(spec);
    const std::size_t n = spec.n;
    const std::size_t t = spec.t;
    const auto sector = planted_sectors(n, spec.n_sectors);

    // Row 0 is the market factor, rows 1.. the sector factors.
    Matrix factors(spec.n_sectors + 1, t);
    {
        std::mt19937_64 rng(derive_seed(spec.seed, 0));
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (std::size_t f = 0; f < factors.rows(); ++f) {
            for (std::size_t k = 0; k < t; ++k) factors(f, k) = gauss(rng);
        }
    }

    ReturnsPanel panel;
    panel.returns = Matrix(n, t);
    const std::uint64_t ticker_root = derive_seed(spec.seed, 1);
    parallel_for(n, [&](std::size_t i) {
        NoiseSource noise(spec, derive_seed(ticker_root, i));
        std::uniform_real_distribution<double> beta_dist(spec.market_loading.low, spec.market_loading.high);
        std::uniform_real_distribution<double> gamma_dist(spec.sector_loading.low, spec.sector_loading.high);
        const double beta = beta_dist(noise.engine());
        const double gamma = gamma_dist(noise.engine());
        const std::size_t f = static_cast<std::size_t>(sector[i]) + 1;
        for (std::size_t k = 0; k < t; ++k) {
            panel.returns(i, k) =
                spec.scale * (beta * factors(0, k) + gamma * factors(f, k) + spec.idio_vol * noise());
        }
    });

    const std::size_t width = std::max<std::size_t>(4, digit_count(n));
    const std::size_t sector_width = std::max<std::size_t>(2, digit_count(spec.n_sectors));
    std::map<std::string, TaxonomyEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
        const auto s = static_cast<std::size_t>(sector[i]);
        panel.tickers.push_back(padded("T", i + 1, width));
        entries[panel.tickers.back()] = {padded("SEC", s + 1, sector_width), padded("IND", s / 2 + 1, sector_width)};
    }
    auto days = business_days("2000-01-03", t + 1);
    panel.dates.assign(days.begin() + 1, days.end());
    return {std::move(panel), Taxonomy(std::move(entries))};
}

PricePanel to_prices(const ReturnsPanel& returns, double start) {
    if (!(start > 0.0)) throw Error(ErrorCode::InvalidArgument, "starting price must be positive");
    PricePanel out;
    out.tickers = returns.tickers;
    if (returns.dates.empty()) throw Error(ErrorCode::InvalidArgument, "returns panel has no dates");
    sys_days first = parse_day(returns.dates.front()) - std::chrono::days{1};
    while (is_weekend(first)) first -= std::chrono::days{1};
    out.dates.push_back(format_day(first));
    out.dates.insert(out.dates.end(), returns.dates.begin(), returns.dates.end());
    const std::size_t t = returns.length();
    out.prices = Matrix(returns.size(), t + 1);
    for (std::size_t i = 0; i < returns.size(); ++i) {
        double log_price = std::log(start);
        out.prices(i, 0) = start;
        for (std::size_t k = 0; k < t; ++k) {
            log_price += returns.returns(i, k);
            out.prices(i, k + 1) = std::exp(log_price);
        }
    }
    return out;
}

}  // namespace corrfilter
