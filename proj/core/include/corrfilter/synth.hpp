#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

#include "corrfilter/ingest.hpp"

namespace corrfilter {

struct LoadingRange {
    double low = 0.0;
    double high = 0.0;
};

enum class NoiseKind { Gaussian, StudentT };

/// Single market factor plus one factor per sector:
///   r_i(t) = scale * (beta_i M(t) + gamma_i F_s(i)(t) + sigma eps_i(t))
/// with unit-variance factors and noise. Sectors are contiguous ticker
/// blocks; the first N mod n_sectors sectors get one extra ticker.
struct SynthSpec {
    std::size_t n = 100;
    std::size_t t = 2000;
    std::size_t n_sectors = 10;
    LoadingRange market_loading{1.0, 1.5};
    LoadingRange sector_loading{0.6, 1.0};
    double idio_vol = 1.0;
    double scale = 0.01;
    NoiseKind noise = NoiseKind::Gaussian;
    double student_df = 5.0;  // > 2; noise is rescaled to unit variance
    std::uint64_t seed = 0;
};

void validate(const SynthSpec& spec);

/// Sector index of each ticker under the block layout.
std::vector<int> planted_sectors(std::size_t n, std::size_t n_sectors);

/// Returns panel plus the planted taxonomy (supersector per sector; pairs of
/// supersectors share an industry).
std::pair<ReturnsPanel, Taxonomy> generate(const SynthSpec& spec);

/// Prices starting at `start` that log_returns maps back to `returns`. The
/// extra leading date is the weekday before the first return date.
PricePanel to_prices(const ReturnsPanel& returns, double start = 100.0);

/// Weekdays from `start` (ISO date), `count` of them.
std::vector<std::string> business_days(const std::string& start, std::size_t count);

}  // namespace corrfilter
