#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corrfilter/matrix.hpp"

namespace corrfilter {

/// Closing prices, one row per ticker, one column per trading date.
struct PricePanel {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;  // ISO-8601, strictly increasing
    Matrix prices;                   // tickers.size() x dates.size()
};

/// Daily log-returns. dates[t] is the date at the end of the return interval.
struct ReturnsPanel {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;
    Matrix returns;  // N x T

    [[nodiscard]] std::size_t size() const noexcept { return returns.rows(); }
    [[nodiscard]] std::size_t length() const noexcept { return returns.cols(); }

    /// Columns [begin, end) as a new panel.
    [[nodiscard]] ReturnsPanel slice(std::size_t begin, std::size_t end) const;
};

/// Single-factor regression r_i(t) = alpha_i + beta_i I(t) + c_i(t).
struct FactorFit {
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> market_index;
};

enum class PriceLayout { Long, Wide };

struct TaxonomyEntry {
    std::string supersector;
    std::string industry;
};

/// Reference classification of tickers (e.g. ICB supersectors/industries).
class Taxonomy {
public:
    Taxonomy() = default;
    explicit Taxonomy(std::map<std::string, TaxonomyEntry> entries);

    [[nodiscard]] const std::map<std::string, TaxonomyEntry>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool contains(const std::string& ticker) const { return entries_.contains(ticker); }
    [[nodiscard]] const TaxonomyEntry& at(const std::string& ticker) const;

    /// Sorted distinct supersector labels (N_ICB = supersectors().size()).
    [[nodiscard]] std::vector<std::string> supersectors() const;
    [[nodiscard]] std::vector<std::string> industries() const;

    /// Supersector index (into supersectors()) per ticker, in the given order.
    /// Throws UnknownTicker if any ticker is unclassified.
    [[nodiscard]] std::vector<int> supersector_labels(const std::vector<std::string>& tickers) const;

private:
    std::map<std::string, TaxonomyEntry> entries_;
};

PricePanel load_prices(const std::filesystem::path& path, PriceLayout layout);

/// Writes a wide CSV (date + one column per ticker) that load_prices reads back.
void write_prices_wide(const std::filesystem::path& path, const PricePanel& panel);

ReturnsPanel log_returns(const PricePanel& panel);

/// Regresses every series on the cross-sectional mean return and keeps the
/// residuals.
std::pair<ReturnsPanel, FactorFit> detrend_market_mode(const ReturnsPanel& returns);

/// OLS of each row on a supplied regressor; used by detrend_market_mode.
std::pair<Matrix, FactorFit> regress_on(const Matrix& returns, const std::vector<double>& regressor);

Taxonomy load_taxonomy(const std::filesystem::path& path);
void write_taxonomy(const std::filesystem::path& path, const Taxonomy& taxonomy);

/// Tickers of the panel that the taxonomy does not classify (sorted).
std::vector<std::string> unclassified_tickers(const Taxonomy& taxonomy, const std::vector<std::string>& tickers);

/// True if `date` is a valid YYYY-MM-DD calendar date.
bool is_iso_date(const std::string& date);

}  // namespace corrfilter
