#include "corrfilter/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

#include "corrfilter/csv.hpp"
#include "corrfilter/error.hpp"

namespace corrfilter {

namespace {

bool parse_int(std::string_view s, int& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

void require_date(const std::string& date) {
    if (!is_iso_date(date)) throw Error(ErrorCode::UnparsableDate, "'" + date + "'");
}

double parse_price(const std::string& field, const std::string& ticker, const std::string& date) {
    if (field.empty()) throw Error(ErrorCode::MissingCell, ticker + " on " + date);
    const double price = csv::parse_double(field);
    if (!std::isfinite(price)) throw Error(ErrorCode::UnparsableNumber, ticker + " on " + date);
    if (price <= 0.0) {
        throw Error(ErrorCode::NonPositivePrice, ticker + " on " + date + " = " + field);
    }
    return price;
}

std::string lower(std::string s) {
    std::ranges::transform(s, s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

PricePanel load_long(const std::vector<std::vector<std::string>>& rows, const std::string& name) {
    if (rows.empty()) throw Error(ErrorCode::MalformedFile, name + ": empty file");
    const auto& header = rows.front();
    if (header.size() != 3 || lower(header[0]) != "date" || lower(header[1]) != "ticker" ||
        lower(header[2]) != "close") {
        throw Error(ErrorCode::MalformedFile, name + ": expected header date,ticker,close");
    }
    std::map<std::string, std::map<std::string, double>> series;
    std::set<std::string> all_dates;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 3) {
            throw Error(ErrorCode::MalformedFile, name + ": line " + std::to_string(r + 1) + " has " +
                                                      std::to_string(row.size()) + " fields");
        }
        require_date(row[0]);
        if (row[1].empty()) throw Error(ErrorCode::MalformedFile, name + ": empty ticker");
        const double price = parse_price(row[2], row[1], row[0]);
        if (!series[row[1]].emplace(row[0], price).second) {
            throw Error(ErrorCode::MalformedFile, name + ": duplicate row " + row[1] + " " + row[0]);
        }
        all_dates.insert(row[0]);
    }
    PricePanel panel;
    panel.dates.assign(all_dates.begin(), all_dates.end());
    panel.prices = Matrix(series.size(), panel.dates.size());
    std::size_t i = 0;
    for (const auto& [ticker, by_date] : series) {
        if (by_date.size() != all_dates.size()) {
            for (const auto& d : panel.dates) {
                if (!by_date.contains(d)) throw Error(ErrorCode::MissingCell, ticker + " lacks " + d);
            }
        }
        std::size_t t = 0;
        for (const auto& [date, price] : by_date) panel.prices(i, t++) = price;
        panel.tickers.push_back(ticker);
        ++i;
    }
    return panel;
}

PricePanel load_wide(const std::vector<std::vector<std::string>>& rows, const std::string& name) {
    if (rows.empty()) throw Error(ErrorCode::MalformedFile, name + ": empty file");
    const auto& header = rows.front();
    if (header.size() < 2 || lower(header[0]) != "date") {
        throw Error(ErrorCode::MalformedFile, name + ": expected header date,<ticker>,...");
    }
    const std::vector<std::string> columns(header.begin() + 1, header.end());
    std::vector<std::size_t> order(columns.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::ranges::sort(order, [&](std::size_t a, std::size_t b) { return columns[a] < columns[b]; });
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[order[c]].empty()) throw Error(ErrorCode::MalformedFile, name + ": empty ticker");
        if (c > 0 && columns[order[c]] == columns[order[c - 1]]) {
            throw Error(ErrorCode::DuplicateTicker, columns[order[c]]);
        }
    }

    std::vector<std::pair<std::string, std::size_t>> dated_rows;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        require_date(rows[r][0]);
        dated_rows.emplace_back(rows[r][0], r);
    }
    std::ranges::sort(dated_rows);
    for (std::size_t k = 1; k < dated_rows.size(); ++k) {
        if (dated_rows[k].first == dated_rows[k - 1].first) {
            throw Error(ErrorCode::MalformedFile, name + ": duplicate date " + dated_rows[k].first);
        }
    }

    PricePanel panel;
    panel.prices = Matrix(columns.size(), dated_rows.size());
    for (std::size_t t = 0; t < dated_rows.size(); ++t) {
        const auto& [date, r] = dated_rows[t];
        const auto& row = rows[r];
        if (row.size() > header.size()) {
            throw Error(ErrorCode::MalformedFile, name + ": too many fields on " + date);
        }
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const std::size_t c = order[i] + 1;
            const std::string& field = c < row.size() ? row[c] : std::string();
            panel.prices(i, t) = parse_price(field, columns[order[i]], date);
        }
        panel.dates.push_back(date);
    }
    for (const std::size_t c : order) panel.tickers.push_back(columns[c]);
    return panel;
}

double sum_squares(std::span<const double> xs) {
    double s = 0.0;
    for (const double x : xs) s += x * x;
    return s;
}

}  // namespace

bool is_iso_date(const std::string& date) {
    if (date.size() != 10 || date[4] != '-' || date[7] != '-') return false;
    int y = 0;
    int m = 0;
    int d = 0;
    const std::string_view s(date);
    if (!parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), m) || !parse_int(s.substr(8, 2), d)) {
        return false;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    return ymd.ok();
}

ReturnsPanel ReturnsPanel::slice(std::size_t begin, std::size_t end) const {
    ReturnsPanel out;
    out.tickers = tickers;
    out.dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(begin),
                     dates.begin() + static_cast<std::ptrdiff_t>(end));
    out.returns = Matrix(size(), end - begin);
    for (std::size_t i = 0; i < size(); ++i) {
        const auto src = returns.row(i);
        std::copy(src.begin() + static_cast<std::ptrdiff_t>(begin), src.begin() + static_cast<std::ptrdiff_t>(end),
                  out.returns.row(i).begin());
    }
    return out;
}

PricePanel load_prices(const std::filesystem::path& path, PriceLayout layout) {
    const auto rows = csv::read(path);
    return layout == PriceLayout::Long ? load_long(rows, path.string()) : load_wide(rows, path.string());
}

void write_prices_wide(const std::filesystem::path& path, const PricePanel& panel) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    std::vector<std::string> fields{"date"};
    fields.insert(fields.end(), panel.tickers.begin(), panel.tickers.end());
    csv::write_row(out, fields);
    for (std::size_t t = 0; t < panel.dates.size(); ++t) {
        fields.assign(1, panel.dates[t]);
        for (std::size_t i = 0; i < panel.tickers.size(); ++i) fields.push_back(csv::format(panel.prices(i, t)));
        csv::write_row(out, fields);
    }
}

ReturnsPanel log_returns(const PricePanel& panel) {
    const std::size_t n = panel.prices.rows();
    const std::size_t cols = panel.prices.cols();
    if (cols < 2) throw Error(ErrorCode::InvalidArgument, "need at least two dates for a return");
    ReturnsPanel out;
    out.tickers = panel.tickers;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    out.returns = Matrix(n, cols - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t + 1 < cols; ++t) {
            out.returns(i, t) = std::log(panel.prices(i, t + 1)) - std::log(panel.prices(i, t));
        }
    }
    return out;
}

std::pair<Matrix, FactorFit> regress_on(const Matrix& returns, const std::vector<double>& regressor) {
    const std::size_t n = returns.rows();
    const std::size_t len = returns.cols();
    if (regressor.size() != len) throw Error(ErrorCode::InvalidArgument, "regressor length mismatch");

    double mean_x = 0.0;
    for (const double x : regressor) mean_x += x;
    mean_x /= static_cast<double>(len);
    double sxx = 0.0;
    for (const double x : regressor) sxx += (x - mean_x) * (x - mean_x);

    // Zero variance relative to both the regressor level and the typical
    // series energy: a numerically-zero index gives meaningless slopes.
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) energy += sum_squares(returns.row(i));
    energy /= static_cast<double>(std::max<std::size_t>(n, 1));
    const double scale = std::max(sum_squares(regressor), energy);
    if (!(sxx > 1e-24 * scale)) {
        throw Error(ErrorCode::DegenerateMarketIndex, "market index has zero variance");
    }

    FactorFit fit;
    fit.market_index = regressor;
    fit.alpha.resize(n);
    fit.beta.resize(n);
    Matrix residuals(n, len);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = returns.row(i);
        double mean_r = 0.0;
        for (const double v : r) mean_r += v;
        mean_r /= static_cast<double>(len);
        double sxy = 0.0;
        for (std::size_t t = 0; t < len; ++t) sxy += (regressor[t] - mean_x) * (r[t] - mean_r);
        const double beta = sxy / sxx;
        const double alpha = mean_r - beta * mean_x;
        fit.alpha[i] = alpha;
        fit.beta[i] = beta;
        for (std::size_t t = 0; t < len; ++t) residuals(i, t) = r[t] - alpha - beta * regressor[t];
    }
    return {std::move(residuals), std::move(fit)};
}

std::pair<ReturnsPanel, FactorFit> detrend_market_mode(const ReturnsPanel& returns) {
    const std::size_t n = returns.size();
    const std::size_t len = returns.length();
    if (n < 2 || len < 3) throw Error(ErrorCode::InvalidArgument, "detrending needs N >= 2 and T >= 3");
    std::vector<double> index(len, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = returns.returns.row(i);
        for (std::size_t t = 0; t < len; ++t) index[t] += r[t];
    }
    for (double& v : index) v /= static_cast<double>(n);
    auto [residuals, fit] = regress_on(returns.returns, index);
    ReturnsPanel out{returns.tickers, returns.dates, std::move(residuals)};
    return {std::move(out), std::move(fit)};
}

Taxonomy::Taxonomy(std::map<std::string, TaxonomyEntry> entries) : entries_(std::move(entries)) {
    for (const auto& [ticker, entry] : entries_) {
        if (ticker.empty() || entry.supersector.empty() || entry.industry.empty()) {
            throw Error(ErrorCode::EmptyLabel, "ticker '" + ticker + "'");
        }
    }
}

const TaxonomyEntry& Taxonomy::at(const std::string& ticker) const {
    const auto it = entries_.find(ticker);
    if (it == entries_.end()) throw Error(ErrorCode::UnknownTicker, ticker);
    return it->second;
}

std::vector<std::string> Taxonomy::supersectors() const {
    std::set<std::string> labels;
    for (const auto& [_, entry] : entries_) labels.insert(entry.supersector);
    return {labels.begin(), labels.end()};
}

std::vector<std::string> Taxonomy::industries() const {
    std::set<std::string> labels;
    for (const auto& [_, entry] : entries_) labels.insert(entry.industry);
    return {labels.begin(), labels.end()};
}

std::vector<int> Taxonomy::supersector_labels(const std::vector<std::string>& tickers) const {
    const auto universe = supersectors();
    std::vector<int> labels;
    labels.reserve(tickers.size());
    for (const auto& ticker : tickers) {
        const auto& label = at(ticker).supersector;
        labels.push_back(static_cast<int>(std::ranges::lower_bound(universe, label) - universe.begin()));
    }
    return labels;
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
    const auto rows = csv::read(path);
    if (rows.empty()) throw Error(ErrorCode::MalformedFile, path.string() + ": empty file");
    const auto& header = rows.front();
    if (header.size() != 3 || lower(header[0]) != "ticker" || lower(header[1]) != "supersector" ||
        lower(header[2]) != "industry") {
        throw Error(ErrorCode::MalformedFile, path.string() + ": expected header ticker,supersector,industry");
    }
    std::map<std::string, TaxonomyEntry> entries;
    std::map<std::string, std::string> industry_of;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 3) {
            throw Error(ErrorCode::MalformedFile, path.string() + ": line " + std::to_string(r + 1));
        }
        if (row[0].empty() || row[1].empty() || row[2].empty()) {
            throw Error(ErrorCode::EmptyLabel, path.string() + ": line " + std::to_string(r + 1));
        }
        if (!entries.emplace(row[0], TaxonomyEntry{row[1], row[2]}).second) {
            throw Error(ErrorCode::DuplicateTicker, row[0]);
        }
        const auto [it, fresh] = industry_of.emplace(row[1], row[2]);
        if (!fresh && it->second != row[2]) {
            throw Error(ErrorCode::MalformedFile,
                        "supersector " + row[1] + " maps to industries " + it->second + " and " + row[2]);
        }
    }
    return Taxonomy(std::move(entries));
}

void write_taxonomy(const std::filesystem::path& path, const Taxonomy& taxonomy) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    csv::write_row(out, {"ticker", "supersector", "industry"});
    for (const auto& [ticker, entry] : taxonomy.entries()) {
        csv::write_row(out, {ticker, entry.supersector, entry.industry});
    }
}

std::vector<std::string> unclassified_tickers(const Taxonomy& taxonomy, const std::vector<std::string>& tickers) {
    std::vector<std::string> missing;
    for (const auto& t : tickers) {
        if (!taxonomy.contains(t)) missing.push_back(t);
    }
    std::ranges::sort(missing);
    return missing;
}

}  // namespace corrfilter
