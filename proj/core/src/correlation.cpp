#include "corrfilter/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "corrfilter/csv.hpp"
#include "corrfilter/error.hpp"

namespace corrfilter {

WeightScheme WeightScheme::exponential(double theta) {
    if (!(theta > 0.0)) throw Error(ErrorCode::InvalidArgument, "theta must be positive");
    return {Kind::Exponential, theta};
}

WeightScheme WeightScheme::exponential_for_window(std::size_t window_length) {
    return exponential(static_cast<double>(window_length) / 3.0);
}

std::vector<double> WeightScheme::weights(std::size_t length) const {
    std::vector<double> w(length, 1.0);
    if (kind == Kind::Exponential) {
        const double t_end = static_cast<double>(length) - 1.0;
        for (std::size_t t = 0; t < length; ++t) w[t] = std::exp((static_cast<double>(t) - t_end) / theta);
    }
    double total = 0.0;
    for (const double v : w) total += v;
    for (double& v : w) v /= total;
    return w;
}

CorrelationMatrix pearson(const ReturnsPanel& returns, const WeightScheme& weights) {
    return pearson(returns.returns, weights, returns.tickers);
}

CorrelationMatrix pearson(const Matrix& returns, const WeightScheme& weights, std::vector<std::string> tickers) {
    const std::size_t n = returns.rows();
    const std::size_t len = returns.cols();
    if (len < 3) throw Error(ErrorCode::InvalidArgument, "Pearson estimator needs T >= 3");
    const auto w = weights.weights(len);

    // Standardized, weight-scaled series: rho_ij is then a plain dot product.
    Matrix z(n, len);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = returns.row(i);
        double mean = 0.0;
        double second = 0.0;
        for (std::size_t t = 0; t < len; ++t) {
            mean += w[t] * r[t];
            second += w[t] * r[t] * r[t];
        }
        double var = 0.0;
        for (std::size_t t = 0; t < len; ++t) var += w[t] * (r[t] - mean) * (r[t] - mean);
        if (!(var > 1e-24 * second) || !std::isfinite(var)) {
            const std::string name = i < tickers.size() ? tickers[i] : "series " + std::to_string(i);
            throw Error(ErrorCode::ZeroVariance, name);
        }
        const double inv_sd = 1.0 / std::sqrt(var);
        auto zi = z.row(i);
        for (std::size_t t = 0; t < len; ++t) zi[t] = std::sqrt(w[t]) * (r[t] - mean) * inv_sd;
    }

    CorrelationMatrix out{Matrix(n, n), std::move(tickers)};
    for (std::size_t i = 0; i < n; ++i) {
        out.values(i, i) = 1.0;
        const auto zi = z.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto zj = z.row(j);
            double dot = 0.0;
            for (std::size_t t = 0; t < len; ++t) dot += zi[t] * zj[t];
            dot = std::clamp(dot, -1.0, 1.0);
            out.values(i, j) = dot;
            out.values(j, i) = dot;
        }
    }
    return out;
}

DistanceMatrix to_distance(const CorrelationMatrix& corr) {
    const std::size_t n = corr.size();
    DistanceMatrix out{Matrix(n, n), corr.tickers};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double rho = corr(i, j);
            if (!(std::abs(rho) <= 1.0 + 1e-12)) {
                throw Error(ErrorCode::OutOfRangeCorrelation,
                            "rho(" + std::to_string(i) + "," + std::to_string(j) + ") = " + csv::format(rho));
            }
            const double radicand = 2.0 * (1.0 - rho);
            out.values(i, j) = i == j ? 0.0 : std::sqrt(std::max(radicand, 0.0));
        }
    }
    return out;
}

double mean_offdiagonal(const CorrelationMatrix& corr) {
    const std::size_t n = corr.size();
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "mean correlation needs N >= 2");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) total += corr(i, j);
    }
    return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& values,
                      const std::vector<std::string>& tickers) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    std::vector<std::string> fields{""};
    fields.insert(fields.end(), tickers.begin(), tickers.end());
    csv::write_row(out, fields);
    for (std::size_t i = 0; i < values.rows(); ++i) {
        fields.assign(1, i < tickers.size() ? tickers[i] : std::to_string(i));
        for (std::size_t j = 0; j < values.cols(); ++j) fields.push_back(csv::format(values(i, j)));
        csv::write_row(out, fields);
    }
}

}  // namespace corrfilter
