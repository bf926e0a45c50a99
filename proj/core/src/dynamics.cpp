#include "corrfilter/dynamics.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "corrfilter/error.hpp"
#include "corrfilter/metrics.hpp"
#include "corrfilter/parallel.hpp"

namespace corrfilter {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

LinkageRule rule_of(Method m) {
    switch (m) {
        case Method::Single: return LinkageRule::Single;
        case Method::Average: return LinkageRule::Average;
        default: return LinkageRule::Complete;
    }
}

double safe_disparity(const Partition& p) { return p.cluster_count() >= 2 ? disparity(p) : nan; }

// Fills the sweep and picks the first N_cl with the largest ARI.
void summarize_sweep(MethodOutcome& out, std::vector<Partition>& parts, const Partition& truth, bool keep) {
    out.ari_curve.clear();
    out.disparity_curve.clear();
    out.max_ari = -std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < parts.size(); ++idx) {
        const double ari = adjusted_rand(parts[idx], truth);
        out.ari_curve.push_back(ari);
        out.disparity_curve.push_back(safe_disparity(parts[idx]));
        if (ari > out.max_ari) {
            out.max_ari = ari;
            out.argmax_ncl = idx + 2;
        }
    }
    if (keep) out.sweep = parts;
}

}  // namespace

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::Single: return "sl";
        case Method::Average: return "al";
        case Method::Complete: return "cl";
        case Method::Dbht: return "dbht";
        case Method::KMedoids: return "kmedoids";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "sl" || name == "single") return Method::Single;
    if (name == "al" || name == "average") return Method::Average;
    if (name == "cl" || name == "complete") return Method::Complete;
    if (name == "dbht") return Method::Dbht;
    if (name == "kmedoids" || name == "pam") return Method::KMedoids;
    throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods{Method::Single, Method::Average, Method::Complete, Method::Dbht,
                                             Method::KMedoids};
    return methods;
}

std::string_view to_string(DetrendMode mode) noexcept {
    switch (mode) {
        case DetrendMode::Raw: return "raw";
        case DetrendMode::Detrended: return "detrended";
        case DetrendMode::Both: return "both";
    }
    return "unknown";
}

DetrendMode parse_detrend_mode(std::string_view name) {
    if (name == "raw" || name == "none") return DetrendMode::Raw;
    if (name == "detrended" || name == "market") return DetrendMode::Detrended;
    if (name == "both") return DetrendMode::Both;
    throw Error(ErrorCode::InvalidArgument, "unknown detrend mode '" + std::string(name) + "'");
}

const MethodOutcome* PanelAnalysis::find(Method m) const {
    for (const auto& o : methods) {
        if (o.method == m) return &o;
    }
    return nullptr;
}

PanelAnalysis analyze_panel(const Matrix& returns, const std::vector<int>& sectors, const WeightScheme& weights,
                            const AnalysisOptions& options, std::vector<std::string> tickers) {
    const std::size_t n = returns.rows();
    if (sectors.size() != n) throw Error(ErrorCode::UniverseMismatch, "sector labels do not match the panel rows");
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "analysis needs at least 3 series");
    if (options.methods.empty()) throw Error(ErrorCode::InvalidArgument, "no clustering method selected");

    PanelAnalysis out;
    out.correlation = pearson(returns, weights, std::move(tickers));
    const DistanceMatrix dist = to_distance(out.correlation);
    out.mean_correlation = mean_offdiagonal(out.correlation);
    const Partition truth(sectors);
    const std::size_t k_max = std::min(options.max_clusters, n);

    bool with_dbht = false;
    for (const Method m : options.methods) with_dbht |= m == Method::Dbht;
    if (with_dbht) {
        out.dbht = dbht(dist, out.correlation);
        out.reference_ncl = out.dbht->n_cl;
    }

    for (const Method m : options.methods) {
        MethodOutcome o;
        o.method = m;
        std::vector<Partition> parts;
        if (m == Method::KMedoids) {
            parts.resize(k_max >= 2 ? k_max - 1 : 0);
            parallel_for(parts.size(), [&](std::size_t idx) {
                PamConfig cfg = options.pam;
                cfg.n_clusters = idx + 2;
                cfg.seed = derive_seed(options.pam.seed, cfg.n_clusters);
                parts[idx] = kmedoids(dist, cfg).partition;
            });
        } else {
            const Dendrogram d = m == Method::Dbht ? out.dbht->dendrogram : linkage(dist, rule_of(m));
            for (std::size_t k = 2; k <= k_max; ++k) parts.push_back(cut(d, k));
        }
        summarize_sweep(o, parts, truth, options.keep_sweep);

        if (m == Method::Dbht) {
            o.n_cl = out.dbht->n_cl;
            o.partition = out.dbht->partition;
        } else {
            o.n_cl = o.argmax_ncl;
            o.partition = o.n_cl >= 2 ? parts[o.n_cl - 2] : Partition(std::vector<int>(n, 0));
        }
        const std::size_t ref = with_dbht ? out.reference_ncl : o.n_cl;
        if (m == Method::Dbht) {
            o.disparity = safe_disparity(o.partition);
        } else {
            o.disparity = ref >= 2 && ref <= k_max ? o.disparity_curve[ref - 2] : nan;
        }
        out.methods.push_back(std::move(o));
    }
    if (!with_dbht) out.reference_ncl = out.methods.front().n_cl;
    return out;
}

WindowSpec WindowSpec::with_default_smoothing(std::size_t length, std::size_t shift) {
    return WindowSpec{length, shift, WeightScheme::exponential_for_window(length), 0};
}

std::vector<WindowRange> make_windows(std::size_t total, const WindowSpec& spec) {
    if (spec.length < 1 || spec.shift < 1 || spec.shift > spec.length) {
        throw Error(ErrorCode::InvalidArgument, "window spec needs 1 <= shift <= length");
    }
    if (spec.length > total) {
        throw Error(ErrorCode::WindowTooLong, "window of " + std::to_string(spec.length) + " exceeds " +
                                                  std::to_string(total) + " observations");
    }
    std::vector<WindowRange> out;
    for (std::size_t s = 0; s + spec.length <= total; s += spec.shift) {
        if (spec.max_windows > 0 && out.size() == spec.max_windows) break;
        out.push_back({s, s + spec.length});
    }
    return out;
}

WindowSeries rolling_analysis(const ReturnsPanel& returns, const Taxonomy& taxonomy, const WindowSpec& spec,
                              const AnalysisOptions& options, DetrendMode mode) {
    const auto sectors = taxonomy.supersector_labels(returns.tickers);
    const auto ranges = make_windows(returns.length(), spec);

    WindowSeries series{spec, mode, std::vector<WindowRecord>(ranges.size())};
    parallel_for(ranges.size(), [&](std::size_t w) {
        WindowRecord& rec = series.windows[w];
        rec.index = w;
        rec.range = ranges[w];
        const ReturnsPanel block = returns.slice(ranges[w].begin, ranges[w].end);
        rec.end_date = block.dates.empty() ? std::string() : block.dates.back();
        if (mode != DetrendMode::Detrended) {
            rec.raw = analyze_panel(block.returns, sectors, spec.smoothing, options, block.tickers);
            rec.raw->correlation = {};
        }
        if (mode != DetrendMode::Raw) {
            const auto residuals = detrend_market_mode(block).first;
            rec.detrended = analyze_panel(residuals.returns, sectors, spec.smoothing, options, block.tickers);
            rec.detrended->correlation = {};
        }
        if (rec.raw && rec.detrended && rec.raw->dbht && rec.detrended->dbht) {
            rec.dbht_cross_ari = adjusted_rand(rec.raw->dbht->partition, rec.detrended->dbht->partition);
        }
    });
    return series;
}

BootstrapResult bootstrap_nclusters(const Matrix& window, std::size_t n_boot, std::uint64_t seed, ResampleMode mode) {
    if (n_boot < 2) throw Error(ErrorCode::InvalidArgument, "bootstrap needs n_boot >= 2");
    const std::size_t n = window.rows();
    const std::size_t len = window.cols();
    constexpr std::size_t max_redraws = 1000;

    BootstrapResult out;
    {
        const auto corr = pearson(window, WeightScheme::uniform());
        out.empirical_ncl = dbht(to_distance(corr), corr).n_cl;
    }
    out.replicas.assign(n_boot, 0);
    std::vector<std::size_t> redraws(n_boot, 0);
    parallel_for(n_boot, [&](std::size_t b) {
        std::mt19937_64 rng(derive_seed(seed, b));
        Matrix replica(n, len);
        for (std::size_t attempt = 0;; ++attempt) {
            if (mode == ResampleMode::Time) {
                std::uniform_int_distribution<std::size_t> pick(0, len - 1);
                for (std::size_t t = 0; t < len; ++t) {
                    const std::size_t src = pick(rng);
                    for (std::size_t i = 0; i < n; ++i) replica(i, t) = window(i, src);
                }
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, n - 1);
                for (std::size_t i = 0; i < n; ++i) {
                    const auto src = window.row(pick(rng));
                    std::copy(src.begin(), src.end(), replica.row(i).begin());
                }
            }
            try {
                const auto corr = pearson(replica, WeightScheme::uniform());
                out.replicas[b] = dbht(to_distance(corr), corr).n_cl;
                break;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::ZeroVariance) throw;
                if (attempt + 1 >= max_redraws) {
                    throw Error(ErrorCode::DegenerateReplica,
                                "replica " + std::to_string(b) + " kept drawing a zero-variance series");
                }
                ++redraws[b];
            }
        }
    });

    for (const auto r : redraws) out.redraws += r;
    double sum = 0.0;
    for (const auto r : out.replicas) sum += static_cast<double>(r);
    out.mean = sum / static_cast<double>(n_boot);
    double ss = 0.0;
    for (const auto r : out.replicas) ss += (static_cast<double>(r) - out.mean) * (static_cast<double>(r) - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(n_boot - 1));
    return out;
}

}  // namespace corrfilter
