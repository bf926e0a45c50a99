#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corrfilter/correlation.hpp"
#include "corrfilter/dbht.hpp"
#include "corrfilter/ingest.hpp"
#include "corrfilter/kmedoids.hpp"
#include "corrfilter/linkage.hpp"

namespace corrfilter {

enum class Method { Single, Average, Complete, Dbht, KMedoids };

std::string_view to_string(Method method) noexcept;
/// Accepts sl/al/cl/dbht/kmedoids (and the long rule names).
Method parse_method(std::string_view name);
const std::vector<Method>& all_methods();

enum class DetrendMode { Raw, Detrended, Both };

std::string_view to_string(DetrendMode mode) noexcept;
DetrendMode parse_detrend_mode(std::string_view name);

struct AnalysisOptions {
    std::vector<Method> methods = all_methods();
    /// Upper end of the N_cl sweep (clamped to N); the sweep starts at 2.
    std::size_t max_clusters = 342;
    /// n_clusters is ignored; the sweep sets it.
    PamConfig pam{};
    /// Keep the sweep partitions (needed for per-N_cl tables).
    bool keep_sweep = false;
};

struct MethodOutcome {
    Method method = Method::Single;
    /// DBHT: emergent cluster count. Others: the ARI-maximizing N_cl.
    std::size_t n_cl = 0;
    double max_ari = 0.0;
    std::size_t argmax_ncl = 0;
    /// Disparity at the reference N_cl (DBHT's n_cl when DBHT runs, else
    /// n_cl). NaN when that count is below 2.
    double disparity = 0.0;
    Partition partition;  // at n_cl

    std::vector<double> ari_curve;        // index k - 2
    std::vector<double> disparity_curve;  // index k - 2
    std::vector<Partition> sweep;         // index k - 2, only with keep_sweep
};

struct PanelAnalysis {
    double mean_correlation = 0.0;
    std::size_t reference_ncl = 0;
    std::vector<MethodOutcome> methods;  // in AnalysisOptions::methods order
    std::optional<DbhtResult> dbht;
    CorrelationMatrix correlation;

    [[nodiscard]] const MethodOutcome* find(Method m) const;
};

/// Correlation, distance and every requested method on one N x T block.
/// `sectors` holds the reference label of each row.
PanelAnalysis analyze_panel(const Matrix& returns, const std::vector<int>& sectors, const WeightScheme& weights,
                            const AnalysisOptions& options, std::vector<std::string> tickers = {});

struct WindowSpec {
    std::size_t length = 1000;
    std::size_t shift = 30;
    WeightScheme smoothing = WeightScheme::exponential_for_window(1000);
    std::size_t max_windows = 0;  // 0 = no cap; otherwise keep the first ones

    static WindowSpec with_default_smoothing(std::size_t length, std::size_t shift);
};

struct WindowRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive

    friend bool operator==(const WindowRange&, const WindowRange&) = default;
};

/// [s, s + L) for s = 0, shift, 2 shift, ... while s + L <= total.
std::vector<WindowRange> make_windows(std::size_t total, const WindowSpec& spec);

struct WindowRecord {
    std::size_t index = 0;
    WindowRange range;
    std::string end_date;
    std::optional<PanelAnalysis> raw;
    std::optional<PanelAnalysis> detrended;
    /// ARI between the raw and detrended DBHT partitions (both modes only).
    std::optional<double> dbht_cross_ari;
};

struct WindowSeries {
    WindowSpec spec;
    DetrendMode mode = DetrendMode::Raw;
    std::vector<WindowRecord> windows;
};

/// Runs analyze_panel on every window, detrending within the window when
/// asked. Windows run in parallel; records come back in window order.
WindowSeries rolling_analysis(const ReturnsPanel& returns, const Taxonomy& taxonomy, const WindowSpec& spec,
                              const AnalysisOptions& options, DetrendMode mode);

enum class ResampleMode { Time, Rows };

struct BootstrapResult {
    std::size_t empirical_ncl = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample (n - 1)
    std::vector<std::size_t> replicas;
    std::size_t redraws = 0;  // replicas rejected for a zero-variance series
};

/// DBHT cluster counts of n_boot replicas of an N x L block, each built by
/// drawing L columns (or N rows) with replacement and using unweighted
/// Pearson correlations.
BootstrapResult bootstrap_nclusters(const Matrix& window, std::size_t n_boot, std::uint64_t seed,
                                    ResampleMode mode = ResampleMode::Time);

}  // namespace corrfilter
