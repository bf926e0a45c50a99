#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "corrfilter/correlation.hpp"
#include "corrfilter/csv.hpp"
#include "corrfilter/dbht.hpp"
#include "corrfilter/dynamics.hpp"
#include "corrfilter/error.hpp"
#include "corrfilter/export.hpp"
#include "corrfilter/filtergraph.hpp"
#include "corrfilter/ingest.hpp"
#include "corrfilter/metrics.hpp"
#include "corrfilter/parallel.hpp"
#include "corrfilter/synth.hpp"

#ifndef CORRFILTER_VERSION
#define CORRFILTER_VERSION "unknown"
#endif

namespace corrfilter::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Everything a command produces is computed before anything is written, so a
// failing command leaves no partial output behind.
class OutputSet {
public:
    using Writer = std::function<void(const fs::path&)>;

    void add(std::string name, std::string content) {
        add(std::move(name), [content = std::move(content)](const fs::path& p) {
            std::ofstream f(p, std::ios::binary);
            f << content;
            if (!f) throw Error(ErrorCode::Io, "cannot write " + p.string());
        });
    }
    void add(std::string name, Writer writer) { files_.emplace_back(std::move(name), std::move(writer)); }

    [[nodiscard]] std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& f : files_) out.push_back(f.first);
        std::ranges::sort(out);
        return out;
    }

    // Everything goes to temporary names first; renames happen only once all
    // writes succeeded.
    void commit(const fs::path& dir) const {
        fs::create_directories(dir);
        std::vector<fs::path> staged;
        try {
            for (const auto& [name, writer] : files_) {
                staged.push_back(dir / (name + ".tmp"));
                writer(staged.back());
            }
        } catch (...) {
            std::error_code ec;
            for (const auto& p : staged) fs::remove(p, ec);
            throw;
        }
        for (std::size_t i = 0; i < files_.size(); ++i) fs::rename(staged[i], dir / files_[i].first);
    }

private:
    std::vector<std::pair<std::string, Writer>> files_;
};

class Table {
public:
    explicit Table(std::vector<std::string> header) { row(header); }
    void row(const std::vector<std::string>& fields) { csv::write_row(text_, fields); }
    [[nodiscard]] std::string str() const { return text_.str(); }

private:
    std::ostringstream text_;
};

std::string num(double v) { return csv::format(v); }
std::string num(std::size_t v) { return std::to_string(v); }

struct Inputs {
    std::string prices;
    std::string layout = "wide";
    std::string taxonomy;
};

struct AnalysisFlags {
    std::vector<std::string> methods{"sl", "al", "cl", "dbht", "kmedoids"};
    std::size_t max_clusters = 342;
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
};

struct StaticFlags {
    Inputs in;
    AnalysisFlags analysis;
    std::string detrend = "raw";
    std::string smoothing = "uniform";
    double theta = 0.0;
    std::optional<std::size_t> n_cl;
    double alpha = 0.01;
    bool strict_bonferroni = false;
    std::string test = "upper";
    std::string out;
};

struct WindowFlags {
    std::size_t length = 1000;
    std::size_t shift = 30;
    std::size_t max_windows = 0;
};

struct RollingFlags {
    Inputs in;
    AnalysisFlags analysis;
    WindowFlags window;
    std::string detrend = "raw";
    std::string smoothing = "exponential";
    double theta = 0.0;
    std::string out;
};

struct BootstrapFlags {
    Inputs in;
    WindowFlags window;
    std::vector<std::size_t> windows;
    std::size_t n_boot = 100;
    std::uint64_t seed = 0;
    std::string resample = "time";
    std::string detrend = "raw";
    std::string out;
};

struct SynthFlags {
    SynthSpec spec;
    std::vector<double> market{1.0, 1.5};
    std::vector<double> sector{0.2, 0.5};
    std::string noise = "gaussian";
    std::string out;
};

PriceLayout parse_layout(const std::string& s) { return s == "long" ? PriceLayout::Long : PriceLayout::Wide; }

WeightScheme make_weights(const std::string& smoothing, double theta, std::size_t length) {
    if (smoothing == "uniform") return WeightScheme::uniform();
    return theta > 0.0 ? WeightScheme::exponential(theta) : WeightScheme::exponential_for_window(length);
}

AnalysisOptions make_analysis(const AnalysisFlags& f) {
    AnalysisOptions o;
    o.methods.clear();
    for (const auto& m : f.methods) {
        const Method parsed = parse_method(m);
        if (std::ranges::find(o.methods, parsed) == o.methods.end()) o.methods.push_back(parsed);
    }
    o.max_clusters = f.max_clusters;
    o.pam.restarts = f.restarts;
    o.pam.seed = f.seed;
    return o;
}

std::vector<bool> modes_of(DetrendMode mode) {
    switch (mode) {
        case DetrendMode::Raw: return {false};
        case DetrendMode::Detrended: return {true};
        case DetrendMode::Both: return {false, true};
    }
    return {false};
}

std::string mode_name(bool detrended) { return detrended ? "detrended" : "raw"; }

struct LoadedPanel {
    ReturnsPanel returns;
    std::optional<Taxonomy> taxonomy;
};

LoadedPanel load(const Inputs& in, bool need_taxonomy) {
    LoadedPanel out;
    out.returns = log_returns(load_prices(in.prices, parse_layout(in.layout)));
    if (need_taxonomy) {
        out.taxonomy = load_taxonomy(in.taxonomy);
        const auto missing = unclassified_tickers(*out.taxonomy, out.returns.tickers);
        if (!missing.empty()) {
            throw Error(ErrorCode::UnknownTicker, std::to_string(missing.size()) + " tickers lack a taxonomy entry, first " +
                                                      missing.front());
        }
    }
    return out;
}

const std::vector<std::string> summary_header{"window", "end_date", "mode", "method", "n_cl",
                                              "max_ari", "argmax_ncl", "disparity", "mean_correlation"};

void summary_rows(Table& t, std::size_t window, const std::string& end_date, bool detrended, const PanelAnalysis& a) {
    for (const auto& m : a.methods) {
        t.row({num(window), end_date, mode_name(detrended), std::string(to_string(m.method)), num(m.n_cl),
               num(m.max_ari), num(m.argmax_ncl), num(m.disparity), num(a.mean_correlation)});
    }
}

ordered_json manifest(const std::string& command, ordered_json flags, ordered_json seeds, const OutputSet& outputs) {
    ordered_json m;
    m["tool"] = "corrfilter";
    m["version"] = CORRFILTER_VERSION;
    m["command"] = command;
    m["flags"] = std::move(flags);
    m["seeds"] = std::move(seeds);
    auto names = outputs.names();
    names.push_back("manifest.json");
    std::ranges::sort(names);
    m["outputs"] = names;
    return m;
}

ordered_json analysis_json(const AnalysisFlags& f) {
    return {{"methods", f.methods}, {"max_clusters", f.max_clusters}, {"restarts", f.restarts}};
}

ordered_json inputs_json(const Inputs& in) {
    return {{"prices", in.prices}, {"layout", in.layout}, {"taxonomy", in.taxonomy}};
}

// ---------------------------------------------------------------- static

int cmd_static(const StaticFlags& f, std::ostream& out, std::ostream& err) {
    const AnalysisOptions base = make_analysis(f.analysis);
    const bool with_dbht = std::ranges::find(base.methods, Method::Dbht) != base.methods.end();
    if (f.n_cl && with_dbht) {
        err << "warning: dbht ignores --n-cl; its cluster count is emergent\n";
    }
    if (f.n_cl && (*f.n_cl < 2 || *f.n_cl > f.analysis.max_clusters)) {
        throw Error(ErrorCode::InvalidClusterCount, "--n-cl must lie in [2, --max-clusters]");
    }
    OverexpressionOptions ox;
    ox.alpha = f.alpha;
    ox.strict_bonferroni = f.strict_bonferroni;
    ox.test = f.test == "point" ? OverexpressionTest::PointMass : OverexpressionTest::UpperTail;

    const LoadedPanel input = load(f.in, true);
    const ReturnsPanel& panel = input.returns;
    const Taxonomy& taxonomy = *input.taxonomy;
    const auto sectors = taxonomy.supersector_labels(panel.tickers);
    const auto sector_names = taxonomy.supersectors();
    const WeightScheme weights = make_weights(f.smoothing, f.theta, panel.length());
    AnalysisOptions options = base;
    options.keep_sweep = true;
    if (f.n_cl && *f.n_cl > std::min(options.max_clusters, panel.size())) {
        throw Error(ErrorCode::InvalidClusterCount, "--n-cl exceeds the number of tickers");
    }

    OutputSet files;
    Table summary(summary_header);
    const std::string end_date = panel.dates.empty() ? std::string() : panel.dates.back();
    for (const bool detrended : modes_of(parse_detrend_mode(f.detrend))) {
        const std::string prefix = mode_name(detrended) + "_";
        const ReturnsPanel data = detrended ? detrend_market_mode(panel).first : panel;
        const PanelAnalysis a = analyze_panel(data.returns, sectors, weights, options, data.tickers);
        summary_rows(summary, 0, end_date, detrended, a);

        std::vector<std::string> header{"n_cl"};
        for (const auto& m : a.methods) header.emplace_back(to_string(m.method));
        Table ari(header);
        Table disp(header);
        std::vector<std::string> ox_header{"n_cl"};
        for (const auto& m : a.methods) {
            ox_header.push_back(std::string(to_string(m.method)) + "_rejections");
            ox_header.push_back(std::string(to_string(m.method)) + "_normalized");
        }
        Table ox_curve(ox_header);
        const std::size_t sweep_len = a.methods.front().ari_curve.size();
        for (std::size_t idx = 0; idx < sweep_len; ++idx) {
            std::vector<std::string> ra{num(idx + 2)};
            std::vector<std::string> rd{num(idx + 2)};
            std::vector<std::string> ro{num(idx + 2)};
            for (const auto& m : a.methods) {
                ra.push_back(num(m.ari_curve[idx]));
                rd.push_back(num(m.disparity_curve[idx]));
                const auto rep = overexpression_scan(m.sweep[idx], sectors, sector_names.size(), ox);
                ro.push_back(num(rep.rejections));
                ro.push_back(num(rep.normalized_rejections));
            }
            ari.row(ra);
            disp.row(rd);
            ox_curve.row(ro);
        }
        files.add(prefix + "ari_curve.csv", ari.str());
        files.add(prefix + "disparity_curve.csv", disp.str());
        files.add(prefix + "overexpression_curve.csv", ox_curve.str());

        for (const auto& m : a.methods) {
            const std::string name(to_string(m.method));
            std::size_t k = f.n_cl.value_or(a.reference_ncl);
            const Partition* p = nullptr;
            if (m.method == Method::Dbht) {
                p = &m.partition;
                k = m.n_cl;
            } else if (k >= 2 && k - 2 < m.sweep.size()) {
                p = &m.sweep[k - 2];
            } else {
                p = &m.partition;
                k = m.n_cl;
            }
            std::vector<std::string> comp_header{"cluster"};
            comp_header.insert(comp_header.end(), sector_names.begin(), sector_names.end());
            Table comp(comp_header);
            const auto table = contingency(*p, Partition(sectors));
            // Partition relabels sectors by first occurrence; map back to taxonomy order
            std::vector<int> sector_column(sector_names.size(), -1);
            {
                const Partition canon(sectors);
                for (std::size_t i = 0; i < sectors.size(); ++i) {
                    sector_column[static_cast<std::size_t>(sectors[i])] = canon[i];
                }
            }
            for (std::size_t c = 0; c < table.rows; ++c) {
                std::vector<std::string> r{num(c)};
                for (std::size_t s = 0; s < sector_names.size(); ++s) {
                    const int col = sector_column[s];
                    r.push_back(col < 0 ? "0" : num(static_cast<std::size_t>(table(c, static_cast<std::size_t>(col)))));
                }
                comp.row(r);
            }
            files.add(prefix + "composition_" + name + ".csv", comp.str());
            const auto rep = overexpression_scan(*p, sectors, sector_names.size(), ox);
            files.add(prefix + "overexpression_" + name + ".csv", overexpression_csv(rep, sector_names));
            (void)k;
        }

        const PlanarGraph& g = a.dbht ? a.dbht->graph : pmfg(to_distance(a.correlation));
        Table edges({"i", "j", "ticker_i", "ticker_j", "distance"});
        for (const auto& e : g.edges()) {
            edges.row({num(static_cast<std::size_t>(e.i)), num(static_cast<std::size_t>(e.j)),
                       data.tickers[static_cast<std::size_t>(e.i)], data.tickers[static_cast<std::size_t>(e.j)],
                       num(e.distance)});
        }
        files.add(prefix + "pmfg_edges.csv", edges.str());
        files.add(prefix + "pmfg.json", graph_json(g, data.tickers));
        if (a.dbht) files.add(prefix + "dbht.json", dbht_json(*a.dbht, data.tickers));
    }
    files.add("summary.csv", summary.str());

    ordered_json flags{{"inputs", inputs_json(f.in)},
                       {"analysis", analysis_json(f.analysis)},
                       {"detrend", f.detrend},
                       {"smoothing", f.smoothing},
                       {"theta", weights.theta},
                       {"n_cl", f.n_cl ? ordered_json(*f.n_cl) : ordered_json()},
                       {"alpha", f.alpha},
                       {"strict_bonferroni", f.strict_bonferroni},
                       {"test", f.test}};
    files.add("manifest.json", manifest("static", flags, {{"kmedoids", f.analysis.seed}}, files).dump(1) + "\n");
    files.commit(f.out);
    out << "static: wrote " << files.names().size() << " files to " << f.out << "\n";
    return Ok;
}

// --------------------------------------------------------------- rolling

int cmd_rolling(const RollingFlags& f, std::ostream& out, std::ostream&) {
    const AnalysisOptions options = make_analysis(f.analysis);
    const DetrendMode mode = parse_detrend_mode(f.detrend);
    const LoadedPanel input = load(f.in, true);
    const ReturnsPanel& panel = input.returns;

    WindowSpec spec{f.window.length, f.window.shift, make_weights(f.smoothing, f.theta, f.window.length),
                    f.window.max_windows};
    const WindowSeries series = rolling_analysis(panel, *input.taxonomy, spec, options, mode);
    const auto modes = modes_of(mode);

    OutputSet files;
    Table summary(summary_header);
    std::vector<std::string> win_header{"window", "begin", "end", "end_date"};
    for (const bool d : modes) win_header.push_back("mean_correlation_" + mode_name(d));
    const bool cross = mode == DetrendMode::Both && std::ranges::find(options.methods, Method::Dbht) != options.methods.end();
    if (cross) win_header.emplace_back("dbht_cross_ari");
    Table windows(win_header);

    std::vector<std::string> family_header{"window", "end_date"};
    for (const bool d : modes) {
        for (const Method m : options.methods) family_header.push_back(mode_name(d) + "_" + std::string(to_string(m)));
    }
    Table n_clusters(family_header);
    Table max_ari(family_header);
    Table argmax(family_header);
    Table disparity_table(family_header);

    ordered_json records = ordered_json::array();
    for (const auto& rec : series.windows) {
        std::vector<std::string> wr{num(rec.index), num(rec.range.begin), num(rec.range.end), rec.end_date};
        std::vector<std::string> rn{num(rec.index), rec.end_date};
        std::vector<std::string> ra = rn;
        std::vector<std::string> rg = rn;
        std::vector<std::string> rd = rn;
        ordered_json jr{{"window", rec.index}, {"begin", rec.range.begin}, {"end", rec.range.end},
                        {"end_date", rec.end_date}};
        for (const bool d : modes) {
            const PanelAnalysis& a = d ? *rec.detrended : *rec.raw;
            summary_rows(summary, rec.index, rec.end_date, d, a);
            wr.push_back(num(a.mean_correlation));
            ordered_json jm{{"mean_correlation", a.mean_correlation}};
            for (const auto& m : a.methods) {
                rn.push_back(num(m.n_cl));
                ra.push_back(num(m.max_ari));
                rg.push_back(num(m.argmax_ncl));
                rd.push_back(num(m.disparity));
                jm[std::string(to_string(m.method))] = {{"n_cl", m.n_cl},
                                                        {"max_ari", m.max_ari},
                                                        {"argmax_ncl", m.argmax_ncl},
                                                        {"disparity", m.disparity}};
            }
            jr[mode_name(d)] = std::move(jm);
        }
        if (cross) {
            wr.push_back(rec.dbht_cross_ari ? num(*rec.dbht_cross_ari) : "nan");
            jr["dbht_cross_ari"] = rec.dbht_cross_ari ? ordered_json(*rec.dbht_cross_ari) : ordered_json();
        }
        windows.row(wr);
        n_clusters.row(rn);
        max_ari.row(ra);
        argmax.row(rg);
        disparity_table.row(rd);
        records.push_back(std::move(jr));
    }
    files.add("summary.csv", summary.str());
    files.add("windows.csv", windows.str());
    files.add("n_clusters.csv", n_clusters.str());
    files.add("max_ari.csv", max_ari.str());
    files.add("argmax_ncl.csv", argmax.str());
    files.add("disparity.csv", disparity_table.str());
    files.add("rolling.json", records.dump(1) + "\n");

    ordered_json flags{{"inputs", inputs_json(f.in)},
                       {"analysis", analysis_json(f.analysis)},
                       {"length", f.window.length},
                       {"shift", f.window.shift},
                       {"max_windows", f.window.max_windows},
                       {"detrend", f.detrend},
                       {"smoothing", f.smoothing},
                       {"theta", spec.smoothing.theta}};
    files.add("manifest.json", manifest("rolling", flags, {{"kmedoids", f.analysis.seed}}, files).dump(1) + "\n");
    files.commit(f.out);
    out << "rolling: " << series.windows.size() << " windows, wrote " << files.names().size() << " files to "
        << f.out << "\n";
    return Ok;
}

// ------------------------------------------------------------- bootstrap

int cmd_bootstrap(const BootstrapFlags& f, std::ostream& out, std::ostream&) {
    if (f.n_boot < 2) throw Error(ErrorCode::InvalidArgument, "--n-boot must be at least 2");
    const ResampleMode resample = f.resample == "rows" ? ResampleMode::Rows : ResampleMode::Time;
    const DetrendMode detrend = parse_detrend_mode(f.detrend);
    if (detrend == DetrendMode::Both) throw Error(ErrorCode::InvalidArgument, "bootstrap takes raw or detrended");
    const LoadedPanel input = load(f.in, false);
    const ReturnsPanel& panel = input.returns;

    WindowSpec spec{f.window.length, f.window.shift, WeightScheme::uniform(), f.window.max_windows};
    const auto ranges = make_windows(panel.length(), spec);
    std::vector<std::size_t> selected = f.windows;
    if (selected.empty()) {
        for (std::size_t w = 0; w < ranges.size(); ++w) selected.push_back(w);
    }
    for (const auto w : selected) {
        if (w >= ranges.size()) {
            throw Error(ErrorCode::InvalidArgument, "window " + std::to_string(w) + " does not exist (" +
                                                        std::to_string(ranges.size()) + " windows)");
        }
    }

    OutputSet files;
    Table summary({"window", "begin", "end", "end_date", "empirical_ncl", "mean", "std", "within_one_std", "redraws"});
    Table replicas({"window", "replica", "n_cl"});
    std::size_t within = 0;
    for (const auto w : selected) {
        const ReturnsPanel block = panel.slice(ranges[w].begin, ranges[w].end);
        const Matrix data = detrend == DetrendMode::Detrended ? detrend_market_mode(block).first.returns : block.returns;
        const auto r = bootstrap_nclusters(data, f.n_boot, derive_seed(f.seed, w), resample);
        const bool ok = std::abs(static_cast<double>(r.empirical_ncl) - r.mean) <= r.stddev;
        within += ok ? 1 : 0;
        summary.row({num(w), num(ranges[w].begin), num(ranges[w].end), block.dates.back(), num(r.empirical_ncl),
                     num(r.mean), num(r.stddev), ok ? "1" : "0", num(r.redraws)});
        for (std::size_t b = 0; b < r.replicas.size(); ++b) replicas.row({num(w), num(b), num(r.replicas[b])});
    }
    files.add("bootstrap.csv", summary.str());
    files.add("replicas.csv", replicas.str());
    ordered_json flags{{"inputs", inputs_json(f.in)},
                       {"length", f.window.length},
                       {"shift", f.window.shift},
                       {"max_windows", f.window.max_windows},
                       {"windows", selected},
                       {"n_boot", f.n_boot},
                       {"resample", f.resample},
                       {"detrend", f.detrend}};
    files.add("manifest.json", manifest("bootstrap", flags, {{"bootstrap", f.seed}}, files).dump(1) + "\n");
    files.commit(f.out);
    out << "bootstrap: " << within << "/" << selected.size()
        << " windows with the empirical n_cl within one replica std; wrote to " << f.out << "\n";
    return Ok;
}

// ----------------------------------------------------------------- synth

int cmd_synth(SynthFlags f, std::ostream& out, std::ostream&) {
    if (f.market.size() != 2 || f.sector.size() != 2) {
        throw Error(ErrorCode::InvalidArgument, "loading ranges take two values: low high");
    }
    f.spec.market_loading = {f.market[0], f.market[1]};
    f.spec.sector_loading = {f.sector[0], f.sector[1]};
    f.spec.noise = f.noise == "student" ? NoiseKind::StudentT : NoiseKind::Gaussian;
    const auto generated = generate(f.spec);
    const PricePanel prices = to_prices(generated.first);
    const Taxonomy& taxonomy = generated.second;

    OutputSet files;
    files.add("prices.csv", [&prices](const fs::path& p) { write_prices_wide(p, prices); });
    files.add("taxonomy.csv", [&taxonomy](const fs::path& p) { write_taxonomy(p, taxonomy); });

    ordered_json flags{{"n", f.spec.n},
                       {"t", f.spec.t},
                       {"sectors", f.spec.n_sectors},
                       {"market_loading", f.market},
                       {"sector_loading", f.sector},
                       {"idio_vol", f.spec.idio_vol},
                       {"scale", f.spec.scale},
                       {"noise", f.noise},
                       {"df", f.spec.student_df}};
    files.add("manifest.json", manifest("synth", flags, {{"synth", f.spec.seed}}, files).dump(1) + "\n");
    files.commit(f.out);
    out << "synth: " << f.spec.n << " tickers x " << f.spec.t << " returns written to " << f.out << "\n";
    return Ok;
}

// -------------------------------------------------------------- validate

int cmd_validate(const Inputs& in, std::ostream& out, std::ostream& err) {
    const PricePanel prices = load_prices(in.prices, parse_layout(in.layout));
    out << "prices: " << prices.tickers.size() << " tickers, " << prices.dates.size() << " dates ("
        << prices.dates.front() << " .. " << prices.dates.back() << ")\n";
    const ReturnsPanel returns = log_returns(prices);
    out << "returns: " << returns.size() << " x " << returns.length() << "\n";
    if (in.taxonomy.empty()) return Ok;
    const Taxonomy taxonomy = load_taxonomy(in.taxonomy);
    out << "taxonomy: " << taxonomy.size() << " tickers, " << taxonomy.supersectors().size() << " supersectors, "
        << taxonomy.industries().size() << " industries\n";
    const auto missing = unclassified_tickers(taxonomy, prices.tickers);
    if (!missing.empty()) {
        for (const auto& t : missing) err << "unclassified ticker: " << t << "\n";
        throw Error(ErrorCode::UnknownTicker, std::to_string(missing.size()) + " tickers lack a taxonomy entry");
    }
    out << "ok\n";
    return Ok;
}

// ---------------------------------------------------------------- parser

void add_inputs(CLI::App* cmd, Inputs& in, bool taxonomy_required) {
    cmd->add_option("--prices", in.prices, "Price CSV")->required();
    cmd->add_option("--layout", in.layout, "Price CSV layout")->check(CLI::IsMember({"wide", "long"}))->capture_default_str();
    auto* tax = cmd->add_option("--taxonomy", in.taxonomy, "Taxonomy CSV (ticker,supersector,industry)");
    if (taxonomy_required) tax->required();
}

void add_analysis(CLI::App* cmd, AnalysisFlags& a) {
    cmd->add_option("--methods", a.methods, "Clustering methods: sl al cl dbht kmedoids")
        ->check(CLI::IsMember({"sl", "al", "cl", "dbht", "kmedoids"}))
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--max-clusters", a.max_clusters, "Upper end of the N_cl sweep")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    cmd->add_option("--restarts", a.restarts, "k-medoids restarts")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", a.seed, "k-medoids seed")->capture_default_str();
}

void add_window(CLI::App* cmd, WindowFlags& w) {
    cmd->add_option("--length", w.length, "Window length (observations)")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--shift", w.shift, "Shift between windows")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--max-windows", w.max_windows, "Keep only the first windows (0 = all)")->capture_default_str();
}

int exit_code_for(ErrorCode code) {
    switch (category(code)) {
        case ErrorCategory::Usage: return Usage;
        case ErrorCategory::Data: return DataError;
        case ErrorCategory::Numeric: return NumericError;
    }
    return NumericError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Correlation filtering, hierarchical clustering and sector retrieval for return panels",
                 "corrfilter"};
    app.set_version_flag("--version", CORRFILTER_VERSION);
    app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
    app.require_subcommand(1);
    std::size_t threads = 0;
    app.add_option("--threads", threads, "Worker thread cap (0 = hardware concurrency)")
        ->envname("CORRFILTER_THREADS");

    StaticFlags st;
    auto* s = app.add_subcommand("static", "Whole-panel analysis with an N_cl sweep");
    add_inputs(s, st.in, true);
    add_analysis(s, st.analysis);
    s->add_option("--detrend", st.detrend, "raw, detrended or both")
        ->check(CLI::IsMember({"raw", "detrended", "both"}))
        ->capture_default_str();
    s->add_option("--smoothing", st.smoothing, "Correlation weights")
        ->check(CLI::IsMember({"uniform", "exponential"}))
        ->capture_default_str();
    s->add_option("--theta", st.theta, "Exponential decay (observations); default length / 3");
    s->add_option("--n-cl", st.n_cl, "Cluster count for the composition tables (linkage and k-medoids)");
    s->add_option("--alpha", st.alpha, "Overexpression significance level")->capture_default_str();
    s->add_flag("--strict-bonferroni", st.strict_bonferroni, "Divide alpha by N_cl * N_sectors");
    s->add_option("--test", st.test, "upper (P(X >= k)) or point (P(X = k))")
        ->check(CLI::IsMember({"upper", "point"}))
        ->capture_default_str();
    s->add_option("--out", st.out, "Output directory")->required();

    RollingFlags ro;
    auto* r = app.add_subcommand("rolling", "Rolling-window analysis");
    add_inputs(r, ro.in, true);
    add_analysis(r, ro.analysis);
    add_window(r, ro.window);
    r->add_option("--detrend", ro.detrend, "raw, detrended or both")
        ->check(CLI::IsMember({"raw", "detrended", "both"}))
        ->capture_default_str();
    r->add_option("--smoothing", ro.smoothing, "Correlation weights")
        ->check(CLI::IsMember({"uniform", "exponential"}))
        ->capture_default_str();
    r->add_option("--theta", ro.theta, "Exponential decay (observations); default length / 3");
    r->add_option("--out", ro.out, "Output directory")->required();

    BootstrapFlags bo;
    auto* b = app.add_subcommand("bootstrap", "Bootstrap the DBHT cluster count per window");
    add_inputs(b, bo.in, false);
    add_window(b, bo.window);
    b->add_option("--windows", bo.windows, "Window indices (default all)")->delimiter(',');
    b->add_option("--n-boot", bo.n_boot, "Replicas per window")->capture_default_str();
    b->add_option("--seed", bo.seed, "Bootstrap seed")->capture_default_str();
    b->add_option("--resample", bo.resample, "time (columns) or rows")
        ->check(CLI::IsMember({"time", "rows"}))
        ->capture_default_str();
    b->add_option("--detrend", bo.detrend, "raw or detrended")
        ->check(CLI::IsMember({"raw", "detrended"}))
        ->capture_default_str();
    b->add_option("--out", bo.out, "Output directory")->required();

    SynthFlags sy;
    auto* g = app.add_subcommand("synth", "Generate a synthetic price panel and taxonomy");
    g->add_option("--n", sy.spec.n, "Tickers")->capture_default_str();
    g->add_option("--t", sy.spec.t, "Returns per ticker")->capture_default_str();
    g->add_option("--sectors", sy.spec.n_sectors, "Planted sectors")->capture_default_str();
    g->add_option("--market-loading", sy.market, "Market loading range: low high")->expected(2)->capture_default_str();
    g->add_option("--sector-loading", sy.sector, "Sector loading range: low high")->expected(2)->capture_default_str();
    g->add_option("--idio-vol", sy.spec.idio_vol, "Idiosyncratic volatility")->capture_default_str();
    g->add_option("--scale", sy.spec.scale, "Return scale")->capture_default_str();
    g->add_option("--noise", sy.noise, "gaussian or student")
        ->check(CLI::IsMember({"gaussian", "student"}))
        ->capture_default_str();
    g->add_option("--df", sy.spec.student_df, "Student-t degrees of freedom")->capture_default_str();
    g->add_option("--seed", sy.spec.seed, "Seed")->capture_default_str();
    g->add_option("--out", sy.out, "Output directory")->required();

    Inputs va;
    auto* v = app.add_subcommand("validate", "Check that input files load");
    add_inputs(v, va, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : Usage;
    }

    try {
        set_thread_count(threads);
        if (s->parsed()) return cmd_static(st, out, err);
        if (r->parsed()) return cmd_rolling(ro, out, err);
        if (b->parsed()) return cmd_bootstrap(bo, out, err);
        if (g->parsed()) return cmd_synth(sy, out, err);
        if (v->parsed()) return cmd_validate(va, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return DataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return NumericError;
    }
    return Usage;
}

}  // namespace corrfilter::cli
