#include "corrfilter/export.hpp"

#include <sstream>

#include <json.hpp>

#include "corrfilter/csv.hpp"

namespace corrfilter {

namespace {

using nlohmann::ordered_json;

ordered_json merges_json(const Dendrogram& d) {
    ordered_json out = ordered_json::array();
    for (const auto& m : d.merges) out.push_back({m.left, m.right, m.height, m.size});
    return out;
}

std::string sector_name(const std::vector<std::string>& names, int s) {
    const auto idx = static_cast<std::size_t>(s);
    return idx < names.size() ? names[idx] : std::to_string(s);
}

}  // namespace

std::string graph_json(const PlanarGraph& g, const std::vector<std::string>& tickers) {
    ordered_json out;
    out["vertices"] = tickers;
    ordered_json edges = ordered_json::array();
    for (const auto& e : g.edges()) edges.push_back({e.i, e.j, e.distance});
    out["edges"] = std::move(edges);
    ordered_json rotation = ordered_json::array();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) rotation.push_back(g.rotation(static_cast<int>(v)));
    out["rotation"] = std::move(rotation);
    return out.dump(1);
}

std::string dbht_json(const DbhtResult& result, const std::vector<std::string>& tickers) {
    ordered_json out;
    out["n_cl"] = result.n_cl;
    out["tickers"] = tickers;
    out["labels"] = result.partition.labels();
    out["merges"] = merges_json(result.dendrogram);
    const auto& dbt = result.directed;
    ordered_json bubbles = ordered_json::array();
    for (std::size_t b = 0; b < dbt.tree.bubbles.size(); ++b) {
        bubbles.push_back({{"id", b}, {"vertices", dbt.tree.bubbles[b]}, {"kind", to_string(dbt.kinds[b])}});
    }
    out["bubbles"] = std::move(bubbles);
    ordered_json tree = ordered_json::array();
    for (std::size_t k = 0; k < dbt.tree.edges.size(); ++k) {
        const auto& e = dbt.tree.edges[k];
        const int tail = dbt.head[k] == e.a ? e.b : e.a;
        tree.push_back({{"from", tail}, {"to", dbt.head[k]}, {"separator", e.separator}});
    }
    out["tree"] = std::move(tree);
    return out.dump(1);
}

std::string dendrogram_csv(const Dendrogram& d) {
    std::ostringstream out;
    csv::write_row(out, {"left", "right", "height", "size"});
    for (const auto& m : d.merges) {
        csv::write_row(out, {std::to_string(m.left), std::to_string(m.right), csv::format(m.height),
                             std::to_string(m.size)});
    }
    return out.str();
}

std::string overexpression_csv(const OverexpressionReport& report, const std::vector<std::string>& sector_names) {
    std::ostringstream out;
    csv::write_row(out, {"cluster", "sector", "k", "p", "rejected"});
    for (const auto& e : report.entries) {
        csv::write_row(out, {std::to_string(e.cluster), sector_name(sector_names, e.sector), std::to_string(e.overlap),
                             csv::format(e.p_value), e.rejected ? "1" : "0"});
    }
    return out.str();
}

std::string overexpression_json(const OverexpressionReport& report, const std::vector<std::string>& sector_names) {
    ordered_json out;
    out["alpha"] = report.alpha;
    out["bonferroni_divisor"] = report.bonferroni_divisor;
    out["threshold"] = report.threshold;
    out["rejections"] = report.rejections;
    out["normalized_rejections"] = report.normalized_rejections;
    ordered_json entries = ordered_json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"cluster", e.cluster},
                           {"sector", sector_name(sector_names, e.sector)},
                           {"k", e.overlap},
                           {"p", e.p_value},
                           {"rejected", e.rejected}});
    }
    out["entries"] = std::move(entries);
    return out.dump(1);
}

}  // namespace corrfilter
