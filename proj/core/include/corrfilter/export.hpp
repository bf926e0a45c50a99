#pragma once

#include <string>
#include <vector>

#include "corrfilter/dbht.hpp"
#include "corrfilter/filtergraph.hpp"
#include "corrfilter/linkage.hpp"
#include "corrfilter/metrics.hpp"

namespace corrfilter {

/// {"vertices": [...], "edges": [[i, j, d], ...], "rotation": [[...], ...]}
std::string graph_json(const PlanarGraph& g, const std::vector<std::string>& tickers);

/// {"n_cl", "labels", "merges", "bubbles"}; bubbles carry their vertex ids
/// and kind, tree edges their direction.
std::string dbht_json(const DbhtResult& result, const std::vector<std::string>& tickers);

/// left,right,height,size
std::string dendrogram_csv(const Dendrogram& d);

/// cluster,sector,k,p,rejected
std::string overexpression_csv(const OverexpressionReport& report, const std::vector<std::string>& sector_names);
std::string overexpression_json(const OverexpressionReport& report, const std::vector<std::string>& sector_names);

}  // namespace corrfilter
