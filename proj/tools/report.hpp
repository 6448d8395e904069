#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "candlecast/serialize.hpp"

namespace candlecast::cli {

/// Backtest documents found in a directory, grouped by their `tag`.
using BacktestGroups = std::map<std::string, std::vector<Json>>;

[[nodiscard]] BacktestGroups load_backtests(const std::filesystem::path& dir);

/// Metric grid with one column per (q, m), reading each cell from the
/// horizon-m entry of the matching backtest.
[[nodiscard]] std::string render_metric_table(const std::string& tag, const std::vector<Json>& docs);

/// Proposed-versus-naive table with significance stars and the model tally
/// for every (q, m) cell that carries comparison tests.
[[nodiscard]] std::string render_comparison_table(const std::string& tag, const std::vector<Json>& docs);

/// Long-format rows `q,m,price,metric,value` (price empty for RMSEH and AR).
[[nodiscard]] std::string render_tidy_csv(const std::vector<Json>& docs);

}  // namespace candlecast::cli
