#pragma once

#include <string>

#include <json.hpp>

#include "candlecast/metrics.hpp"
#include "candlecast/pipeline.hpp"
#include "candlecast/simgen.hpp"
#include "candlecast/stats_tests.hpp"
#include "candlecast/var_vec.hpp"

namespace candlecast {

using Json = nlohmann::json;

/// Matrices are written as arrays of rows.
[[nodiscard]] Json matrix_to_json(const Eigen::MatrixXd& m);
[[nodiscard]] Eigen::MatrixXd matrix_from_json(const Json& j);

[[nodiscard]] Json to_json(const OhlcBar& bar);
[[nodiscard]] Json to_json(const AdfResult& result);
[[nodiscard]] Json to_json(const JohansenResult& result);
[[nodiscard]] Json to_json(const VarModel& model);
[[nodiscard]] Json to_json(const VecModel& model);
[[nodiscard]] VarModel var_model_from_json(const Json& j);
[[nodiscard]] VecModel vec_model_from_json(const Json& j);
[[nodiscard]] Json to_json(const EvalReport& report);
[[nodiscard]] Json to_json(const ComparisonReport& report);
[[nodiscard]] Json to_json(const WindowForecast& window);
[[nodiscard]] Json to_json(const SanitizeSummary& summary);

/// Full backtest document: spec, model tally, failures, per-horizon metrics
/// with the naive comparison, and every window. `tag` labels the data source.
[[nodiscard]] Json backtest_to_json(const BacktestResult& result, const std::string& tag);

/// Flat CSV with one row per window and horizon:
/// window_index,model,p,r,horizon,o_hat,h_hat,l_hat,c_hat,o,h,l,c
[[nodiscard]] std::string backtest_to_csv(const BacktestResult& result);

[[nodiscard]] Json to_json(const ScenarioSpec& spec);
[[nodiscard]] ScenarioSpec scenario_from_json(const Json& j);

}  // namespace candlecast
