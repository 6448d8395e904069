#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "candlecast/ohlc.hpp"

namespace candlecast {

struct BacktestResult;

enum class Price : std::size_t { Open = 0, High = 1, Low = 2, Close = 3 };

inline constexpr std::array<Price, 4> kAllPrices{Price::Open, Price::High, Price::Low, Price::Close};

[[nodiscard]] const char* to_string(Price price);
[[nodiscard]] double price_of(const OhlcBar& bar, Price price);

/// Mean absolute percentage error, in percent. Throws DataError on a zero
/// actual value or mismatched/empty inputs.
[[nodiscard]] double mape(std::span<const double> actual, std::span<const double> forecast);

/// Sample standard deviation (k - 1 denominator) of the forecasts themselves.
[[nodiscard]] double sd_of_forecasts(std::span<const double> forecast);

[[nodiscard]] double rmse(std::span<const double> actual, std::span<const double> forecast);

/// |mid - mid_hat| + |half range - half range_hat| for the [low, high] intervals.
[[nodiscard]] double hausdorff_distance(const OhlcBar& actual, const OhlcBar& forecast);

/// Length of the [low, high] overlap over the length of their union;
/// 0 when the intervals are disjoint or both degenerate.
[[nodiscard]] double interval_overlap_ratio(const OhlcBar& actual, const OhlcBar& forecast);

[[nodiscard]] double rmseh(std::span<const OhlcBar> actual, std::span<const OhlcBar> forecast);
[[nodiscard]] double accuracy_ratio(std::span<const OhlcBar> actual, std::span<const OhlcBar> forecast);

struct EvalReport {
    std::array<double, 4> mape{};  // percent, indexed by Price
    std::array<double, 4> sd{};
    std::array<double, 4> rmse{};
    double rmseh = 0.0;
    double ar = 0.0;
    std::size_t k = 0;
};

/// All five measures over k paired bars. SD is reported as 0 when k < 2.
[[nodiscard]] EvalReport evaluate(std::span<const OhlcBar> actual, std::span<const OhlcBar> forecast);

/// Carries the last bar forward for `m` periods.
[[nodiscard]] std::vector<OhlcBar> naive_forecast(const OhlcSeries& series, std::size_t m);

enum class Better { Lower, Higher };

struct OneSidedTest {
    double mean_difference = 0.0;  // proposed - naive
    double t_statistic = 0.0;
    double p_value = 1.0;
    bool significant = false;
    bool tie = false;  // zero-variance differences
    std::size_t n = 0;
};

inline constexpr double kComparisonAlpha = 0.01;

/// Paired one-sided t-test. For Better::Lower the alternative is
/// mean(proposed) < mean(naive); for Better::Higher it is reversed.
/// Requires at least 10 pairs.
[[nodiscard]] OneSidedTest compare_one_sided(std::span<const double> proposed, std::span<const double> naive,
                                             Better direction, double alpha = kComparisonAlpha);

struct ComparisonEntry {
    std::string metric;  // MAPE, RMSE, RMSEH, AR
    std::string price;   // o/h/l/c or empty for interval metrics
    double proposed = 0.0;
    double naive = 0.0;
    OneSidedTest test;
};

struct ComparisonReport {
    EvalReport proposed;
    EvalReport naive;
    std::vector<ComparisonEntry> entries;
};

/// Evaluates both forecasts and tests every MAPE/RMSE/RMSEH/AR entry on the
/// per-period losses (absolute percentage error, squared error, squared
/// Hausdorff distance, overlap ratio).
[[nodiscard]] ComparisonReport compare_to_naive(std::span<const OhlcBar> actual, std::span<const OhlcBar> proposed,
                                                std::span<const OhlcBar> naive);

/// Metrics for one forecast horizon, pooled across all successful windows.
struct HorizonEvaluation {
    std::size_t horizon = 1;
    ComparisonReport comparison;  // entries empty when fewer than 10 windows
};

[[nodiscard]] std::vector<HorizonEvaluation> evaluate_backtest(const BacktestResult& result);

}  // namespace candlecast
