#pragma once

#include <array>
#include <cstddef>

namespace candlecast::critical_values {

// Significance levels for which tables are shipped.
enum class Level : std::size_t { One = 0, Five = 1, Ten = 2 };

/// Maps 0.01 / 0.05 / 0.10 to a Level; throws DataError otherwise.
[[nodiscard]] Level level_from_alpha(double alpha);

/// Augmented Dickey-Fuller tau, constant and no trend, one I(1) series.
/// MacKinnon (2010) response surface: cv(T) = b0 + b1/T + b2/T^2 + b3/T^3,
/// where T is the number of observations in the test regression.
[[nodiscard]] double adf_critical_value(Level level, std::size_t nobs);

/// MacKinnon (1994) approximate p-value for the same regression form.
[[nodiscard]] double adf_p_value(double statistic);

/// Johansen trace statistic, unrestricted constant (linear trend in levels,
/// none in the cointegrating relation). Indexed by the number of common
/// stochastic trends under the null, K - r0, in [1, 12]. Source:
/// MacKinnon, Haug and Michelis (1999), the tabulation distributed with
/// statsmodels (coint_tables.c_sjt, det_order = 0). Columns are the 10%,
/// 5% and 1% points.
[[nodiscard]] double johansen_trace_critical_value(std::size_t trends, Level level);

inline constexpr std::size_t kMaxJohansenDimension = 12;

}  // namespace candlecast::critical_values
