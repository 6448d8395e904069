#include "candlecast/critical_values.hpp"

#include <cmath>
#include <string>

#include "candlecast/errors.hpp"

namespace candlecast::critical_values {

namespace {

// MacKinnon (2010), Table 2, "c" row for N = 1; columns b0..b3.
constexpr std::array<std::array<double, 4>, 3> kAdfConstant{{
    {-3.43035, -6.5393, -16.786, -79.433},  // 1%
    {-2.86154, -2.8903, -4.234, -40.040},   // 5%
    {-2.56677, -1.5384, -2.809, 0.0},       // 10%
}};

// MacKinnon (1994) p-value surface, constant case, N = 1.
constexpr double kTauMax = 2.74;
constexpr double kTauMin = -18.83;
constexpr double kTauStar = -1.61;
constexpr std::array<double, 3> kSmallP{2.1659, 1.4412, 0.038269};
constexpr std::array<double, 4> kLargeP{1.7339, 0.93202, -0.12745, -0.010368};

// Trace test, constant restricted to the cointegrating relation. Rows: K - r0
// = 1..12; columns 10/5/1%. Rows 1-5 are Osterwald-Lenum (1992) Table 1*;
// rows 6-12 are simulated (tests/fixtures/johansen_trace_cv.py).
constexpr std::array<std::array<double, 3>, 12> kTrace{{
    {7.52, 9.24, 12.97},
    {17.85, 19.96, 24.60},
    {32.00, 34.91, 41.07},
    {49.65, 53.12, 60.16},
    {71.86, 76.07, 84.45},
    {99.30, 104.36, 113.12},
    {129.55, 134.64, 145.11},
    {164.28, 170.47, 182.79},
    {202.88, 209.52, 222.76},
    {245.10, 251.84, 265.67},
    {291.39, 299.14, 314.66},
    {342.37, 350.98, 369.55},
}};

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

Level level_from_alpha(double alpha) {
    if (std::abs(alpha - 0.01) < 1e-12) {
        return Level::One;
    }
    if (std::abs(alpha - 0.05) < 1e-12) {
        return Level::Five;
    }
    if (std::abs(alpha - 0.10) < 1e-12) {
        return Level::Ten;
    }
    throw DataError("significance must be one of 0.01, 0.05, 0.10 (got " + std::to_string(alpha) + ")");
}

double adf_critical_value(Level level, std::size_t nobs) {
    const auto& b = kAdfConstant[static_cast<std::size_t>(level)];
    const double inv = 1.0 / static_cast<double>(nobs);
    return b[0] + inv * (b[1] + inv * (b[2] + inv * b[3]));
}

double adf_p_value(double statistic) {
    if (statistic > kTauMax) {
        return 1.0;
    }
    if (statistic < kTauMin) {
        return 0.0;
    }
    double z = 0.0;
    if (statistic <= kTauStar) {
        z = kSmallP[0] + statistic * (kSmallP[1] + statistic * kSmallP[2]);
    } else {
        z = kLargeP[0] + statistic * (kLargeP[1] + statistic * (kLargeP[2] + statistic * kLargeP[3]));
    }
    return standard_normal_cdf(z);
}

double johansen_trace_critical_value(std::size_t trends, Level level) {
    if (trends < 1 || trends > kTrace.size()) {
        throw DataError("no trace critical value for dimension " + std::to_string(trends));
    }
    // Table columns run 10/5/1 while Level runs 1/5/10.
    const std::size_t column = 2 - static_cast<std::size_t>(level);
    return kTrace[trends - 1][column];
}

}  // namespace candlecast::critical_values
