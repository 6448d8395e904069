#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "candlecast/stats_tests.hpp"

namespace candlecast {

/// Rows are periods, columns are the K component series.
using SeriesMatrix = Eigen::MatrixXd;

/// Y_t = alpha + A_1 Y_{t-1} + ... + A_p Y_{t-p} + w_t, fitted by least squares.
struct VarModel {
    std::size_t k = 0;
    std::size_t p = 0;
    Eigen::VectorXd alpha;
    std::vector<Eigen::MatrixXd> lag_coefficients;  // A_1..A_p, each K x K
    Eigen::MatrixXd residuals;                      // (T - p) x K
    Eigen::MatrixXd residual_cov;                   // K x K
};

/// dY_t = sum_j Gamma_j dY_{t-j} + gamma beta' Y_{t-p} + alpha + w_t.
struct VecModel {
    std::size_t k = 0;
    std::size_t p = 0;
    std::size_t r = 0;
    Eigen::VectorXd alpha;
    std::vector<Eigen::MatrixXd> short_run;  // Gamma_1..Gamma_{p-1}
    Eigen::MatrixXd loading;                 // gamma, K x r
    Eigen::MatrixXd cointegration;           // beta, K x r
    Eigen::MatrixXd residuals;               // (T - p) x K
    Eigen::MatrixXd residual_cov;            // K x K

    /// gamma beta'
    [[nodiscard]] Eigen::MatrixXd long_run() const { return loading * cointegration.transpose(); }

    /// Coefficients A_1..A_p of the equivalent levels VAR.
    [[nodiscard]] std::vector<Eigen::MatrixXd> levels_coefficients() const;
};

struct ForecastPath {
    std::int64_t origin = 0;
    std::size_t horizon = 0;
    Eigen::MatrixXd values;  // horizon x K
};

/// 2 p K^2 / T
[[nodiscard]] double aic_penalty(std::size_t p, std::size_t k, std::size_t nobs);

/// ln(sum of squared residuals / T) + 2 p K^2 / T with T = residuals.rows().
[[nodiscard]] double aic_from_residuals(const Eigen::MatrixXd& residuals, std::size_t p);

/// AIC(p) for p = 1..p_max, every candidate fitted on the same effective
/// sample (the first p_max rows serve as pre-sample). Candidates whose design
/// is rank deficient get +infinity.
[[nodiscard]] std::vector<double> aic_table(const SeriesMatrix& y, std::size_t p_max);

/// argmin of aic_table, ties toward the smaller lag. Requires
/// T > K p_max + p_max + 5.
[[nodiscard]] std::size_t select_lag_aic(const SeriesMatrix& y, std::size_t p_max);

/// min(8, floor((T - 1)/(K + 1))), shrunk until select_lag_aic's length
/// precondition holds; at least 1.
[[nodiscard]] std::size_t default_p_max(std::size_t length, std::size_t k);

/// Requires T >= K p + p + 2 and a full-rank regressor matrix.
[[nodiscard]] VarModel fit_var(const SeriesMatrix& y, std::size_t p);

/// `history` holds the last p observations, oldest first.
[[nodiscard]] ForecastPath forecast_var(const VarModel& model, const SeriesMatrix& history, std::size_t horizon,
                                        std::int64_t origin = 0);

/// Cointegrating vectors come from the r leading Johansen eigenvectors; the
/// remaining coefficients from OLS of dY_t on lagged differences, beta' Y_{t-p}
/// and a constant. Requires 0 < r < K.
[[nodiscard]] VecModel fit_vec(const SeriesMatrix& y, std::size_t p, std::size_t r);
[[nodiscard]] VecModel fit_vec(const SeriesMatrix& y, std::size_t p, std::size_t r, const JohansenResult& johansen);

/// Forecasts through the levels-VAR representation. `history` holds the last
/// p levels, oldest first.
[[nodiscard]] ForecastPath forecast_vec(const VecModel& model, const SeriesMatrix& history, std::size_t horizon,
                                        std::int64_t origin = 0);

/// Row-wise first difference; requires at least 2 rows.
[[nodiscard]] SeriesMatrix difference(const SeriesMatrix& y);

/// Cumulative sums of `steps` anchored at `last_level`.
[[nodiscard]] SeriesMatrix integrate(const Eigen::RowVectorXd& last_level, const SeriesMatrix& steps);

}  // namespace candlecast
