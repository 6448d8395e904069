#pragma once

#include <Eigen/Core>

namespace candlecast {

/// Least-squares solution of Y = X B via column-pivoted QR.
struct OlsSolution {
    Eigen::MatrixXd coef;       // cols(X) x cols(Y)
    Eigen::MatrixXd residuals;  // rows(X) x cols(Y)
};

/// Relative pivot threshold below which a regressor column counts as
/// linearly dependent.
inline constexpr double kRankThreshold = 1e-10;

/// Throws RankDeficientError when X does not have full column rank or has
/// fewer rows than columns.
[[nodiscard]] OlsSolution ols(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

/// (X'X)^{-1} computed from the same pivoted QR; throws on rank deficiency.
[[nodiscard]] Eigen::MatrixXd ols_inverse_gram(const Eigen::MatrixXd& X);

/// Residuals of Y after projecting out the columns of X. X may have zero
/// columns, in which case Y is returned unchanged.
[[nodiscard]] Eigen::MatrixXd partial_out(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

}  // namespace candlecast
