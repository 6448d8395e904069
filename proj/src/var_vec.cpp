#include "candlecast/var_vec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "candlecast/errors.hpp"
#include "candlecast/linalg.hpp"

namespace candlecast {

namespace {

using Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) {
        throw DataError(std::string(what) + " contains non-finite values");
    }
}

// Rows t = p..T-1 of [1, Y_{t-1}, ..., Y_{t-p}].
Eigen::MatrixXd var_design(const SeriesMatrix& y, std::size_t p) {
    const Index k = y.cols();
    const Index n = y.rows() - idx(p);
    Eigen::MatrixXd z(n, 1 + k * idx(p));
    for (Index row = 0; row < n; ++row) {
        const Index t = row + idx(p);
        z(row, 0) = 1.0;
        for (std::size_t j = 1; j <= p; ++j) {
            z.block(row, 1 + k * idx(j - 1), 1, k) = y.row(t - idx(j));
        }
    }
    return z;
}

Eigen::MatrixXd recurse_levels(const Eigen::VectorXd& alpha, const std::vector<Eigen::MatrixXd>& coefficients,
                               const SeriesMatrix& history, std::size_t horizon) {
    const std::size_t p = coefficients.size();
    const Index k = alpha.size();
    if (history.rows() != idx(p) || history.cols() != k) {
        throw DataError("forecast history must hold exactly p rows of K values");
    }
    if (horizon < 1) {
        throw DataError("forecast horizon must be at least 1");
    }
    require_finite(history, "forecast history");

    Eigen::MatrixXd path(idx(p + horizon), k);
    path.topRows(idx(p)) = history;
    for (std::size_t h = 0; h < horizon; ++h) {
        const Index t = idx(p + h);
        Eigen::VectorXd next = alpha;
        for (std::size_t j = 1; j <= p; ++j) {
            next.noalias() += coefficients[j - 1] * path.row(t - idx(j)).transpose();
        }
        path.row(t) = next.transpose();
    }
    return path.bottomRows(idx(horizon));
}

}  // namespace

double aic_penalty(std::size_t p, std::size_t k, std::size_t nobs) {
    return 2.0 * static_cast<double>(p * k * k) / static_cast<double>(nobs);
}

double aic_from_residuals(const Eigen::MatrixXd& residuals, std::size_t p) {
    const auto nobs = static_cast<std::size_t>(residuals.rows());
    const auto k = static_cast<std::size_t>(residuals.cols());
    return std::log(residuals.squaredNorm() / static_cast<double>(nobs)) + aic_penalty(p, k, nobs);
}

std::vector<double> aic_table(const SeriesMatrix& y, std::size_t p_max) {
    const auto t_len = static_cast<std::size_t>(y.rows());
    const auto k = static_cast<std::size_t>(y.cols());
    if (p_max < 1) {
        throw DataError("p_max must be at least 1");
    }
    if (t_len <= k * p_max + p_max + 5) {
        throw DataError("series too short for lag search up to p_max = " + std::to_string(p_max));
    }
    std::vector<double> table(p_max, std::numeric_limits<double>::infinity());
    for (std::size_t p = 1; p <= p_max; ++p) {
        // Start p rows before the common sample so every candidate fits rows p_max..T-1.
        const SeriesMatrix sample = y.bottomRows(idx(t_len - p_max + p));
        try {
            table[p - 1] = aic_from_residuals(fit_var(sample, p).residuals, p);
        } catch (const RankDeficientError&) {
        }
    }
    return table;
}

std::size_t select_lag_aic(const SeriesMatrix& y, std::size_t p_max) {
    const auto table = aic_table(y, p_max);
    std::size_t best = 0;
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (table[i] < table[best]) {
            best = i;
        }
    }
    if (table[best] == std::numeric_limits<double>::infinity()) {
        throw RankDeficientError("no lag order yields a full-rank VAR design");
    }
    return best + 1;
}

std::size_t default_p_max(std::size_t length, std::size_t k) {
    std::size_t p_max = std::min<std::size_t>(8, length > 0 ? (length - 1) / (k + 1) : 0);
    while (p_max > 1 && length <= k * p_max + p_max + 5) {
        --p_max;
    }
    return std::max<std::size_t>(p_max, 1);
}

VarModel fit_var(const SeriesMatrix& y, std::size_t p) {
    const auto t_len = static_cast<std::size_t>(y.rows());
    const auto k = static_cast<std::size_t>(y.cols());
    if (p < 1) {
        throw DataError("VAR lag must be at least 1");
    }
    if (k < 1) {
        throw DataError("VAR needs at least one series");
    }
    if (t_len < k * p + p + 2) {
        throw DataError("series too short for VAR(" + std::to_string(p) + ")");
    }
    require_finite(y, "VAR input");

    const Eigen::MatrixXd z = var_design(y, p);
    const Eigen::MatrixXd target = y.bottomRows(idx(t_len - p));
    const auto solution = ols(z, target);

    VarModel model;
    model.k = k;
    model.p = p;
    model.alpha = solution.coef.row(0).transpose();
    for (std::size_t j = 0; j < p; ++j) {
        model.lag_coefficients.push_back(solution.coef.block(1 + idx(k * j), 0, idx(k), idx(k)).transpose());
    }
    model.residuals = solution.residuals;
    const double dof = static_cast<double>(t_len - p - (k * p + 1));
    model.residual_cov = model.residuals.transpose() * model.residuals / dof;
    model.residual_cov = 0.5 * (model.residual_cov + model.residual_cov.transpose()).eval();
    return model;
}

ForecastPath forecast_var(const VarModel& model, const SeriesMatrix& history, std::size_t horizon,
                          std::int64_t origin) {
    return {origin, horizon, recurse_levels(model.alpha, model.lag_coefficients, history, horizon)};
}

std::vector<Eigen::MatrixXd> VecModel::levels_coefficients() const {
    const Index ki = idx(k);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(ki, ki);
    std::vector<Eigen::MatrixXd> a(p, Eigen::MatrixXd::Zero(ki, ki));
    a[0] += identity;
    for (std::size_t j = 1; j < p; ++j) {
        a[j - 1] += short_run[j - 1];
        a[j] -= short_run[j - 1];
    }
    a[p - 1] += long_run();
    return a;
}

VecModel fit_vec(const SeriesMatrix& y, std::size_t p, std::size_t r) {
    return fit_vec(y, p, r, johansen_trace_test(y, p));
}

VecModel fit_vec(const SeriesMatrix& y, std::size_t p, std::size_t r, const JohansenResult& johansen) {
    const auto k = static_cast<std::size_t>(y.cols());
    const auto t_len = static_cast<std::size_t>(y.rows());
    if (r == 0 || r >= k) {
        throw DataError("VEC rank must satisfy 0 < r < K; use a differenced VAR for r = 0 and a levels VAR for r = K");
    }
    if (p < 1) {
        throw DataError("VEC lag must be at least 1");
    }
    if (static_cast<std::size_t>(johansen.eigenvectors.cols()) != k || johansen.lag != p) {
        throw DataError("Johansen result does not match the series dimension or lag");
    }
    require_finite(y, "VEC input");

    const Index ki = idx(k);
    const Index n = idx(t_len - p);
    const Eigen::MatrixXd beta = johansen.eigenvectors.leftCols(idx(r));

    const Index cols = 1 + ki * idx(p - 1) + idx(r);
    Eigen::MatrixXd design(n, cols);
    Eigen::MatrixXd target(n, ki);
    for (Index row = 0; row < n; ++row) {
        const Index t = row + idx(p);
        target.row(row) = y.row(t) - y.row(t - 1);
        design(row, 0) = 1.0;
        for (std::size_t j = 1; j < p; ++j) {
            const Index s = t - idx(j);
            design.block(row, 1 + ki * idx(j - 1), 1, ki) = y.row(s) - y.row(s - 1);
        }
        design.block(row, 1 + ki * idx(p - 1), 1, idx(r)) = y.row(t - idx(p)) * beta;
    }
    const auto solution = ols(design, target);

    VecModel model;
    model.k = k;
    model.p = p;
    model.r = r;
    model.alpha = solution.coef.row(0).transpose();
    for (std::size_t j = 1; j < p; ++j) {
        model.short_run.push_back(solution.coef.block(1 + ki * idx(j - 1), 0, ki, ki).transpose());
    }
    model.loading = solution.coef.block(1 + ki * idx(p - 1), 0, idx(r), ki).transpose();
    model.cointegration = beta;
    model.residuals = solution.residuals;
    const double dof = static_cast<double>(n - cols);
    if (dof <= 0.0) {
        throw RankDeficientError("no residual degrees of freedom in VEC fit");
    }
    model.residual_cov = model.residuals.transpose() * model.residuals / dof;
    model.residual_cov = 0.5 * (model.residual_cov + model.residual_cov.transpose()).eval();

    // gamma beta' must keep rank r.
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(model.long_run());
    const auto& s = svd.singularValues();
    const double retained = s(idx(r) - 1);
    const double discarded = s(idx(r));
    if (!(retained > 0.0) || (discarded > 0.0 && retained / discarded <= 1e3)) {
        throw NumericError("estimated long-run matrix lost rank " + std::to_string(r));
    }
    return model;
}

ForecastPath forecast_vec(const VecModel& model, const SeriesMatrix& history, std::size_t horizon,
                          std::int64_t origin) {
    return {origin, horizon, recurse_levels(model.alpha, model.levels_coefficients(), history, horizon)};
}

SeriesMatrix difference(const SeriesMatrix& y) {
    if (y.rows() < 2) {
        throw DataError("difference needs at least 2 observations");
    }
    require_finite(y, "difference input");
    return y.bottomRows(y.rows() - 1) - y.topRows(y.rows() - 1);
}

SeriesMatrix integrate(const Eigen::RowVectorXd& last_level, const SeriesMatrix& steps) {
    if (steps.cols() != last_level.size()) {
        throw DataError("integrate: level and step widths differ");
    }
    require_finite(steps, "integrate steps");
    if (!last_level.allFinite()) {
        throw DataError("integrate anchor contains non-finite values");
    }
    SeriesMatrix out(steps.rows(), steps.cols());
    Eigen::RowVectorXd running = last_level;
    for (Index i = 0; i < steps.rows(); ++i) {
        running += steps.row(i);
        out.row(i) = running;
    }
    return out;
}

}  // namespace candlecast
