#include "candlecast/simgen.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "candlecast/errors.hpp"
#include "candlecast/random.hpp"

namespace candlecast {

namespace {

Eigen::Matrix4d scenario_dynamics() {
    Eigen::Matrix4d a = Eigen::Matrix4d::Constant(0.12);
    a.diagonal().setConstant(0.55);
    return a;
}

// Lower-triangular factor of the noise covariance; zero for the noiseless case.
Eigen::Matrix4d noise_factor(const Eigen::Matrix4d& cov) {
    if (cov.isZero(0.0)) {
        return Eigen::Matrix4d::Zero();
    }
    const Eigen::LLT<Eigen::Matrix4d> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw DataError("noise covariance is not positive definite (Cholesky failed)");
    }
    return llt.matrixL();
}

}  // namespace

double companion_spectral_radius(const std::vector<Eigen::Matrix4d>& coefficients) {
    const auto p = static_cast<Eigen::Index>(coefficients.size());
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(4 * p, 4 * p);
    for (Eigen::Index j = 0; j < p; ++j) {
        companion.block(0, 4 * j, 4, 4) = coefficients[static_cast<std::size_t>(j)];
    }
    if (p > 1) {
        companion.bottomLeftCorner(4 * (p - 1), 4 * (p - 1)).setIdentity();
    }
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

void ScenarioSpec::validate() const {
    if (p < 1 || coefficients.size() != p) {
        throw DataError("scenario needs exactly p coefficient matrices");
    }
    if (burn_in >= t_raw) {
        throw DataError("burn-in must be shorter than the generated length");
    }
    if (!noise_cov.isApprox(noise_cov.transpose(), 1e-12) && !noise_cov.isZero(0.0)) {
        throw DataError("noise covariance must be symmetric");
    }
    (void)noise_factor(noise_cov);
    if (!initial.allFinite()) {
        throw DataError("initial vector must be finite");
    }
    const double radius = companion_spectral_radius(coefficients);
    if (!(radius < 1.0)) {
        throw DataError("unstable dynamics: companion spectral radius " + std::to_string(radius) + " >= 1");
    }
}

ScenarioSpec scenario_preset(int id, std::uint64_t seed) {
    double sd = 0.0;
    switch (id) {
        case 1:
            sd = 0.05;
            break;
        case 2:
            sd = 0.07;
            break;
        case 3:
            sd = 0.03;
            break;
        default:
            throw DataError("unknown scenario preset " + std::to_string(id) + "; valid presets are 1, 2, 3");
    }
    ScenarioSpec spec;
    spec.name = "scenario" + std::to_string(id);
    spec.p = 1;
    spec.t_raw = 220;
    spec.burn_in = 20;
    spec.initial << 4.0, 0.7, -0.85, 0.0;
    spec.coefficients = {scenario_dynamics()};
    spec.noise_cov = Eigen::Matrix4d::Identity() * (sd * sd);
    spec.seed = seed;
    return spec;
}

std::vector<int> scenario_preset_ids() { return {1, 2, 3}; }

GeneratedSeries generate(const ScenarioSpec& spec) {
    spec.validate();
    const Eigen::Matrix4d factor = noise_factor(spec.noise_cov);
    Rng rng(spec.seed);

    const auto total = static_cast<Eigen::Index>(spec.t_raw);
    const auto p = static_cast<Eigen::Index>(spec.p);
    // Rows 0..p-2 are the zero pre-sample lags, row p-1 is Y_1.
    Eigen::MatrixXd path = Eigen::MatrixXd::Zero(total + p - 1, 4);
    path.row(p - 1) = spec.initial.transpose();
    for (Eigen::Index t = p; t < total + p - 1; ++t) {
        Eigen::Vector4d z;
        for (int i = 0; i < 4; ++i) {
            z(i) = rng.normal();
        }
        Eigen::Vector4d next = factor * z;
        for (Eigen::Index j = 1; j <= p; ++j) {
            next.noalias() += spec.coefficients[static_cast<std::size_t>(j - 1)] * path.row(t - j).transpose();
        }
        path.row(t) = next.transpose();
    }

    GeneratedSeries out;
    const auto kept = static_cast<Eigen::Index>(spec.t_raw - spec.burn_in);
    out.transformed = path.bottomRows(kept);
    for (Eigen::Index i = 0; i < kept; ++i) {
        OhlcBar bar = inverse_transform(TransformedVector::from_vector(out.transformed.row(i).transpose()));
        bar.t = i + 1;
        out.series.bars.push_back(bar);
        out.series.labels.emplace_back();
    }
    return out;
}

}  // namespace candlecast
