#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "candlecast/ohlc.hpp"

namespace candlecast {

/// Parameters of a zero-intercept VAR(p) simulated in transformed space.
struct ScenarioSpec {
    std::string name;
    std::size_t p = 1;
    std::size_t t_raw = 220;
    std::size_t burn_in = 20;
    Eigen::Vector4d initial = Eigen::Vector4d::Zero();  // Y_1; earlier lags are zero
    std::vector<Eigen::Matrix4d> coefficients;          // A_1..A_p
    Eigen::Matrix4d noise_cov = Eigen::Matrix4d::Zero();
    std::uint64_t seed = 0;

    /// Throws DataError on inconsistent sizes, an asymmetric or indefinite
    /// noise covariance, or a companion matrix with spectral radius >= 1.
    void validate() const;
};

/// Preset scenarios 1-3: common dynamics, noise sd 0.05 / 0.07 / 0.03.
[[nodiscard]] ScenarioSpec scenario_preset(int id, std::uint64_t seed = 0);
[[nodiscard]] std::vector<int> scenario_preset_ids();

/// Largest modulus among the companion-matrix eigenvalues.
[[nodiscard]] double companion_spectral_radius(const std::vector<Eigen::Matrix4d>& coefficients);

struct GeneratedSeries {
    Eigen::MatrixXd transformed;  // (t_raw - burn_in) x 4
    OhlcSeries series;
};

/// Simulates Y_t = A_1 Y_{t-1} + ... + A_p Y_{t-p} + w_t with w_t ~ N(0, noise_cov),
/// drops the burn-in prefix and maps every kept vector back to a bar.
[[nodiscard]] GeneratedSeries generate(const ScenarioSpec& spec);

}  // namespace candlecast
