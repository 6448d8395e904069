#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "candlecast/ohlc.hpp"

namespace candlecast {

enum class ModelKind { Var, Vec, DiffVar };

[[nodiscard]] const char* to_string(ModelKind kind);

struct WindowSpec {
    std::size_t q = 50;  // estimation window length
    std::size_t m = 1;   // forecast horizon
    std::size_t stride = 1;

    /// Throws DataError unless q >= 30, 1 <= m <= 10, stride == 1 and q + m <= series_length.
    void validate(std::size_t series_length) const;
    [[nodiscard]] std::size_t window_count(std::size_t series_length) const { return series_length - q - m + 1; }
};

struct PipelineConfig {
    double alpha_adf = 0.05;
    double alpha_johansen = 0.05;
    std::optional<std::size_t> p_max;  // defaults to default_p_max(q, 4)
    SanitizeConfig sanitize;
    std::size_t workers = 1;

    /// Throws DataError on an untabulated significance level, p_max = 0,
    /// zero workers or an invalid sanitize block.
    void validate() const;
};

/// Outcome of one rolling window.
struct WindowForecast {
    std::size_t window_index = 0;
    std::int64_t origin = 0;  // index t of the last in-sample bar
    ModelKind model = ModelKind::Var;
    std::size_t p = 0;
    std::size_t r = 0;                         // VEC only
    std::array<bool, 4> nonstationary{};       // ADF flags on the window levels
    std::size_t still_nonstationary = 0;       // DIFF_VAR: components failing the ADF re-test
    bool lag_fallback = false;                 // refit with p = 1 after a rank failure
    Eigen::MatrixXd forecast_transformed;      // m x 4
    std::vector<OhlcBar> forecast_bars;
    std::vector<OhlcBar> realized_bars;
};

struct FailedWindow {
    std::size_t window_index = 0;
    std::string reason;
};

struct ModelCounts {
    std::size_t var = 0;
    std::size_t vec = 0;
    std::size_t diff_var = 0;
};

struct BacktestResult {
    WindowSpec spec;
    std::vector<WindowForecast> windows;
    std::vector<FailedWindow> failed;
    ModelCounts model_counts;
    OhlcSeries series;  // sanitized input the windows index into
    SanitizeSummary sanitize_summary;

    /// Number of rolling origins, successful or not.
    [[nodiscard]] std::size_t origin_count() const { return windows.size() + failed.size(); }
};

/// Raised by run_window when no model can be fitted even after fallbacks.
class WindowFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs the model-selection tree on a q x 4 window of transformed vectors and
/// returns an m-step forecast already mapped back to bars. `window_index`,
/// `origin` and `realized_bars` are left for the caller.
[[nodiscard]] WindowForecast run_window(const Eigen::MatrixXd& window, std::size_t m, const PipelineConfig& cfg);

/// Sanitizes and transforms `series` once, then forecasts from every origin
/// t = q, ..., T - m (1-based) using only bars t-q+1..t.
[[nodiscard]] BacktestResult rolling_backtest(const OhlcSeries& series, const WindowSpec& spec,
                                              const PipelineConfig& cfg);
[[nodiscard]] BacktestResult rolling_backtest(std::span<const RawBar> raw, const WindowSpec& spec,
                                              const PipelineConfig& cfg);

/// Single forecast from the trailing q bars of `series`.
struct TailForecast {
    WindowForecast forecast;
    SanitizeSummary sanitize_summary;
    std::size_t series_length = 0;
};
[[nodiscard]] TailForecast forecast_tail(std::span<const RawBar> raw, std::size_t q, std::size_t m,
                                         const PipelineConfig& cfg);

}  // namespace candlecast
