#include "candlecast/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <variant>

#include "candlecast/critical_values.hpp"
#include "candlecast/errors.hpp"
#include "candlecast/stats_tests.hpp"
#include "candlecast/var_vec.hpp"

namespace candlecast {

namespace {

using Eigen::Index;

constexpr std::size_t kDims = 4;
constexpr std::size_t kMinWindow = 30;
constexpr std::size_t kMaxHorizon = 10;

struct LevelsForecast {
    Eigen::MatrixXd values;
    std::size_t p = 0;
    bool fallback = false;
};

std::size_t lag_ceiling(std::size_t length, std::size_t k, const PipelineConfig& cfg) {
    std::size_t p_max = cfg.p_max.value_or(default_p_max(length, k));
    while (p_max > 1 && length <= k * p_max + p_max + 5) {
        --p_max;
    }
    return std::max<std::size_t>(p_max, 1);
}

// AIC-selected VAR on `y`; on a rank failure retries with p = 1.
LevelsForecast var_forecast(const Eigen::MatrixXd& y, std::size_t m, const PipelineConfig& cfg) {
    const auto k = static_cast<std::size_t>(y.cols());
    LevelsForecast out;
    VarModel model;
    try {
        out.p = select_lag_aic(y, lag_ceiling(static_cast<std::size_t>(y.rows()), k, cfg));
        model = fit_var(y, out.p);
    } catch (const NumericError&) {
        out.p = 1;
        out.fallback = true;
        model = fit_var(y, 1);
    }
    const Eigen::MatrixXd history = y.bottomRows(static_cast<Index>(out.p));
    out.values = forecast_var(model, history, m).values;
    return out;
}

std::size_t johansen_lag(const Eigen::MatrixXd& y, const PipelineConfig& cfg) {
    const auto q = static_cast<std::size_t>(y.rows());
    const std::size_t cap = q >= kDims + 20 ? (q - 20) / kDims : 1;
    std::size_t p = 1;
    try {
        p = select_lag_aic(y, lag_ceiling(q, kDims, cfg));
    } catch (const NumericError&) {
        p = 1;
    }
    return std::clamp<std::size_t>(p, 1, std::max<std::size_t>(cap, 1));
}

std::vector<OhlcBar> to_bars(const Eigen::MatrixXd& values) {
    std::vector<OhlcBar> bars;
    for (Index h = 0; h < values.rows(); ++h) {
        bars.push_back(inverse_transform(TransformedVector::from_vector(values.row(h).transpose())));
    }
    return bars;
}

}  // namespace

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Var:
            return "VAR";
        case ModelKind::Vec:
            return "VEC";
        case ModelKind::DiffVar:
            return "DIFF_VAR";
    }
    return "?";
}

void WindowSpec::validate(std::size_t series_length) const {
    if (q < kMinWindow) {
        throw DataError("window length q must be at least 30");
    }
    if (m < 1 || m > kMaxHorizon) {
        throw DataError("forecast horizon m must lie in [1, 10]");
    }
    if (stride != 1) {
        throw DataError("windows roll forward one period at a time (stride 1)");
    }
    if (q + m > series_length) {
        throw DataError("series of length " + std::to_string(series_length) + " is shorter than q + m = " +
                        std::to_string(q + m));
    }
}

void PipelineConfig::validate() const {
    (void)critical_values::level_from_alpha(alpha_adf);
    (void)critical_values::level_from_alpha(alpha_johansen);
    if (p_max && *p_max < 1) {
        throw DataError("p_max must be at least 1");
    }
    if (workers < 1) {
        throw DataError("worker count must be at least 1");
    }
    sanitize.validate();
}

WindowForecast run_window(const Eigen::MatrixXd& window, std::size_t m, const PipelineConfig& cfg) {
    cfg.validate();
    if (window.cols() != static_cast<Index>(kDims)) {
        throw DataError("window must have 4 transformed columns");
    }
    WindowForecast out;
    const auto q = static_cast<std::size_t>(window.rows());

    try {
        std::size_t flagged = 0;
        for (std::size_t j = 0; j < kDims; ++j) {
            const Eigen::VectorXd column = window.col(static_cast<Index>(j));
            const auto adf = adf_test(std::span<const double>(column.data(), column.size()), cfg.alpha_adf);
            out.nonstationary[j] = !adf.reject_unit_root;
            flagged += out.nonstationary[j] ? 1 : 0;
        }

        if (flagged == 0) {
            auto fc = var_forecast(window, m, cfg);
            out.model = ModelKind::Var;
            out.p = fc.p;
            out.lag_fallback = fc.fallback;
            out.forecast_transformed = std::move(fc.values);
        } else {
            std::size_t lag = johansen_lag(window, cfg);
            std::optional<JohansenResult> johansen;
            try {
                johansen = johansen_trace_test(window, lag, cfg.alpha_johansen);
            } catch (const NumericError&) {
                try {
                    lag = 1;
                    johansen = johansen_trace_test(window, lag, cfg.alpha_johansen);
                    out.lag_fallback = true;
                } catch (const NumericError&) {
                    johansen.reset();
                }
            }
            const std::size_t rank = johansen ? johansen->selected_rank : 0;

            if (rank > 0 && rank < kDims) {
                VecModel model;
                try {
                    model = fit_vec(window, lag, rank, *johansen);
                } catch (const NumericError&) {
                    lag = 1;
                    out.lag_fallback = true;
                    model = fit_vec(window, lag, rank, johansen_trace_test(window, lag, cfg.alpha_johansen));
                }
                out.model = ModelKind::Vec;
                out.p = lag;
                out.r = rank;
                out.forecast_transformed = forecast_vec(model, window.bottomRows(static_cast<Index>(lag)), m).values;
            } else if (rank == kDims) {
                auto fc = var_forecast(window, m, cfg);
                out.model = ModelKind::Var;
                out.p = fc.p;
                out.lag_fallback = out.lag_fallback || fc.fallback;
                out.forecast_transformed = std::move(fc.values);
            } else {
                // No cointegration: difference the flagged components once.
                Eigen::MatrixXd mixed = window.bottomRows(static_cast<Index>(q - 1));
                const Eigen::MatrixXd diffs = difference(window);
                for (std::size_t j = 0; j < kDims; ++j) {
                    if (out.nonstationary[j]) {
                        const auto c = static_cast<Index>(j);
                        mixed.col(c) = diffs.col(c);
                        const Eigen::VectorXd column = diffs.col(c);
                        const auto retest =
                            adf_test(std::span<const double>(column.data(), column.size()), cfg.alpha_adf);
                        out.still_nonstationary += retest.reject_unit_root ? 0 : 1;
                    }
                }
                auto fc = var_forecast(mixed, m, cfg);
                for (std::size_t j = 0; j < kDims; ++j) {
                    if (out.nonstationary[j]) {
                        const auto c = static_cast<Index>(j);
                        Eigen::RowVectorXd anchor(1);
                        anchor(0) = window(window.rows() - 1, c);
                        fc.values.col(c) = integrate(anchor, fc.values.col(c)).col(0);
                    }
                }
                out.model = ModelKind::DiffVar;
                out.p = fc.p;
                out.lag_fallback = out.lag_fallback || fc.fallback;
                out.forecast_transformed = std::move(fc.values);
            }
        }
        out.forecast_bars = to_bars(out.forecast_transformed);
    } catch (const NumericError& e) {
        throw WindowFailure(e.what());
    } catch (const DataError& e) {
        throw WindowFailure(e.what());
    }
    return out;
}

BacktestResult rolling_backtest(std::span<const RawBar> raw, const WindowSpec& spec, const PipelineConfig& cfg) {
    cfg.validate();
    auto sanitized = sanitize_series_report(raw, cfg.sanitize);
    const std::size_t t_len = sanitized.series.size();
    spec.validate(t_len);
    const Eigen::MatrixXd transformed = transform_series(sanitized.series);
    const std::size_t count = spec.window_count(t_len);

    using Slot = std::variant<std::monostate, WindowForecast, FailedWindow>;
    std::vector<Slot> slots(count);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                auto wf = run_window(transformed.middleRows(static_cast<Index>(i), static_cast<Index>(spec.q)),
                                     spec.m, cfg);
                wf.window_index = i;
                wf.origin = sanitized.series.bars[i + spec.q - 1].t;
                for (std::size_t h = 0; h < wf.forecast_bars.size(); ++h) {
                    wf.forecast_bars[h].t = wf.origin + static_cast<std::int64_t>(h) + 1;
                }
                wf.realized_bars.assign(sanitized.series.bars.begin() + static_cast<std::ptrdiff_t>(i + spec.q),
                                        sanitized.series.bars.begin() +
                                            static_cast<std::ptrdiff_t>(i + spec.q + spec.m));
                slots[i] = std::move(wf);
            } catch (const WindowFailure& e) {
                slots[i] = FailedWindow{i, e.what()};
            }
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(cfg.workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }

    BacktestResult result;
    result.spec = spec;
    for (auto& slot : slots) {
        if (auto* wf = std::get_if<WindowForecast>(&slot)) {
            switch (wf->model) {
                case ModelKind::Var:
                    ++result.model_counts.var;
                    break;
                case ModelKind::Vec:
                    ++result.model_counts.vec;
                    break;
                case ModelKind::DiffVar:
                    ++result.model_counts.diff_var;
                    break;
            }
            result.windows.push_back(std::move(*wf));
        } else if (auto* failed = std::get_if<FailedWindow>(&slot)) {
            result.failed.push_back(std::move(*failed));
        }
    }
    result.series = std::move(sanitized.series);
    result.sanitize_summary = sanitized.summary;
    return result;
}

BacktestResult rolling_backtest(const OhlcSeries& series, const WindowSpec& spec, const PipelineConfig& cfg) {
    const auto raw = to_raw(series);
    return rolling_backtest(std::span<const RawBar>(raw), spec, cfg);
}

TailForecast forecast_tail(std::span<const RawBar> raw, std::size_t q, std::size_t m, const PipelineConfig& cfg) {
    cfg.validate();
    auto sanitized = sanitize_series_report(raw, cfg.sanitize);
    const std::size_t t_len = sanitized.series.size();
    WindowSpec spec{q, m, 1};
    if (q < kMinWindow || m < 1 || m > kMaxHorizon) {
        spec.validate(t_len);
    }
    if (q > t_len) {
        throw DataError("series of length " + std::to_string(t_len) + " is shorter than q = " + std::to_string(q));
    }
    const Eigen::MatrixXd transformed = transform_series(sanitized.series);
    TailForecast out;
    out.forecast = run_window(transformed.bottomRows(static_cast<Index>(q)), m, cfg);
    out.forecast.origin = sanitized.series.bars.back().t;
    out.forecast.window_index = 0;
    for (std::size_t h = 0; h < out.forecast.forecast_bars.size(); ++h) {
        out.forecast.forecast_bars[h].t = out.forecast.origin + static_cast<std::int64_t>(h) + 1;
    }
    out.sanitize_summary = sanitized.summary;
    out.series_length = t_len;
    return out;
}

}  // namespace candlecast
