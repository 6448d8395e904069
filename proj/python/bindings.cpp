#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "candlecast/errors.hpp"
#include "candlecast/metrics.hpp"
#include "candlecast/ohlc.hpp"
#include "candlecast/pipeline.hpp"
#include "candlecast/serialize.hpp"
#include "candlecast/simgen.hpp"
#include "candlecast/stats_tests.hpp"
#include "candlecast/var_vec.hpp"

namespace py = pybind11;
using namespace candlecast;

namespace {

using BarTuple = std::tuple<double, double, double, double>;

std::vector<RawBar> raw_from(const std::vector<BarTuple>& bars) {
    std::vector<RawBar> raw;
    raw.reserve(bars.size());
    for (const auto& [o, h, l, c] : bars) raw.push_back({"", o, h, l, c});
    return raw;
}

std::vector<BarTuple> tuples_from(const std::vector<OhlcBar>& bars) {
    std::vector<BarTuple> out;
    out.reserve(bars.size());
    for (const auto& b : bars) out.emplace_back(b.open, b.high, b.low, b.close);
    return out;
}

PipelineConfig make_config(double alpha_adf, double alpha_johansen, std::optional<std::size_t> p_max,
                           std::uint64_t seed, std::size_t workers) {
    PipelineConfig cfg;
    cfg.alpha_adf = alpha_adf;
    cfg.alpha_johansen = alpha_johansen;
    cfg.p_max = p_max;
    cfg.sanitize.rng_seed = seed;
    cfg.workers = workers;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_candlecast, m) {
    m.doc() = "Constraint-safe OHLC forecasting with VAR/VEC models";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def(
        "transform",
        [](double o, double h, double l, double c) { return transform({0, o, h, l, c}).as_vector(); },
        py::arg("open"), py::arg("high"), py::arg("low"), py::arg("close"));
    m.def(
        "inverse_transform",
        [](const Eigen::Vector4d& y) {
            const auto bar = inverse_transform(TransformedVector::from_vector(y));
            return BarTuple{bar.open, bar.high, bar.low, bar.close};
        },
        py::arg("y"));
    m.def(
        "is_valid",
        [](double o, double h, double l, double c) { return satisfies_constraints({0, o, h, l, c}); },
        py::arg("open"), py::arg("high"), py::arg("low"), py::arg("close"));
    m.def(
        "sanitize",
        [](const std::vector<BarTuple>& bars, std::uint64_t seed) {
            SanitizeConfig cfg;
            cfg.rng_seed = seed;
            const auto raw = raw_from(bars);
            const auto out = sanitize_series_report(std::span<const RawBar>(raw), cfg);
            return std::make_pair(tuples_from(out.series.bars), to_json(out.summary).dump());
        },
        py::arg("bars"), py::arg("seed") = 0);

    m.def(
        "simulate",
        [](int scenario, std::uint64_t seed) {
            const auto out = generate(scenario_preset(scenario, seed));
            return std::make_pair(tuples_from(out.series.bars), out.transformed);
        },
        py::arg("scenario"), py::arg("seed") = 0);

    m.def(
        "adf_test",
        [](const std::vector<double>& x, double significance) { return to_json(adf_test(x, significance)).dump(); },
        py::arg("series"), py::arg("significance") = 0.05);
    m.def(
        "johansen_trace_test",
        [](const Eigen::MatrixXd& y, std::size_t lag, double significance) {
            return to_json(johansen_trace_test(y, lag, significance)).dump();
        },
        py::arg("levels"), py::arg("lag"), py::arg("significance") = 0.05);

    m.def(
        "select_lag_aic", [](const Eigen::MatrixXd& y, std::size_t p_max) { return select_lag_aic(y, p_max); },
        py::arg("y"), py::arg("p_max"));
    m.def(
        "fit_var", [](const Eigen::MatrixXd& y, std::size_t p) { return to_json(fit_var(y, p)).dump(); },
        py::arg("y"), py::arg("p"));
    m.def(
        "forecast_var",
        [](const Eigen::MatrixXd& y, std::size_t p, std::size_t horizon) {
            const auto model = fit_var(y, p);
            return forecast_var(model, y.bottomRows(static_cast<Eigen::Index>(p)), horizon).values;
        },
        py::arg("y"), py::arg("p"), py::arg("horizon"));
    m.def(
        "forecast_vec",
        [](const Eigen::MatrixXd& y, std::size_t p, std::size_t r, std::size_t horizon) {
            const auto model = fit_vec(y, p, r);
            return forecast_vec(model, y.bottomRows(static_cast<Eigen::Index>(p)), horizon).values;
        },
        py::arg("y"), py::arg("p"), py::arg("r"), py::arg("horizon"));

    m.def(
        "backtest",
        [](const std::vector<BarTuple>& bars, std::size_t q, std::size_t m_, double alpha_adf, double alpha_johansen,
           std::optional<std::size_t> p_max, std::uint64_t seed, std::size_t workers) {
            const auto raw = raw_from(bars);
            const auto cfg = make_config(alpha_adf, alpha_johansen, p_max, seed, workers);
            std::string doc;
            {
                py::gil_scoped_release release;
                doc = backtest_to_json(rolling_backtest(std::span<const RawBar>(raw), {q, m_, 1}, cfg), "python")
                          .dump();
            }
            return doc;
        },
        py::arg("bars"), py::arg("q"), py::arg("m") = 1, py::arg("alpha_adf") = 0.05,
        py::arg("alpha_johansen") = 0.05, py::arg("p_max") = py::none(), py::arg("seed") = 0,
        py::arg("workers") = 1);

    m.def(
        "forecast",
        [](const std::vector<BarTuple>& bars, std::size_t q, std::size_t m_, double alpha_adf, double alpha_johansen,
           std::optional<std::size_t> p_max, std::uint64_t seed) {
            const auto raw = raw_from(bars);
            const auto tail = forecast_tail(std::span<const RawBar>(raw), q, m_,
                                            make_config(alpha_adf, alpha_johansen, p_max, seed, 1));
            Json doc = to_json(tail.forecast);
            doc["sanitization"] = to_json(tail.sanitize_summary);
            return doc.dump();
        },
        py::arg("bars"), py::arg("q"), py::arg("m") = 1, py::arg("alpha_adf") = 0.05,
        py::arg("alpha_johansen") = 0.05, py::arg("p_max") = py::none(), py::arg("seed") = 0);

    m.def(
        "evaluate",
        [](const std::vector<BarTuple>& actual, const std::vector<BarTuple>& forecast) {
            std::vector<OhlcBar> a, f;
            for (const auto& [o, h, l, c] : actual) a.push_back({0, o, h, l, c});
            for (const auto& [o, h, l, c] : forecast) f.push_back({0, o, h, l, c});
            return to_json(evaluate(a, f)).dump();
        },
        py::arg("actual"), py::arg("forecast"));
}
