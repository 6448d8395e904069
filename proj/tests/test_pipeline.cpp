#include <doctest.h>

#include "candlecast/errors.hpp"
#include "candlecast/pipeline.hpp"
#include "candlecast/simgen.hpp"
#include "test_support.hpp"

using namespace candlecast;

namespace {

Eigen::MatrixXd window_of(Rng& rng, std::size_t q, int kind) {
    Eigen::MatrixXd w(static_cast<Eigen::Index>(q), 4);
    switch (kind) {
        case 0:  // all stationary
            for (int j = 0; j < 4; ++j) w.col(j) = testutil::ar1(rng, q, 0.5);
            break;
        case 1: {  // one stochastic trend shared by y1 and y2
            w.col(0) = testutil::random_walk(rng, q);
            w.col(1) = w.col(0) + 0.5 * testutil::ar1(rng, q, 0.3);
            w.col(2) = testutil::ar1(rng, q, 0.3);
            w.col(3) = testutil::ar1(rng, q, 0.3);
            break;
        }
        default:  // independent walks
            for (int j = 0; j < 4; ++j) w.col(j) = testutil::random_walk(rng, q);
    }
    return w;
}

OhlcSeries scenario_series(int id, std::uint64_t seed) { return generate(scenario_preset(id, seed)).series; }

}  // namespace

TEST_CASE("run_window picks the branch implied by the data") {
    Rng rng(2024);
    const PipelineConfig cfg;
    int var = 0, vec3 = 0, diff = 0;
    const int reps = 50;
    for (int rep = 0; rep < reps; ++rep) {
        const auto a = run_window(window_of(rng, 150, 0), 1, cfg);
        var += a.model == ModelKind::Var;
        const auto b = run_window(window_of(rng, 150, 1), 1, cfg);
        vec3 += b.model == ModelKind::Vec && b.r == 3;
        const auto c = run_window(window_of(rng, 150, 2), 2, cfg);
        diff += c.model == ModelKind::DiffVar;
        for (const auto* wf : {&a, &b, &c}) {
            for (const auto& bar : wf->forecast_bars) CHECK(satisfies_constraints(bar));
        }
        CHECK(c.forecast_bars.size() == 2);
        CHECK(c.forecast_transformed.rows() == 2);
    }
    CHECK(var >= 40);
    CHECK(diff >= 40);
    CHECK(vec3 >= 40);
}

TEST_CASE("shared-trend window is fitted as VEC with rank 3") {
    Rng rng(7);
    const auto wf = run_window(window_of(rng, 150, 1), 1, {});
    CHECK(wf.model == ModelKind::Vec);
    CHECK(wf.r == 3);
    CHECK(wf.nonstationary[0]);
}

TEST_CASE("DIFF_VAR integrates the differenced components") {
    Rng rng(8);
    int checked = 0;
    for (int rep = 0; rep < 10; ++rep) {
        const auto w = window_of(rng, 120, 2);
        const auto wf = run_window(w, 3, {});
        if (wf.model != ModelKind::DiffVar) continue;
        ++checked;
        for (int j = 0; j < 4; ++j) {
            // Differenced walks are forecast as small steps from the last level.
            const double last = w(119, j);
            const double scale = wf.nonstationary[static_cast<std::size_t>(j)] ? 4.0 : 1e9;
            CHECK(std::abs(wf.forecast_transformed(0, j) - last) < scale);
        }
        CHECK(wf.still_nonstationary <= 4);
    }
    CHECK(checked >= 8);
}

TEST_CASE("window counts") {
    const auto series = scenario_series(1, 4);
    PipelineConfig cfg;
    cfg.workers = 4;
    const auto full = rolling_backtest(series, {50, 1, 1}, cfg);
    CHECK(full.origin_count() == 150);
    CHECK(full.windows.size() + full.failed.size() == 150);
    CHECK(full.model_counts.var + full.model_counts.vec + full.model_counts.diff_var == full.windows.size());

    OhlcSeries tiny;
    tiny.bars.assign(series.bars.begin(), series.bars.begin() + 33);
    const auto one = rolling_backtest(tiny, {30, 3, 1}, cfg);
    CHECK(one.origin_count() == 1);
    if (!one.windows.empty()) {
        CHECK(one.windows[0].origin == 30);
        CHECK(one.windows[0].realized_bars.size() == 3);
        CHECK(one.windows[0].forecast_bars[2].t == 33);
    }
}

TEST_CASE("window spec validation") {
    CHECK_THROWS_AS(WindowSpec({29, 1, 1}).validate(200), DataError);
    CHECK_THROWS_AS(WindowSpec({30, 0, 1}).validate(200), DataError);
    CHECK_THROWS_AS(WindowSpec({30, 11, 1}).validate(200), DataError);
    CHECK_THROWS_AS(WindowSpec({30, 1, 2}).validate(200), DataError);
    CHECK_THROWS_AS(WindowSpec({199, 2, 1}).validate(200), DataError);
    CHECK_NOTHROW(WindowSpec({198, 2, 1}).validate(200));
    const auto series = scenario_series(1, 1);
    CHECK_THROWS_AS((void)rolling_backtest(series, {199, 2, 1}, {}), DataError);
}

TEST_CASE("backtest output is independent of the worker count") {
    const auto series = scenario_series(2, 13);
    PipelineConfig serial;
    PipelineConfig parallel;
    parallel.workers = 6;
    const auto a = rolling_backtest(series, {40, 2, 1}, serial);
    const auto b = rolling_backtest(series, {40, 2, 1}, parallel);
    REQUIRE(a.windows.size() == b.windows.size());
    CHECK(a.failed.size() == b.failed.size());
    for (std::size_t i = 0; i < a.windows.size(); ++i) {
        CHECK(a.windows[i].window_index == b.windows[i].window_index);
        CHECK(a.windows[i].model == b.windows[i].model);
        CHECK(a.windows[i].forecast_transformed == b.windows[i].forecast_transformed);
        CHECK(a.windows[i].forecast_bars == b.windows[i].forecast_bars);
        if (i > 0) CHECK(a.windows[i].window_index > a.windows[i - 1].window_index);
    }
}

TEST_CASE("forecasts use no future data") {
    auto series = scenario_series(1, 21);
    PipelineConfig cfg;
    cfg.workers = 4;
    const auto base = rolling_backtest(series, {40, 1, 1}, cfg);
    const std::size_t cut = 120;  // bars after index cut are altered
    for (std::size_t i = cut; i < series.size(); ++i) {
        auto& b = series.bars[i];
        b.high *= 1.3;
        b.open = 0.5 * (b.open + b.high);
    }
    const auto changed = rolling_backtest(series, {40, 1, 1}, cfg);
    std::size_t compared = 0;
    for (std::size_t i = 0; i < base.windows.size() && i < changed.windows.size(); ++i) {
        const auto& a = base.windows[i];
        if (static_cast<std::size_t>(a.origin) > cut) break;
        CHECK(a.forecast_bars == changed.windows[i].forecast_bars);
        ++compared;
    }
    CHECK(compared > 50);
}

TEST_CASE("every forecast bar is valid across scenarios") {
    for (int id : {1, 2, 3}) {
        PipelineConfig cfg;
        cfg.workers = 4;
        const auto result = rolling_backtest(scenario_series(id, 100 + static_cast<std::uint64_t>(id)), {30, 3, 1}, cfg);
        CHECK(result.failed.empty());
        for (const auto& wf : result.windows) {
            for (const auto& bar : wf.forecast_bars) REQUIRE(satisfies_constraints(bar));
        }
    }
}

TEST_CASE("forecast_tail sanitizes a limit bar and reports it") {
    auto raw = to_raw(scenario_series(1, 3));
    const double price = raw.back().close;
    raw.push_back({"limit", price * 1.1, price * 1.1, price * 1.1, price * 1.1});
    const auto tail = forecast_tail(std::span<const RawBar>(raw), 60, 3, {});
    CHECK(tail.sanitize_summary.limit_bars == 1);
    CHECK(tail.sanitize_summary.changed_anything());
    CHECK(tail.series_length == 201);
    REQUIRE(tail.forecast.forecast_bars.size() == 3);
    CHECK(tail.forecast.forecast_bars[0].t == 202);
    for (const auto& bar : tail.forecast.forecast_bars) CHECK(satisfies_constraints(bar));
    CHECK_THROWS_AS((void)forecast_tail(std::span<const RawBar>(raw), 300, 1, {}), DataError);
}

TEST_CASE("run_window input checks") {
    CHECK_THROWS_AS((void)run_window(Eigen::MatrixXd::Zero(50, 3), 1, {}), DataError);
    CHECK_THROWS_AS((void)run_window(Eigen::MatrixXd::Zero(50, 4), 1, {}), WindowFailure);
}
