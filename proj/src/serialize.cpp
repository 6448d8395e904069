#include "candlecast/serialize.hpp"

#include <sstream>

#include "candlecast/csv_io.hpp"
#include "candlecast/errors.hpp"

namespace candlecast {

namespace {

Json vector_to_json(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vector_from_json(const Json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Json matrices_to_json(const std::vector<Eigen::MatrixXd>& ms) {
    Json out = Json::array();
    for (const auto& m : ms) {
        out.push_back(matrix_to_json(m));
    }
    return out;
}

Json price_array(const std::array<double, 4>& values) {
    Json out;
    for (Price p : kAllPrices) {
        out[to_string(p)] = values[static_cast<std::size_t>(p)];
    }
    return out;
}

}  // namespace

Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
    if (!j.is_array()) {
        throw DataError("matrix must be an array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw DataError("ragged matrix rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
    }
    return m;
}

Json to_json(const OhlcBar& bar) {
    return {{"t", bar.t}, {"open", bar.open}, {"high", bar.high}, {"low", bar.low}, {"close", bar.close}};
}

Json to_json(const AdfResult& r) {
    return {{"statistic", r.statistic},           {"p_value", r.p_value},
            {"critical_value", r.critical_value}, {"lag_used", r.lag_used},
            {"nobs", r.nobs},                     {"reject_unit_root", r.reject_unit_root},
            {"significance", r.significance},     {"degenerate", r.degenerate}};
}

Json to_json(const JohansenResult& r) {
    return {{"eigenvalues", r.eigenvalues},   {"trace_statistics", r.trace_statistics},
            {"critical_values", r.critical_values}, {"eigenvectors", matrix_to_json(r.eigenvectors)},
            {"selected_rank", r.selected_rank}, {"significance", r.significance},
            {"lag", r.lag},                   {"nobs", r.nobs}};
}

Json to_json(const VarModel& m) {
    return {{"type", "VAR"},
            {"K", m.k},
            {"p", m.p},
            {"alpha", vector_to_json(m.alpha)},
            {"A", matrices_to_json(m.lag_coefficients)},
            {"residuals", matrix_to_json(m.residuals)},
            {"residual_cov", matrix_to_json(m.residual_cov)}};
}

Json to_json(const VecModel& m) {
    return {{"type", "VEC"},
            {"K", m.k},
            {"p", m.p},
            {"r", m.r},
            {"alpha", vector_to_json(m.alpha)},
            {"Gamma", matrices_to_json(m.short_run)},
            {"gamma_loading", matrix_to_json(m.loading)},
            {"beta_coint", matrix_to_json(m.cointegration)},
            {"residuals", matrix_to_json(m.residuals)},
            {"residual_cov", matrix_to_json(m.residual_cov)}};
}

VarModel var_model_from_json(const Json& j) {
    VarModel m;
    m.k = j.at("K").get<std::size_t>();
    m.p = j.at("p").get<std::size_t>();
    m.alpha = vector_from_json(j.at("alpha"));
    for (const auto& a : j.at("A")) {
        m.lag_coefficients.push_back(matrix_from_json(a));
    }
    m.residuals = matrix_from_json(j.at("residuals"));
    m.residual_cov = matrix_from_json(j.at("residual_cov"));
    if (m.lag_coefficients.size() != m.p || static_cast<std::size_t>(m.alpha.size()) != m.k) {
        throw DataError("VAR document dimensions are inconsistent");
    }
    return m;
}

VecModel vec_model_from_json(const Json& j) {
    VecModel m;
    m.k = j.at("K").get<std::size_t>();
    m.p = j.at("p").get<std::size_t>();
    m.r = j.at("r").get<std::size_t>();
    m.alpha = vector_from_json(j.at("alpha"));
    for (const auto& g : j.at("Gamma")) {
        m.short_run.push_back(matrix_from_json(g));
    }
    m.loading = matrix_from_json(j.at("gamma_loading"));
    m.cointegration = matrix_from_json(j.at("beta_coint"));
    m.residuals = matrix_from_json(j.at("residuals"));
    m.residual_cov = matrix_from_json(j.at("residual_cov"));
    if (m.short_run.size() + 1 != m.p || static_cast<std::size_t>(m.loading.cols()) != m.r) {
        throw DataError("VEC document dimensions are inconsistent");
    }
    return m;
}

Json to_json(const EvalReport& r) {
    return {{"k", r.k},
            {"MAPE", price_array(r.mape)},
            {"SD", price_array(r.sd)},
            {"RMSE", price_array(r.rmse)},
            {"RMSEH", r.rmseh},
            {"AR", r.ar}};
}

Json to_json(const ComparisonReport& r) {
    Json tests = Json::array();
    for (const auto& e : r.entries) {
        tests.push_back({{"metric", e.metric},
                         {"price", e.price},
                         {"proposed", e.proposed},
                         {"naive", e.naive},
                         {"mean_difference", e.test.mean_difference},
                         {"t_statistic", e.test.t_statistic},
                         {"p_value", e.test.p_value},
                         {"significant", e.test.significant},
                         {"tie", e.test.tie},
                         {"n", e.test.n}});
    }
    return {{"proposed", to_json(r.proposed)}, {"naive", to_json(r.naive)}, {"tests", tests}};
}

Json to_json(const WindowForecast& w) {
    Json forecast = Json::array();
    Json realized = Json::array();
    for (const auto& b : w.forecast_bars) {
        forecast.push_back(to_json(b));
    }
    for (const auto& b : w.realized_bars) {
        realized.push_back(to_json(b));
    }
    Json j = {{"window_index", w.window_index},
              {"origin", w.origin},
              {"model", to_string(w.model)},
              {"p", w.p},
              {"nonstationary", w.nonstationary},
              {"lag_fallback", w.lag_fallback},
              {"forecast_transformed", matrix_to_json(w.forecast_transformed)},
              {"forecast", forecast},
              {"realized", realized}};
    if (w.model == ModelKind::Vec) {
        j["r"] = w.r;
    }
    if (w.model == ModelKind::DiffVar) {
        j["still_nonstationary"] = w.still_nonstationary;
    }
    return j;
}

Json to_json(const SanitizeSummary& s) {
    return {{"removed_suspensions", s.removed_suspensions},
            {"perturbed_prices", s.perturbed_prices},
            {"limit_bars", s.limit_bars}};
}

Json backtest_to_json(const BacktestResult& result, const std::string& tag) {
    Json horizons = Json::array();
    for (const auto& h : evaluate_backtest(result)) {
        Json entry = to_json(h.comparison);
        entry["horizon"] = h.horizon;
        horizons.push_back(std::move(entry));
    }
    Json windows = Json::array();
    for (const auto& w : result.windows) {
        windows.push_back(to_json(w));
    }
    Json failed = Json::array();
    for (const auto& f : result.failed) {
        failed.push_back({{"window_index", f.window_index}, {"reason", f.reason}});
    }
    return {{"tag", tag},
            {"spec", {{"q", result.spec.q}, {"m", result.spec.m}, {"stride", result.spec.stride}}},
            {"series_length", result.series.size()},
            {"origins", result.origin_count()},
            {"model_counts",
             {{"VAR", result.model_counts.var},
              {"VEC", result.model_counts.vec},
              {"DIFF_VAR", result.model_counts.diff_var}}},
            {"failed_count", result.failed.size()},
            {"failed", failed},
            {"sanitize", to_json(result.sanitize_summary)},
            {"horizons", horizons},
            {"windows", windows}};
}

std::string backtest_to_csv(const BacktestResult& result) {
    std::ostringstream out;
    out << "window_index,model,p,r,horizon,o_hat,h_hat,l_hat,c_hat,o,h,l,c\n";
    for (const auto& w : result.windows) {
        for (std::size_t h = 0; h < w.forecast_bars.size(); ++h) {
            const auto& f = w.forecast_bars[h];
            const auto& a = w.realized_bars[h];
            out << w.window_index << ',' << to_string(w.model) << ',' << w.p << ','
                << (w.model == ModelKind::Vec ? std::to_string(w.r) : std::string{}) << ',' << h + 1 << ','
                << format_double(f.open) << ',' << format_double(f.high) << ',' << format_double(f.low) << ','
                << format_double(f.close) << ',' << format_double(a.open) << ',' << format_double(a.high) << ','
                << format_double(a.low) << ',' << format_double(a.close) << '\n';
        }
    }
    return out.str();
}

Json to_json(const ScenarioSpec& spec) {
    Json coefficients = Json::array();
    for (const auto& a : spec.coefficients) {
        coefficients.push_back(matrix_to_json(a));
    }
    return {{"name", spec.name},
            {"p", spec.p},
            {"T_raw", spec.t_raw},
            {"burn_in", spec.burn_in},
            {"Y1", vector_to_json(spec.initial)},
            {"A", coefficients},
            {"noise_cov", matrix_to_json(spec.noise_cov)},
            {"seed", spec.seed}};
}

ScenarioSpec scenario_from_json(const Json& j) {
    try {
        ScenarioSpec spec;
        spec.name = j.value("name", std::string{});
        spec.p = j.at("p").get<std::size_t>();
        spec.t_raw = j.at("T_raw").get<std::size_t>();
        spec.burn_in = j.value("burn_in", std::size_t{20});
        const Eigen::VectorXd y1 = vector_from_json(j.at("Y1"));
        if (y1.size() != 4) {
            throw DataError("Y1 must have 4 entries");
        }
        spec.initial = y1;
        for (const auto& a : j.at("A")) {
            const Eigen::MatrixXd m = matrix_from_json(a);
            if (m.rows() != 4 || m.cols() != 4) {
                throw DataError("coefficient matrices must be 4 x 4");
            }
            spec.coefficients.emplace_back(m);
        }
        const Eigen::MatrixXd cov = matrix_from_json(j.at("noise_cov"));
        if (cov.rows() != 4 || cov.cols() != 4) {
            throw DataError("noise_cov must be 4 x 4");
        }
        spec.noise_cov = cov;
        spec.seed = j.value("seed", std::uint64_t{0});
        return spec;
    } catch (const Json::exception& e) {
        throw DataError(std::string("invalid scenario document: ") + e.what());
    }
}

}  // namespace candlecast
