#include <doctest.h>

#include <cmath>

#include "candlecast/errors.hpp"
#include "candlecast/linalg.hpp"
#include "candlecast/stats_tests.hpp"
#include "candlecast/var_vec.hpp"
#include "test_support.hpp"

using namespace candlecast;

namespace {

Eigen::MatrixXd simulate_var(Rng& rng, const Eigen::VectorXd& alpha, const std::vector<Eigen::MatrixXd>& a,
                             std::size_t n, double noise_sd) {
    const auto k = alpha.size();
    const auto p = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n) + 100, k);
    for (Eigen::Index t = p; t < y.rows(); ++t) {
        Eigen::VectorXd next = alpha;
        for (Eigen::Index j = 0; j < p; ++j) next += a[static_cast<std::size_t>(j)] * y.row(t - j - 1).transpose();
        for (Eigen::Index i = 0; i < k; ++i) next(i) += noise_sd * rng.normal();
        y.row(t) = next.transpose();
    }
    return y.bottomRows(static_cast<Eigen::Index>(n));
}

Eigen::MatrixXd cointegrated_pair(Rng& rng, std::size_t n) {
    Eigen::MatrixXd y(static_cast<Eigen::Index>(n), 2);
    y.col(0) = testutil::random_walk(rng, n);
    y.col(1) = y.col(0) + testutil::ar1(rng, n, 0.5);
    return y;
}

}  // namespace

TEST_CASE("fit_var on an exact geometric AR(1)") {
    Eigen::MatrixXd y(4, 1);
    y << 1, 0.5, 0.25, 0.125;
    const auto model = fit_var(y, 1);
    CHECK(std::abs(model.alpha(0)) < 1e-12);
    CHECK(model.lag_coefficients[0](0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(model.residuals.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fit_var rejects degenerate input") {
    Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(50, 2, 3.0);
    CHECK_THROWS_AS((void)fit_var(constant, 1), RankDeficientError);
    Eigen::MatrixXd shortm = Eigen::MatrixXd::Random(5, 2);
    CHECK_THROWS_AS((void)fit_var(shortm, 2), DataError);
    CHECK_THROWS_AS((void)fit_var(shortm, 0), DataError);
}

TEST_CASE("fit_var matches statsmodels") {
    const auto z = testutil::load_matrix("var2.csv");
    const auto model = fit_var(z, 2);
    const std::vector<double> params{0.35500239838960174, 0.2067487578541528,   0.42951889871447224,
                                     0.19295218094284294, 0.07036282546732778,  0.2296680667627215,
                                     -0.1913969959792833, 0.1888844451591428,   -0.014925515756440697,
                                     0.20037315314189497};
    // Row-major (1 + K p) x K: intercepts, then lag blocks with one row per regressor.
    CHECK(model.alpha(0) == doctest::Approx(params[0]).epsilon(1e-10));
    CHECK(model.alpha(1) == doctest::Approx(params[1]).epsilon(1e-10));
    for (int lag = 0; lag < 2; ++lag) {
        for (int j = 0; j < 2; ++j) {
            for (int i = 0; i < 2; ++i) {
                const double expected = params[static_cast<std::size_t>(2 + 4 * lag + 2 * j + i)];
                CHECK(model.lag_coefficients[static_cast<std::size_t>(lag)](i, j) ==
                      doctest::Approx(expected).epsilon(1e-10));
            }
        }
    }
    const std::vector<double> sigma{0.26277684195903506, 0.020289066078562887, 0.020289066078562887,
                                    0.221309384074784};
    for (int i = 0; i < 4; ++i) CHECK(model.residual_cov(i / 2, i % 2) == doctest::Approx(sigma[static_cast<std::size_t>(i)]).epsilon(1e-10));

    const auto fc = forecast_var(model, z.bottomRows(2), 3);
    const std::vector<double> expected{0.6262529597164815, 1.031915977202756,  0.5087622517344149,
                                       0.9374226367861528, 0.5042202924534367, 0.845269289592923};
    for (int i = 0; i < 6; ++i) CHECK(fc.values(i / 2, i % 2) == doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-10));
}

TEST_CASE("OLS residuals are orthogonal to the regressors") {
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::MatrixXd y(120, 3);
        for (int j = 0; j < 3; ++j) y.col(j) = testutil::ar1(rng, 120, 0.6);
        for (std::size_t p = 1; p <= 3; ++p) {
            const auto model = fit_var(y, p);
            Eigen::MatrixXd z(y.rows() - static_cast<Eigen::Index>(p), 1 + 3 * static_cast<Eigen::Index>(p));
            for (Eigen::Index r = 0; r < z.rows(); ++r) {
                z(r, 0) = 1.0;
                for (Eigen::Index j = 1; j <= static_cast<Eigen::Index>(p); ++j)
                    z.block(r, 1 + 3 * (j - 1), 1, 3) = y.row(r + static_cast<Eigen::Index>(p) - j);
            }
            CHECK((z.transpose() * model.residuals).cwiseAbs().maxCoeff() < 1e-8);
            CHECK((model.residual_cov - model.residual_cov.transpose()).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(aic_from_residuals(model.residuals, p) ==
                  std::log(model.residuals.squaredNorm() / static_cast<double>(model.residuals.rows())) +
                      aic_penalty(p, 3, static_cast<std::size_t>(model.residuals.rows())));
        }
    }
}

TEST_CASE("forecast_var examples") {
    VarModel rw;
    rw.k = 2;
    rw.p = 1;
    rw.alpha = Eigen::VectorXd::Zero(2);
    rw.lag_coefficients = {Eigen::MatrixXd::Identity(2, 2)};
    Eigen::MatrixXd hist(1, 2);
    hist << 3.5, -1.0;
    const auto fc = forecast_var(rw, hist, 4);
    for (int h = 0; h < 4; ++h) CHECK(fc.values.row(h) == hist.row(0));

    VarModel flat = rw;
    flat.alpha = Eigen::Vector2d(0.7, -0.2);
    flat.lag_coefficients = {Eigen::MatrixXd::Zero(2, 2)};
    const auto fc2 = forecast_var(flat, hist, 3);
    for (int h = 0; h < 3; ++h) CHECK(fc2.values.row(h).transpose() == flat.alpha);

    VarModel geo;
    geo.k = 1;
    geo.p = 1;
    geo.alpha = Eigen::VectorXd::Zero(1);
    geo.lag_coefficients = {Eigen::MatrixXd::Constant(1, 1, 0.5)};
    const auto fc3 = forecast_var(geo, Eigen::MatrixXd::Constant(1, 1, 1.0), 3);
    CHECK(fc3.values(0, 0) == 0.5);
    CHECK(fc3.values(1, 0) == 0.25);
    CHECK(fc3.values(2, 0) == 0.125);

    CHECK_THROWS_AS((void)forecast_var(geo, Eigen::MatrixXd::Constant(2, 1, 1.0), 3), DataError);
    CHECK_THROWS_AS((void)forecast_var(geo, Eigen::MatrixXd::Constant(1, 1, 1.0), 0), DataError);
}

TEST_CASE("AIC penalty and lag bounds") {
    CHECK(aic_penalty(1, 4, 200) == doctest::Approx(0.16));
    CHECK(default_p_max(30, 4) == 4);
    CHECK(default_p_max(200, 4) == 8);
    CHECK(default_p_max(50, 4) == 8);
    CHECK(default_p_max(12, 4) == 1);
    for (std::size_t t = 12; t < 100; ++t) {
        const auto p = default_p_max(t, 4);
        CHECK((p == 1 || t > 4 * p + p + 5));
    }
}

TEST_CASE("noiseless VAR is recovered and selects p = 1") {
    Eigen::Matrix2d a;
    const double c = std::cos(0.3) * 0.97, s = std::sin(0.3) * 0.97;
    a << c, -s, s, c;
    Eigen::MatrixXd y(80, 2);
    y.row(0) << 2.0, -1.0;
    const Eigen::Vector2d alpha(0.1, 0.05);
    for (Eigen::Index t = 1; t < y.rows(); ++t) y.row(t) = (alpha + a * y.row(t - 1).transpose()).transpose();
    const auto model = fit_var(y, 1);
    CHECK((model.lag_coefficients[0] - Eigen::MatrixXd(a)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((model.alpha - alpha).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(select_lag_aic(y, 4) == 1);
    const auto table = aic_table(y, 4);
    for (std::size_t p = 2; p <= 4; ++p) CHECK(std::isinf(table[p - 1]));
}

TEST_CASE("AIC selects the true lag of a VAR(2)") {
    Rng rng(77);
    std::vector<Eigen::MatrixXd> a(2);
    a[0] = (Eigen::Matrix2d() << 0.4, 0.1, 0.0, 0.3).finished();
    a[1] = (Eigen::Matrix2d() << -0.45, 0.0, 0.1, 0.4).finished();
    int hits = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto y = simulate_var(rng, Eigen::Vector2d(0.2, -0.1), a, 500, 1.0);
        hits += select_lag_aic(y, 6) == 2;
    }
    CHECK(hits >= 160);
}

TEST_CASE("difference and integrate") {
    Eigen::MatrixXd y(3, 1);
    y << 1, 3, 6;
    const auto d = difference(y);
    REQUIRE(d.rows() == 2);
    CHECK(d(0, 0) == 2);
    CHECK(d(1, 0) == 3);
    Eigen::MatrixXd steps(2, 1);
    steps << 1, 1;
    const auto lv = integrate(Eigen::RowVectorXd::Constant(1, 6.0), steps);
    CHECK(lv(0, 0) == 7);
    CHECK(lv(1, 0) == 8);

    Rng rng(9);
    Eigen::MatrixXd tail(10, 3);
    for (int j = 0; j < 3; ++j) tail.col(j) = testutil::random_walk(rng, 10);
    const auto back = integrate(tail.row(0), difference(tail));
    CHECK((back - tail.bottomRows(9)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS((void)difference(Eigen::MatrixXd::Zero(1, 2)), DataError);
}

TEST_CASE("fit_vec matches statsmodels VECM") {
    const auto y = testutil::load_matrix("coint3.csv");
    const auto model = fit_vec(y, 2, 1);
    const std::vector<double> loading{0.012254726380906935, 0.5014780856015489, -0.0752400046430163};
    const std::vector<double> beta{1.0, -2.1254831381687334, 0.010493926318326836};
    const std::vector<double> constant{-0.02896068391788473, 0.24638486856539557, -0.0397441019194259};
    // statsmodels reports the short-run matrix of the Y_{t-1} form; ours
    // multiplies Y_{t-p}, so Gamma_1 = Gamma*_1 + gamma beta'.
    const std::vector<double> gamma_star{-0.23476739714291112, -0.015510895168237306, 0.07670509027844498,
                                         -0.12799156073197124, -0.027703527306935934, -0.0346953515833258,
                                         0.07324544623104576,  -0.18040904284613846, -0.03203087494151879};
    for (int i = 0; i < 3; ++i) {
        const auto u = static_cast<std::size_t>(i);
        CHECK(model.loading(i, 0) == doctest::Approx(loading[u]).epsilon(1e-7));
        CHECK(model.cointegration(i, 0) == doctest::Approx(beta[u]).epsilon(1e-6));
        CHECK(model.alpha(i) == doctest::Approx(constant[u]).epsilon(1e-7));
    }
    const Eigen::MatrixXd pi = model.long_run();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(model.short_run[0](i, j) - pi(i, j) ==
                  doctest::Approx(gamma_star[static_cast<std::size_t>(3 * i + j)]).epsilon(1e-7));

    const auto fc = forecast_vec(model, y.bottomRows(2), 3);
    const std::vector<double> expected{-3.463625678837863, -1.447054071809893, 0.18530449973212476,
                                       -3.5891451548652,   -1.421713215685397, 0.3367385562028098,
                                       -3.5843242728839466, -1.4479443124003144, 0.3207975484517036};
    for (int i = 0; i < 9; ++i) CHECK(fc.values(i / 3, i % 3) == doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-7));
}

TEST_CASE("fit_vec contract") {
    Rng rng(12);
    const auto y = cointegrated_pair(rng, 300);
    CHECK_THROWS_AS((void)fit_vec(y, 1, 0), DataError);
    CHECK_THROWS_AS((void)fit_vec(y, 1, 2), DataError);
    const auto j = johansen_trace_test(y, 2);
    CHECK_THROWS_AS((void)fit_vec(y, 1, 1, j), DataError);
    const auto model = fit_vec(y, 1, 1);
    CHECK(model.short_run.empty());
    CHECK(model.residuals.rows() == 299);
}

TEST_CASE("cointegrating vector of the constructed pair") {
    Rng rng(41);
    int close = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const auto y = cointegrated_pair(rng, 500);
        const auto model = fit_vec(y, 2, 1);
        close += std::abs(model.cointegration(0, 0) - 1.0) < 1e-12 && std::abs(model.cointegration(1, 0) + 1.0) < 0.1;
    }
    CHECK(close >= 48);
}

TEST_CASE("VEC forecasts keep the error-correction term bounded") {
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const auto y = cointegrated_pair(rng, 400);
        const auto model = fit_vec(y, 2, 1);
        const Eigen::VectorXd beta = model.cointegration.col(0);
        const double in_sample = (y * beta).cwiseAbs().maxCoeff();
        const auto fc = forecast_vec(model, y.bottomRows(2), 50);
        CHECK((fc.values * beta).cwiseAbs().maxCoeff() <= in_sample * 1.5);
    }
}

TEST_CASE("forecast_vec agrees with a companion-matrix forecast") {
    Rng rng(19);
    Eigen::MatrixXd y(400, 3);
    const auto trend = testutil::random_walk(rng, 400);
    y.col(0) = trend + 0.3 * testutil::ar1(rng, 400, 0.4);
    y.col(1) = -trend + 0.3 * testutil::ar1(rng, 400, 0.4);
    y.col(2) = 0.5 * trend + 0.3 * testutil::ar1(rng, 400, 0.4);
    const std::size_t p = 3;
    const auto model = fit_vec(y, p, 2);

    // Companion oracle built directly from the error-correction form.
    const Eigen::Index k = 3;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k * 3 + 1, k * 3 + 1);
    const Eigen::MatrixXd pi = model.long_run();
    std::vector<Eigen::MatrixXd> a(p, Eigen::MatrixXd::Zero(k, k));
    a[0] = Eigen::MatrixXd::Identity(k, k) + model.short_run[0];
    a[1] = model.short_run[1] - model.short_run[0];
    a[2] = pi - model.short_run[1];
    for (std::size_t j = 0; j < p; ++j) companion.block(0, k * static_cast<Eigen::Index>(j), k, k) = a[j];
    companion.block(0, k * 3, k, 1) = model.alpha;
    companion.block(k, 0, 2 * k, 2 * k).setIdentity();
    companion(k * 3, k * 3) = 1.0;
    Eigen::VectorXd state(k * 3 + 1);
    state << y.row(399).transpose(), y.row(398).transpose(), y.row(397).transpose(), 1.0;

    const auto fc = forecast_vec(model, y.bottomRows(3), 10);
    for (Eigen::Index h = 0; h < 10; ++h) {
        state = companion * state;
        CHECK((fc.values.row(h).transpose() - state.head(k)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("random-walk VEC forecast holds the last level") {
    VecModel model;
    model.k = 2;
    model.p = 2;
    model.r = 1;
    model.alpha = Eigen::VectorXd::Zero(2);
    model.short_run = {Eigen::MatrixXd::Zero(2, 2)};
    model.loading = Eigen::MatrixXd::Zero(2, 1);
    model.cointegration = Eigen::MatrixXd::Ones(2, 1);
    Eigen::MatrixXd hist(2, 2);
    hist << 1.0, 2.0, 1.5, 2.5;
    const auto fc = forecast_vec(model, hist, 5);
    for (int h = 0; h < 5; ++h) CHECK(fc.values.row(h) == hist.row(1));
}

TEST_CASE("estimation is deterministic") {
    const auto y = testutil::load_matrix("coint3.csv");
    const auto a = fit_vec(y, 2, 1);
    const auto b = fit_vec(y, 2, 1);
    CHECK(a.loading == b.loading);
    CHECK(a.short_run[0] == b.short_run[0]);
    const auto va = fit_var(y, 3);
    const auto vb = fit_var(y, 3);
    CHECK(va.lag_coefficients[2] == vb.lag_coefficients[2]);
}

TEST_CASE("ols helpers") {
    Eigen::MatrixXd x(5, 2);
    x << 1, 0, 1, 1, 1, 2, 1, 3, 1, 4;
    Eigen::MatrixXd y(5, 1);
    y << 1, 3, 5, 7, 9;
    const auto sol = ols(x, y);
    CHECK(sol.coef(0, 0) == doctest::Approx(1.0));
    CHECK(sol.coef(1, 0) == doctest::Approx(2.0));
    const Eigen::MatrixXd inv = ols_inverse_gram(x);
    CHECK(((x.transpose() * x) * inv - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(partial_out(Eigen::MatrixXd(5, 0), y) == y);
    CHECK(partial_out(x, y).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::MatrixXd dup(5, 2);
    dup << 1, 2, 1, 2, 1, 2, 1, 2, 1, 2;
    CHECK_THROWS_AS((void)ols(dup, y), RankDeficientError);
    CHECK_THROWS_AS((void)ols(Eigen::MatrixXd::Ones(1, 2), Eigen::MatrixXd::Ones(1, 1)), RankDeficientError);
}
