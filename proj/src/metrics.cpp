#include "candlecast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "candlecast/errors.hpp"
#include "candlecast/pipeline.hpp"

namespace candlecast {

namespace {

void require_pairs(std::size_t a, std::size_t b, std::size_t minimum, const char* what) {
    if (a != b) {
        throw DataError(std::string(what) + ": actual and forecast lengths differ");
    }
    if (a < minimum) {
        throw DataError(std::string(what) + ": needs at least " + std::to_string(minimum) + " values");
    }
}

std::vector<double> column(std::span<const OhlcBar> bars, Price price) {
    std::vector<double> out;
    out.reserve(bars.size());
    for (const auto& b : bars) {
        out.push_back(price_of(b, price));
    }
    return out;
}

}  // namespace

const char* to_string(Price price) {
    switch (price) {
        case Price::Open:
            return "o";
        case Price::High:
            return "h";
        case Price::Low:
            return "l";
        case Price::Close:
            return "c";
    }
    return "?";
}

double price_of(const OhlcBar& bar, Price price) {
    switch (price) {
        case Price::Open:
            return bar.open;
        case Price::High:
            return bar.high;
        case Price::Low:
            return bar.low;
        case Price::Close:
            return bar.close;
    }
    return 0.0;
}

double mape(std::span<const double> actual, std::span<const double> forecast) {
    require_pairs(actual.size(), forecast.size(), 1, "MAPE");
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) {
            throw DataError("MAPE undefined: zero actual value at position " + std::to_string(i));
        }
        sum += std::abs((actual[i] - forecast[i]) / actual[i]);
    }
    return 100.0 * sum / static_cast<double>(actual.size());
}

double sd_of_forecasts(std::span<const double> forecast) {
    if (forecast.size() < 2) {
        throw DataError("SD needs at least 2 forecasts");
    }
    double mean = 0.0;
    for (double v : forecast) {
        mean += v;
    }
    mean /= static_cast<double>(forecast.size());
    double ss = 0.0;
    for (double v : forecast) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(forecast.size() - 1));
}

double rmse(std::span<const double> actual, std::span<const double> forecast) {
    require_pairs(actual.size(), forecast.size(), 1, "RMSE");
    double ss = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - forecast[i];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(actual.size()));
}

double hausdorff_distance(const OhlcBar& actual, const OhlcBar& forecast) {
    const double mid = 0.5 * (actual.high + actual.low);
    const double mid_hat = 0.5 * (forecast.high + forecast.low);
    const double half = 0.5 * (actual.high - actual.low);
    const double half_hat = 0.5 * (forecast.high - forecast.low);
    return std::abs(mid - mid_hat) + std::abs(half - half_hat);
}

double interval_overlap_ratio(const OhlcBar& actual, const OhlcBar& forecast) {
    const double overlap = std::min(actual.high, forecast.high) - std::max(actual.low, forecast.low);
    if (overlap <= 0.0) {
        return 0.0;
    }
    const double union_length = (actual.high - actual.low) + (forecast.high - forecast.low) - overlap;
    if (union_length <= 0.0) {
        return 0.0;
    }
    return overlap / union_length;
}

double rmseh(std::span<const OhlcBar> actual, std::span<const OhlcBar> forecast) {
    require_pairs(actual.size(), forecast.size(), 1, "RMSEH");
    double ss = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = hausdorff_distance(actual[i], forecast[i]);
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(actual.size()));
}

double accuracy_ratio(std::span<const OhlcBar> actual, std::span<const OhlcBar> forecast) {
    require_pairs(actual.size(), forecast.size(), 1, "AR");
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        sum += interval_overlap_ratio(actual[i], forecast[i]);
    }
    return sum / static_cast<double>(actual.size());
}

EvalReport evaluate(std::span<const OhlcBar> actual, std::span<const OhlcBar> forecast) {
    require_pairs(actual.size(), forecast.size(), 1, "evaluate");
    EvalReport report;
    report.k = actual.size();
    for (Price price : kAllPrices) {
        const auto i = static_cast<std::size_t>(price);
        const auto a = column(actual, price);
        const auto f = column(forecast, price);
        report.mape[i] = mape(a, f);
        report.rmse[i] = rmse(a, f);
        report.sd[i] = f.size() >= 2 ? sd_of_forecasts(f) : 0.0;
    }
    report.rmseh = rmseh(actual, forecast);
    report.ar = accuracy_ratio(actual, forecast);
    return report;
}

std::vector<OhlcBar> naive_forecast(const OhlcSeries& series, std::size_t m) {
    if (series.size() <= m) {
        throw DataError("naive forecast needs more than m bars");
    }
    const OhlcBar& last = series.bars.back();
    std::vector<OhlcBar> out(m, last);
    for (std::size_t h = 0; h < m; ++h) {
        out[h].t = last.t + static_cast<std::int64_t>(h) + 1;
    }
    return out;
}

OneSidedTest compare_one_sided(std::span<const double> proposed, std::span<const double> naive, Better direction,
                               double alpha) {
    require_pairs(proposed.size(), naive.size(), 10, "one-sided t-test");
    OneSidedTest test;
    test.n = proposed.size();
    const auto n = static_cast<double>(test.n);

    double mean = 0.0;
    for (std::size_t i = 0; i < test.n; ++i) {
        mean += proposed[i] - naive[i];
    }
    mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < test.n; ++i) {
        const double d = proposed[i] - naive[i] - mean;
        ss += d * d;
    }
    test.mean_difference = mean;
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd == 0.0) {
        test.tie = true;
        test.t_statistic = 0.0;
        test.p_value = 1.0;
        return test;
    }
    test.t_statistic = mean / (sd / std::sqrt(n));
    const boost::math::students_t dist(n - 1.0);
    test.p_value = direction == Better::Lower ? boost::math::cdf(dist, test.t_statistic)
                                              : boost::math::cdf(boost::math::complement(dist, test.t_statistic));
    test.significant = test.p_value < alpha;
    return test;
}

ComparisonReport compare_to_naive(std::span<const OhlcBar> actual, std::span<const OhlcBar> proposed,
                                  std::span<const OhlcBar> naive) {
    require_pairs(actual.size(), proposed.size(), 1, "comparison");
    require_pairs(actual.size(), naive.size(), 1, "comparison");
    ComparisonReport report;
    report.proposed = evaluate(actual, proposed);
    report.naive = evaluate(actual, naive);
    if (actual.size() < 10) {
        return report;
    }

    const std::size_t k = actual.size();
    for (Price price : kAllPrices) {
        std::vector<double> ape_p(k), ape_n(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double a = price_of(actual[i], price);
            ape_p[i] = std::abs((a - price_of(proposed[i], price)) / a);
            ape_n[i] = std::abs((a - price_of(naive[i], price)) / a);
        }
        const auto idx = static_cast<std::size_t>(price);
        report.entries.push_back({"MAPE", to_string(price), report.proposed.mape[idx], report.naive.mape[idx],
                                  compare_one_sided(ape_p, ape_n, Better::Lower)});
    }
    for (Price price : kAllPrices) {
        std::vector<double> se_p(k), se_n(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double a = price_of(actual[i], price);
            se_p[i] = std::pow(a - price_of(proposed[i], price), 2);
            se_n[i] = std::pow(a - price_of(naive[i], price), 2);
        }
        const auto idx = static_cast<std::size_t>(price);
        report.entries.push_back({"RMSE", to_string(price), report.proposed.rmse[idx], report.naive.rmse[idx],
                                  compare_one_sided(se_p, se_n, Better::Lower)});
    }
    std::vector<double> hd_p(k), hd_n(k), ar_p(k), ar_n(k);
    for (std::size_t i = 0; i < k; ++i) {
        hd_p[i] = std::pow(hausdorff_distance(actual[i], proposed[i]), 2);
        hd_n[i] = std::pow(hausdorff_distance(actual[i], naive[i]), 2);
        ar_p[i] = interval_overlap_ratio(actual[i], proposed[i]);
        ar_n[i] = interval_overlap_ratio(actual[i], naive[i]);
    }
    report.entries.push_back({"RMSEH", "", report.proposed.rmseh, report.naive.rmseh,
                              compare_one_sided(hd_p, hd_n, Better::Lower)});
    report.entries.push_back(
        {"AR", "", report.proposed.ar, report.naive.ar, compare_one_sided(ar_p, ar_n, Better::Higher)});
    return report;
}

std::vector<HorizonEvaluation> evaluate_backtest(const BacktestResult& result) {
    std::vector<HorizonEvaluation> out;
    if (result.windows.empty()) {
        return out;
    }
    for (std::size_t h = 0; h < result.spec.m; ++h) {
        std::vector<OhlcBar> actual, proposed, naive;
        for (const auto& w : result.windows) {
            actual.push_back(w.realized_bars[h]);
            proposed.push_back(w.forecast_bars[h]);
            naive.push_back(result.series.bars[static_cast<std::size_t>(w.origin - 1)]);
        }
        out.push_back({h + 1, compare_to_naive(actual, proposed, naive)});
    }
    return out;
}

}  // namespace candlecast
