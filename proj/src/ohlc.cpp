#include "candlecast/ohlc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "candlecast/errors.hpp"
#include "candlecast/random.hpp"

namespace candlecast {

namespace {

// Lower edge of the perturbation draw, as a fraction of the range.
constexpr double kMinPerturbFraction = 0.001;

double logit(double lambda) { return std::log(lambda / (1.0 - lambda)); }

double sigmoid(double y) {
    if (y >= 0.0) {
        return 1.0 / (1.0 + std::exp(-y));
    }
    const double e = std::exp(y);
    return e / (1.0 + e);
}

std::string describe(std::size_t row, const RawBar& bar) {
    std::ostringstream out;
    out << "row " << row + 1;
    if (!bar.label.empty()) {
        out << " (" << bar.label << ")";
    }
    out << ": o=" << bar.open << " h=" << bar.high << " l=" << bar.low << " c=" << bar.close;
    return out.str();
}

// Moves a price that sits on the low (high) edge a small random step inward.
double nudge_inside(double price, double low, double high, const SanitizeConfig& cfg, Rng& rng,
                    SanitizeSummary& summary) {
    const double range = high - low;
    const double lambda = (price - low) / range;
    const double lo_frac = std::min(kMinPerturbFraction, 0.1 * cfg.epsilon_fraction);
    if (lambda < kBoundaryTolerance) {
        ++summary.perturbed_prices;
        return low + rng.uniform_left_open(lo_frac, cfg.epsilon_fraction) * range;
    }
    if (lambda > 1.0 - kBoundaryTolerance) {
        ++summary.perturbed_prices;
        return high - rng.uniform_left_open(lo_frac, cfg.epsilon_fraction) * range;
    }
    return price;
}

}  // namespace

TransformedVector TransformedVector::from_vector(const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (v.size() != 4) {
        throw DataError("transformed vector must have 4 components");
    }
    return {v(0), v(1), v(2), v(3)};
}

void SanitizeConfig::validate() const {
    if (!(epsilon_fraction > 0.0 && epsilon_fraction <= 0.05)) {
        throw DataError("epsilon_fraction must lie in (0, 0.05]");
    }
    if (limit_factor != 1.1) {
        throw DataError("limit_factor is fixed at 1.1");
    }
}

bool satisfies_constraints(const OhlcBar& bar) {
    return std::isfinite(bar.open) && std::isfinite(bar.high) && std::isfinite(bar.low) &&
           std::isfinite(bar.close) && bar.low > 0.0 && bar.low < bar.high && bar.open >= bar.low &&
           bar.open <= bar.high && bar.close >= bar.low && bar.close <= bar.high;
}

bool is_strictly_interior(const OhlcBar& bar) {
    if (!satisfies_constraints(bar)) {
        return false;
    }
    const double range = bar.high - bar.low;
    const double lo = (bar.open - bar.low) / range;
    const double lc = (bar.close - bar.low) / range;
    return lo >= kBoundaryTolerance && lo <= 1.0 - kBoundaryTolerance && lc >= kBoundaryTolerance &&
           lc <= 1.0 - kBoundaryTolerance;
}

SanitizedSeries sanitize_series_report(std::span<const RawBar> raw, const SanitizeConfig& cfg) {
    cfg.validate();
    SanitizedSeries out;
    Rng rng(cfg.rng_seed);
    std::optional<double> previous_close;

    for (std::size_t i = 0; i < raw.size(); ++i) {
        RawBar bar = raw[i];
        const bool finite = std::isfinite(bar.open) && std::isfinite(bar.high) && std::isfinite(bar.low) &&
                            std::isfinite(bar.close);
        if (!finite || bar.open < 0.0 || bar.high < 0.0 || bar.low < 0.0 || bar.close < 0.0) {
            throw DataError("negative or non-finite price at " + describe(i, bar));
        }
        if (bar.open == 0.0 && bar.high == 0.0 && bar.low == 0.0 && bar.close == 0.0) {
            ++out.summary.removed_suspensions;
            continue;
        }
        if (bar.high < bar.low) {
            throw DataError("high below low at " + describe(i, bar));
        }
        if (bar.low == 0.0) {
            throw DataError("zero low on a traded bar at " + describe(i, bar));
        }
        if (bar.open < bar.low || bar.open > bar.high || bar.close < bar.low || bar.close > bar.high) {
            throw DataError("open/close outside [low, high] at " + describe(i, bar));
        }

        if (bar.high == bar.low) {
            // One-price bar: limit-up if the price did not fall versus the
            // previous close, otherwise limit-down.
            const bool limit_up = !previous_close || bar.close >= *previous_close;
            if (limit_up) {
                bar.close *= cfg.limit_factor;
            } else {
                bar.open *= cfg.limit_factor;
            }
            bar.high *= cfg.limit_factor;
            ++out.summary.limit_bars;
        }

        OhlcBar clean;
        clean.t = static_cast<std::int64_t>(out.series.bars.size()) + 1;
        clean.low = bar.low;
        clean.high = bar.high;
        clean.open = nudge_inside(bar.open, bar.low, bar.high, cfg, rng, out.summary);
        clean.close = nudge_inside(bar.close, bar.low, bar.high, cfg, rng, out.summary);

        previous_close = raw[i].close;
        out.series.bars.push_back(clean);
        out.series.labels.push_back(bar.label);
    }

    if (out.series.empty()) {
        throw DataError("no bars left after removing suspensions");
    }
    return out;
}

OhlcSeries sanitize_series(std::span<const RawBar> raw, const SanitizeConfig& cfg) {
    return sanitize_series_report(raw, cfg).series;
}

SanitizedSeries sanitize_series_report(const OhlcSeries& series, const SanitizeConfig& cfg) {
    const auto raw = to_raw(series);
    return sanitize_series_report(std::span<const RawBar>(raw), cfg);
}

std::vector<RawBar> to_raw(const OhlcSeries& series) {
    std::vector<RawBar> raw;
    raw.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& b = series.bars[i];
        raw.push_back({i < series.labels.size() ? series.labels[i] : std::string{}, b.open, b.high, b.low, b.close});
    }
    return raw;
}

TransformedVector transform(const OhlcBar& bar) {
    if (!is_strictly_interior(bar)) {
        throw DataError("transform needs a strictly interior bar; sanitize the series first");
    }
    const double range = bar.high - bar.low;
    const double lambda_open = (bar.open - bar.low) / range;
    const double lambda_close = (bar.close - bar.low) / range;
    return {std::log(bar.low), std::log(range), logit(lambda_open), logit(lambda_close)};
}

OhlcBar inverse_transform(const TransformedVector& vec) {
    for (double y : {vec.y1, vec.y2, vec.y3, vec.y4}) {
        if (!std::isfinite(y)) {
            throw NumericError("non-finite component in forecast vector");
        }
        if (std::abs(y) > kMaxExponent) {
            throw NumericError("forecast component exceeds exponent range (divergent model)");
        }
    }
    OhlcBar bar;
    bar.low = std::exp(vec.y1);
    bar.high = bar.low + std::exp(vec.y2);
    if (!(bar.high > bar.low)) {
        // exp(y2) vanished against exp(y1) in double precision.
        bar.high = std::nextafter(bar.low, std::numeric_limits<double>::infinity());
    }
    const double lambda_open = sigmoid(vec.y3);
    const double lambda_close = sigmoid(vec.y4);
    bar.open = std::clamp(lambda_open * bar.high + (1.0 - lambda_open) * bar.low, bar.low, bar.high);
    bar.close = std::clamp(lambda_close * bar.high + (1.0 - lambda_close) * bar.low, bar.low, bar.high);
    return bar;
}

Eigen::MatrixXd transform_series(const OhlcSeries& series) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(series.size()), 4);
    for (std::size_t i = 0; i < series.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = transform(series.bars[i]).as_vector().transpose();
    }
    return out;
}

}  // namespace candlecast
