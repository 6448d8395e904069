#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace candlecast {

/// One period of open/high/low/close prices.
///
/// A bar is *valid* when low > 0, low < high and both open and close lie in
/// [low, high]. It is *strictly interior* when, additionally, open and close
/// sit strictly inside (low, high), which is what the forward transform needs.
struct OhlcBar {
    std::int64_t t = 0;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;

    friend bool operator==(const OhlcBar&, const OhlcBar&) = default;
};

/// A bar as read from disk, before sanitization.
struct RawBar {
    std::string label;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
};

/// Contiguously indexed series of valid bars. `labels[i]` is the opaque date
/// string of `bars[i]` (may be empty for simulated data).
struct OhlcSeries {
    std::vector<OhlcBar> bars;
    std::vector<std::string> labels;

    [[nodiscard]] std::size_t size() const { return bars.size(); }
    [[nodiscard]] bool empty() const { return bars.empty(); }
};

/// Unconstrained image of a bar: log low, log range, and the logits of the
/// open and close positions inside the range.
struct TransformedVector {
    double y1 = 0.0;
    double y2 = 0.0;
    double y3 = 0.0;
    double y4 = 0.0;

    [[nodiscard]] Eigen::Vector4d as_vector() const { return {y1, y2, y3, y4}; }
    static TransformedVector from_vector(const Eigen::Ref<const Eigen::VectorXd>& v);
};

struct SanitizeConfig {
    double epsilon_fraction = 0.01;
    double limit_factor = 1.1;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct SanitizeSummary {
    std::size_t removed_suspensions = 0;
    std::size_t perturbed_prices = 0;
    std::size_t limit_bars = 0;

    [[nodiscard]] bool changed_anything() const {
        return removed_suspensions + perturbed_prices + limit_bars > 0;
    }
};

struct SanitizedSeries {
    OhlcSeries series;
    SanitizeSummary summary;
};

/// |lambda| or |1 - lambda| below this counts as sitting on the boundary.
inline constexpr double kBoundaryTolerance = 1e-12;

/// Components above this magnitude are refused by inverse_transform.
inline constexpr double kMaxExponent = 700.0;

[[nodiscard]] bool satisfies_constraints(const OhlcBar& bar);
[[nodiscard]] bool is_strictly_interior(const OhlcBar& bar);

/// Removes suspension bars, opens up one-price limit bars and nudges any
/// open/close that sits on the low or high into the interior. Throws
/// DataError on corrupt input (negative prices, high < low, open/close outside
/// the range, zero low on a traded bar) or when nothing survives filtering.
[[nodiscard]] SanitizedSeries sanitize_series_report(std::span<const RawBar> raw, const SanitizeConfig& cfg);
[[nodiscard]] OhlcSeries sanitize_series(std::span<const RawBar> raw, const SanitizeConfig& cfg);

/// Re-sanitizes an already-valid series (boundary open/close values are still
/// possible in a valid series). Idempotent on its own output.
[[nodiscard]] SanitizedSeries sanitize_series_report(const OhlcSeries& series, const SanitizeConfig& cfg);

[[nodiscard]] TransformedVector transform(const OhlcBar& bar);

/// Always returns a bar that satisfies every constraint for finite input with
/// all components at most kMaxExponent in magnitude; throws NumericError
/// otherwise.
[[nodiscard]] OhlcBar inverse_transform(const TransformedVector& vec);

/// Row-per-period matrix (T x 4) of transformed bars.
[[nodiscard]] Eigen::MatrixXd transform_series(const OhlcSeries& series);

[[nodiscard]] std::vector<RawBar> to_raw(const OhlcSeries& series);

}  // namespace candlecast
