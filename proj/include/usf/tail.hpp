#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "usf/planar_map.hpp"
#include "usf/rng.hpp"

namespace usf {

struct TailGridRule {
    enum class Kind { geometric, integer };
    Kind kind = Kind::geometric;
    std::int32_t points = 20;        // geometric grid size
    double lower_quantile = 0.7;     // fit window over the positive samples
    double upper_quantile = 0.99;
    std::int32_t bootstrap = 200;
    std::uint64_t bootstrap_seed = 0x5eedf17;
};

/**
 * Survival-function tail fit: log-log least squares of the empirical survival
 * over a threshold grid spanning the window quantiles. Zero samples are the
 * atom (edge absent / empty past) and stay out of the tail; the fraction is
 * reported. The bootstrap interval is a percentile interval over resampled
 * positive samples refit on the same grid.
 */
struct TailFit {
    std::vector<double> thresholds;
    std::vector<double> survival;
    std::vector<std::int64_t> n_at_risk;
    double slope = 0.0;
    double intercept = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    double bootstrap_lo = 0.0, bootstrap_hi = 0.0;
    double zero_fraction = 0.0;
    std::int64_t n_total = 0, n_positive = 0;
};

namespace detail {

inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw Error("quantile of empty sample");
    const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

// least squares of log(survival) against log(threshold)
inline bool loglog_fit(const std::vector<double>& thresholds, const std::vector<double>& survival,
                       double& slope, double& intercept) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::int32_t m = 0;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(survival[i] > 0.0)) continue;
        const double x = std::log(thresholds[i]), y = std::log(survival[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return false;
    const double den = m * sxx - sx * sx;
    if (den == 0.0) return false;
    slope = (m * sxy - sx * sy) / den;
    intercept = (sy - slope * sx) / m;
    return true;
}

inline std::vector<double> survival_at(const std::vector<double>& sorted_positive,
                                       const std::vector<double>& thresholds,
                                       std::vector<std::int64_t>* at_risk = nullptr) {
    std::vector<double> out(thresholds.size());
    if (at_risk) at_risk->assign(thresholds.size(), 0);
    const double n = static_cast<double>(sorted_positive.size());
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        auto it = std::lower_bound(sorted_positive.begin(), sorted_positive.end(), thresholds[i]);
        const auto k = static_cast<std::int64_t>(sorted_positive.end() - it);
        out[i] = static_cast<double>(k) / n;
        if (at_risk) (*at_risk)[i] = k;
    }
    return out;
}

} // namespace detail

inline TailFit fit_tail(const std::vector<double>& samples, const TailGridRule& rule = {}) {
    if (samples.size() < 1000) throw Error("tail fit needs at least 1000 samples");
    TailFit fit;
    fit.n_total = static_cast<std::int64_t>(samples.size());
    std::vector<double> pos;
    pos.reserve(samples.size());
    for (double x : samples) {
        if (!(x >= 0.0)) throw Error("tail samples must be nonnegative");
        if (x > 0.0) pos.push_back(x);
    }
    fit.n_positive = static_cast<std::int64_t>(pos.size());
    fit.zero_fraction = 1.0 - static_cast<double>(pos.size()) / static_cast<double>(samples.size());
    if (pos.size() < 2) throw Error("tail fit: all samples sit in the atom at zero");
    std::sort(pos.begin(), pos.end());
    if (pos.front() == pos.back()) throw Error("tail fit: degenerate all-equal samples");

    fit.window_lo = detail::quantile_sorted(pos, rule.lower_quantile);
    fit.window_hi = detail::quantile_sorted(pos, rule.upper_quantile);
    if (!(fit.window_lo > 0.0) || !(fit.window_hi > fit.window_lo))
        throw Error("tail fit: empty fit window");

    if (rule.kind == TailGridRule::Kind::geometric) {
        const double lo = std::log(fit.window_lo), hi = std::log(fit.window_hi);
        for (std::int32_t i = 0; i < rule.points; ++i)
            fit.thresholds.push_back(std::exp(lo + (hi - lo) * i / (rule.points - 1)));
    } else {
        const auto first = static_cast<std::int64_t>(std::ceil(std::max(1.0, fit.window_lo)));
        const auto last = static_cast<std::int64_t>(std::floor(fit.window_hi));
        for (std::int64_t t = first; t <= last; ++t)
            fit.thresholds.push_back(static_cast<double>(t));
        if (fit.thresholds.size() < 2) {
            fit.thresholds.clear();
            const auto top = static_cast<std::int64_t>(pos.back());
            for (std::int64_t t = 1; t <= top; ++t) fit.thresholds.push_back(static_cast<double>(t));
        }
    }
    fit.survival = detail::survival_at(pos, fit.thresholds, &fit.n_at_risk);
    if (!detail::loglog_fit(fit.thresholds, fit.survival, fit.slope, fit.intercept))
        throw Error("tail fit: fewer than two usable grid points");

    // percentile bootstrap on the positive samples, same grid
    std::vector<double> slopes;
    slopes.reserve(rule.bootstrap);
    for (std::int32_t b = 0; b < rule.bootstrap; ++b) {
        SplitRng rng(rule.bootstrap_seed, static_cast<std::uint64_t>(b));
        std::vector<double> resample(pos.size());
        for (auto& x : resample)
            x = pos[rng.next_below(static_cast<std::uint32_t>(pos.size()))];
        std::sort(resample.begin(), resample.end());
        auto surv = detail::survival_at(resample, fit.thresholds);
        double s, c;
        if (detail::loglog_fit(fit.thresholds, surv, s, c)) slopes.push_back(s);
    }
    if (!slopes.empty()) {
        std::sort(slopes.begin(), slopes.end());
        fit.bootstrap_lo = detail::quantile_sorted(slopes, 0.025);
        fit.bootstrap_hi = detail::quantile_sorted(slopes, 0.975);
    } else {
        fit.bootstrap_lo = fit.bootstrap_hi = fit.slope;
    }
    return fit;
}

/// robustness comparison across truncation depths: true when the point slopes
/// land inside each other's bootstrap intervals
inline bool fits_compatible(const TailFit& a, const TailFit& b) {
    return a.slope >= b.bootstrap_lo && a.slope <= b.bootstrap_hi &&
           b.slope >= a.bootstrap_lo && b.slope <= a.bootstrap_hi;
}

/**
 * Tail fit over the fixed integer window 1..r_max. Quantile windows adapt to
 * each distribution and make exponents of differently-scaled tails
 * incomparable; the non-universality scan needs one common grid instead.
 */
inline TailFit fit_tail_fixed_integer(const std::vector<double>& samples, std::int32_t r_max,
                                      std::uint64_t bootstrap_seed = 0x5eedf17,
                                      std::int32_t bootstrap = 200) {
    if (samples.size() < 1000) throw Error("tail fit needs at least 1000 samples");
    TailFit fit;
    fit.n_total = static_cast<std::int64_t>(samples.size());
    std::vector<double> pos;
    for (double x : samples) {
        if (!(x >= 0.0)) throw Error("tail samples must be nonnegative");
        if (x > 0.0) pos.push_back(x);
    }
    fit.n_positive = static_cast<std::int64_t>(pos.size());
    fit.zero_fraction = 1.0 - static_cast<double>(pos.size()) / static_cast<double>(samples.size());
    if (pos.size() < 25) throw Error("tail fit: too few positive samples");
    std::sort(pos.begin(), pos.end());
    for (std::int32_t t = 1; t <= r_max; ++t) fit.thresholds.push_back(t);
    fit.survival = detail::survival_at(pos, fit.thresholds, &fit.n_at_risk);
    fit.window_lo = 1.0;
    fit.window_hi = r_max;
    if (!detail::loglog_fit(fit.thresholds, fit.survival, fit.slope, fit.intercept))
        throw Error("tail fit: fewer than two usable grid points");
    std::vector<double> slopes;
    for (std::int32_t b = 0; b < bootstrap; ++b) {
        SplitRng rng(bootstrap_seed, static_cast<std::uint64_t>(b));
        std::vector<double> resample(pos.size());
        for (auto& x : resample)
            x = pos[rng.next_below(static_cast<std::uint32_t>(pos.size()))];
        std::sort(resample.begin(), resample.end());
        auto surv = detail::survival_at(resample, fit.thresholds);
        double s, c;
        if (detail::loglog_fit(fit.thresholds, surv, s, c)) slopes.push_back(s);
    }
    if (!slopes.empty()) {
        std::sort(slopes.begin(), slopes.end());
        fit.bootstrap_lo = detail::quantile_sorted(slopes, 0.025);
        fit.bootstrap_hi = detail::quantile_sorted(slopes, 0.975);
    } else {
        fit.bootstrap_lo = fit.bootstrap_hi = fit.slope;
    }
    return fit;
}

} // namespace usf
