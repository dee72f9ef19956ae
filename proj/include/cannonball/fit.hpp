#pragma once

#include <cmath>
#include <span>
#include <utility>

#include "cannonball/errors.hpp"

namespace cannonball {

// Ordinary least squares on (log x, log y), used to check error exponents
// against their asymptotic bounds.

struct FitResult {
    double slope = 0;
    double intercept = 0;
    double r_squared = 1;
    std::size_t point_count = 0;
};

inline FitResult fit_exponent(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw ParameterError("fit_exponent: need at least 3 points");
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double prev_x = 0;
    bool first = true;
    for (const auto& [x, y] : points) {
        if (!(x > 0) || (!first && x <= prev_x))
            throw ParameterError("fit_exponent: x must be positive and strictly increasing");
        if (!(y > 0)) throw ParameterError("fit_exponent: y must be positive");
        prev_x = x;
        first = false;
        const long double lx = logl(static_cast<long double>(x));
        const long double ly = logl(static_cast<long double>(y));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const long double n = static_cast<long double>(points.size());
    const long double denom = n * sxx - sx * sx;
    FitResult fit;
    fit.point_count = points.size();
    fit.slope = static_cast<double>((n * sxy - sx * sy) / denom);
    fit.intercept = static_cast<double>((sy - fit.slope * sx) / n);

    long double ss_tot = 0, ss_res = 0;
    const long double mean_y = sy / n;
    for (const auto& [x, y] : points) {
        const long double lx = logl(static_cast<long double>(x));
        const long double ly = logl(static_cast<long double>(y));
        const long double pred = fit.slope * lx + fit.intercept;
        ss_tot += (ly - mean_y) * (ly - mean_y);
        ss_res += (ly - pred) * (ly - pred);
    }
    // Constant y has zero total variance; the flat line is an exact fit.
    fit.r_squared = ss_tot > 0 ? static_cast<double>(1.0L - ss_res / ss_tot) : 1.0;
    if (fit.r_squared < 0) fit.r_squared = 0;
    if (fit.r_squared > 1) fit.r_squared = 1;
    return fit;
}

}  // namespace cannonball
