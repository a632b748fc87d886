#pragma once

#include <cmath>

namespace ellzeros::stable {

// Below this magnitude the primitives switch to their power series.
inline constexpr double kSeriesThreshold = 0.125;

/// log(1 + x) - x, accurate to a few ulps for all x > -1.
[[nodiscard]] inline double log1pmx(double x) noexcept
{
    if (std::fabs(x) < kSeriesThreshold) {
        // -x^2/2 + x^3/3 - x^4/4 + ...
        double term = x;
        double sum = 0.0;
        for (int k = 2; k < 40; ++k) {
            term *= -x;
            const double next = sum + term / k;
            if (next == sum) break;
            sum = next;
        }
        return sum;
    }
    return std::log1p(x) - x;
}

/// exp(x) - 1 - x, accurate to a few ulps.
[[nodiscard]] inline double expm1mx(double x) noexcept
{
    if (std::fabs(x) < kSeriesThreshold) {
        // x^2/2 + x^3/6 + ...
        double term = x;
        double sum = 0.0;
        for (int k = 2; k < 40; ++k) {
            term *= x / k;
            const double next = sum + term;
            if (next == sum) break;
            sum = next;
        }
        return sum;
    }
    return std::expm1(x) - x;
}

}  // namespace ellzeros::stable
