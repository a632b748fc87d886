#pragma once

#include <optional>
#include <string_view>

// Scaling functions of the elliptic two-point zero correlation.
//
// Finite-n functions take the *scaled* argument s and return the value at
// s / sqrt(n), e.g. big_f(n, s) = F_n(s / sqrt(n)). Every function is defined
// for s >= 0 only; negative or NaN arguments throw std::invalid_argument.

namespace ellzeros {

/// sqrt(1 - x^2) + x asin(x) on [-1, 1]; even, 1 <= h <= pi/2.
[[nodiscard]] double h_func(double x);

/// h(x) - 1 without cancellation near x = 0.
[[nodiscard]] double h_minus_one(double x);

[[nodiscard]] double scaled_delta(int n, double s);
[[nodiscard]] double scaled_gamma(int n, double s);
[[nodiscard]] double big_f(int n, double s);

/// Integrand of K_n in the scaled variable: F_n(s/sqrt n) / (1 + s^2/n).
[[nodiscard]] double k_integrand(int n, double s);

// n -> infinity building blocks.
[[nodiscard]] double delta0(double s);
[[nodiscard]] double delta1(double s);
[[nodiscard]] double gamma0(double s);
[[nodiscard]] double gamma1(double s);

enum class ProfileTag { f0, f1, g0, g1, bigF, delta, gamma };

/// A request for one of the scaled functions. Limit profiles (f0, f1, g0, g1)
/// carry no degree; bigF, delta and gamma require a finite degree.
struct ProfileFunction {
    ProfileTag tag = ProfileTag::f0;
    std::optional<int> n;  ///< empty means the n -> infinity profile

    /// Throws std::invalid_argument when tag and n are incompatible.
    void validate() const;
};

[[nodiscard]] double evaluate(const ProfileFunction& fn, double s);

/// f0, f1, g0 or g1. Uses the Taylor branch below kProfileSeriesSwitch.
[[nodiscard]] double limit_profile(ProfileTag tag, double s);

[[nodiscard]] ProfileTag parse_profile_tag(const std::string_view name);

inline constexpr double kProfileSeriesSwitch = 0.1;

namespace detail {
// Both branches are exposed so they can be compared on an overlap window.
[[nodiscard]] double f0_series(double s) noexcept;
[[nodiscard]] double f1_series(double s) noexcept;
[[nodiscard]] double f0_closed(double s) noexcept;
[[nodiscard]] double f1_closed(double s) noexcept;
}  // namespace detail

}  // namespace ellzeros
