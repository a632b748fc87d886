#pragma once

#include <limits>
#include <string>

namespace ellzeros {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (a, b) on the extended real line.
class ExtendedInterval {
public:
    /// Throws std::invalid_argument unless a < b (NaN endpoints rejected).
    ExtendedInterval(double a, double b);

    static ExtendedInterval real_line() { return {-kInf, kInf}; }

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] bool is_real_line() const noexcept { return a_ == -kInf && b_ == kInf; }
    [[nodiscard]] bool is_finite() const noexcept;

    /// Mirror image (-b, -a); same law for N_n by the symmetry x -> -x.
    [[nodiscard]] ExtendedInterval reflected() const { return {-b_, -a_}; }

    friend bool operator==(const ExtendedInterval&, const ExtendedInterval&) = default;

private:
    double a_;
    double b_;
};

enum class SignCase { positive, zero, negative };

[[nodiscard]] std::string to_string(SignCase c);

struct AlphaParam {
    double alpha = 0.0;    ///< (b - a) / (1 + ab), extended
    double alpha_n = 0.0;  ///< sqrt(n) * alpha
    SignCase sign_case = SignCase::zero;
};

/// alpha(a, b) with the limit conventions on the extended line:
///   alpha(a, +inf) = 1/a (a != 0), +inf (a = 0)
///   alpha(-inf, b) = -1/b (b != 0), +inf (b = 0)
///   alpha(-inf, +inf) = 0, the only `zero` case
///   1 + ab = 0 for finite endpoints gives +inf.
[[nodiscard]] AlphaParam alpha_of(const ExtendedInterval& interval, int n = 1);

/// Parses "inf", "+inf", "-inf" or a decimal number.
[[nodiscard]] double parse_extended(const std::string& text);

}  // namespace ellzeros
