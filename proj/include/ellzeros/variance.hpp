#pragma once

#include "ellzeros/interval.hpp"
#include "ellzeros/quad.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ellzeros {

/// (sqrt(n)/pi)(atan b - atan a); exactly sqrt(n) on the real line.
[[nodiscard]] double expected_zeros(int n, const ExtendedInterval& interval);

/// Truncation schedules of the large-, and small-alpha expansions. They are
/// undefined for n = 1 (log n = 0) and for the regimes that do not use them.
struct ExpansionPlan {
    std::optional<int> d_n;
    std::optional<int> q_n;
    std::optional<int> r_n;
    int effective_order = 1;  ///< highest k actually summed, never above 1
};

struct AsymptoticEstimate {
    double value = 0.0;
    std::string regime;      ///< which expansion was used
    std::string order_tag;   ///< residual order of the truncated expansion
    double predicted_error = 0.0;
    ExpansionPlan plan;
};

struct VarianceReport {
    int n = 1;
    ExtendedInterval interval = ExtendedInterval::real_line();
    AlphaParam alpha;
    double expectation = 0.0;
    double variance_exact = 0.0;
    double error_estimate = 0.0;  ///< propagated quadrature error
    std::optional<QuadResult> K_ab, L_ab, K_full, L_full;
    std::optional<AsymptoticEstimate> asymptotic;

    [[nodiscard]] SignCase sign_case() const noexcept { return alpha.sign_case; }
};

/// Exact variance by the three-case formula. Throws QuadratureError on failure.
[[nodiscard]] VarianceReport variance_exact(int n, const ExtendedInterval& interval,
                                            double tol = kDefaultTolerance);

/// Regime thresholds on |alpha_n|.
inline constexpr double kLargeAlpha = 10.0;
inline constexpr double kSmallAlpha = 0.5;

/// Truncated (k <= 1) asymptotic expansion for the regime selected by alpha_n.
/// `coeffs` must hold the infinite constants; the fixed-alpha regime computes
/// its own c-truncated constants.
[[nodiscard]] AsymptoticEstimate variance_asymptotic(int n, const ExtendedInterval& interval,
                                                     const CoefficientSet& coeffs,
                                                     double tol = kDefaultTolerance);

[[nodiscard]] AsymptoticEstimate variance_asymptotic(int n, const ExtendedInterval& interval,
                                                     double tol = kDefaultTolerance);

/// Small-alpha polynomial for alpha_n > 0 (terms through alpha_n^4 / n).
[[nodiscard]] double small_alpha_positive(int n, double alpha_n);

struct ExpansionRow {
    int n = 0;
    double exact = 0.0;
    double asymptotic = 0.0;
    double abs_diff = 0.0;
    double scaled_diff = 0.0;  ///< abs_diff * n^{3/2}
};

using IntervalFamily = std::function<ExtendedInterval(int)>;

[[nodiscard]] std::vector<ExpansionRow> expansion_error_report(const std::vector<int>& n_list,
                                                               const IntervalFamily& family,
                                                               double tol = kDefaultTolerance);

}  // namespace ellzeros
