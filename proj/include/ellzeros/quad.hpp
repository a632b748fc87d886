#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>

namespace ellzeros {

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// Adaptive quadrature failed to reach its tolerance; carries the best estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadResult best)
        : std::runtime_error(what), best_(best) {}
    [[nodiscard]] const QuadResult& best() const noexcept { return best_; }

private:
    QuadResult best_;
};

struct QuadOptions {
    std::size_t max_subdivisions = 5000;
};

inline constexpr double kDefaultTolerance = 1e-10;

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (10/21) bisection with an absolute target.
/// Deterministic for fixed inputs. Throws QuadratureError on non-convergence.
[[nodiscard]] QuadResult integrate_adaptive(const Integrand& f, double lo, double hi, double tol,
                                            const QuadOptions& opts = {});

/// Same, starting from the partition given by sorted `points` (at least two).
[[nodiscard]] QuadResult integrate_adaptive(const Integrand& f, std::span<const double> points,
                                            double tol, const QuadOptions& opts = {});

/// K_n over [0, upper] in the scaled variable; upper may be +inf (gives K_n).
[[nodiscard]] QuadResult k_integral(int n, double upper, double tol = kDefaultTolerance);

/// L_n over [0, upper]; upper may be +inf (gives L_n).
[[nodiscard]] QuadResult l_integral(int n, double upper, double tol = kDefaultTolerance);

/// kappa_k, ell_k for k in {0, 1}; with c also the truncated kappa_{c,k}, ell_{c,k}.
struct CoefficientSet {
    double tol = kDefaultTolerance;
    QuadResult kappa0, kappa1, ell0, ell1;
    std::optional<double> c;
    QuadResult kappa_c0, kappa_c1, ell_c0, ell_c1;  ///< meaningful only when c is set
};

/// Upper cut-off for the infinite limit-profile integrals at tolerance `tol`.
[[nodiscard]] double profile_cutoff(double tol);

/// Integrates f0, f1, g0, g1. `tol` is the absolute target per constant;
/// Ten-digit constants need tol <= 1e-8. Throws std::invalid_argument for c <= 0.
[[nodiscard]] CoefficientSet coefficients(double tol = kDefaultTolerance,
                                          std::optional<double> c = std::nullopt);

}  // namespace ellzeros
