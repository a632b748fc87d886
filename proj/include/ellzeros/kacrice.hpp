#pragma once

#include "ellzeros/interval.hpp"
#include "ellzeros/quad.hpp"

#include <functional>
#include <optional>

namespace ellzeros {

/// Covariance of a unit-variance Gaussian process with C^1 paths and the
/// partial derivatives r10 = d/dx r, r01 = d/dy r, r11 = d^2/dxdy r.
struct GaussianKernel {
    using Fn = std::function<double(double, double)>;
    Fn r;
    Fn r10;
    Fn r01;
    Fn r11;
    /// Optional cancellation-free 1 - r(x,y)^2; computed from r when empty.
    Fn one_minus_r2;
};

/// Normalized correlator of the degree-n elliptic ensemble, evaluated
/// through u = (1+xy)/sqrt((1+x^2)(1+y^2)) so that large n cannot overflow.
[[nodiscard]] GaussianKernel elliptic_kernel(int n);

struct PairIntensity {
    double rho1_x = 0.0;
    double rho1_y = 0.0;
    double rho2 = 0.0;
    double rho_corr = 0.0;  ///< conditional correlation of the derivatives
    double sigma = 0.0;     ///< product of their conditional standard deviations
};

/// (1/pi) sqrt(r11(x,x)). Throws std::domain_error if r11(x,x) < 0.
[[nodiscard]] double intensity1(const GaussianKernel& k, double x);

/// Two-point intensity. Throws std::invalid_argument for x == y and
/// std::domain_error when |r(x,y)| = 1 off the diagonal.
[[nodiscard]] PairIntensity intensity2(const GaussianKernel& k, double x, double y);

struct KacRiceOptions {
    double band = 1e-4;  ///< width of the diagonal band handled by extension
    QuadOptions quad{};
};

struct KacRiceResult {
    double variance = 0.0;
    double expectation = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// Var N(I) = double integral of (rho2 - rho1 rho1) + integral of rho1.
/// Integrates in theta = atan(x) over the triangle theta_x < theta_y and
/// doubles it. Infinite endpoints are fine when the integrands stay bounded
/// in theta (true for the elliptic kernel); otherwise QuadratureError.
[[nodiscard]] KacRiceResult variance_via_kacrice(const GaussianKernel& k,
                                                 const ExtendedInterval& interval,
                                                 double tol = 1e-8,
                                                 const KacRiceOptions& opts = {});

}  // namespace ellzeros
