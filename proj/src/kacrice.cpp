#include "ellzeros/kacrice.hpp"

#include "ellzeros/scaled_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ellzeros {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

GaussianKernel elliptic_kernel(int n)
{
    if (n < 1) throw std::invalid_argument("degree n must be positive");
    const double nd = n;
    GaussianKernel k;
    k.r = [n](double x, double y) {
        const double u = (1.0 + x * y) / std::sqrt((1.0 + x * x) * (1.0 + y * y));
        return std::pow(u, n);
    };
    k.r10 = [n, nd](double x, double y) {
        const double sp = std::sqrt((1.0 + x * x) * (1.0 + y * y));
        const double u = (1.0 + x * y) / sp;
        return nd * std::pow(u, n - 1) * (y - x) / (sp * (1.0 + x * x));
    };
    k.r01 = [n, nd](double x, double y) {
        const double sp = std::sqrt((1.0 + x * x) * (1.0 + y * y));
        const double u = (1.0 + x * y) / sp;
        return nd * std::pow(u, n - 1) * (x - y) / (sp * (1.0 + y * y));
    };
    k.r11 = [n, nd](double x, double y) {
        const double p = (1.0 + x * x) * (1.0 + y * y);
        const double u = (1.0 + x * y) / std::sqrt(p);
        double v = std::pow(u, n);
        if (n > 1) v += (1.0 - nd) * (x - y) * (x - y) * std::pow(u, n - 2) / p;
        return nd * v / p;
    };
    k.one_minus_r2 = [nd](double x, double y) {
        const double q = (x - y) * (x - y) / ((1.0 + x * x) * (1.0 + y * y));
        return -std::expm1(nd * std::log1p(-std::min(q, 1.0)));
    };
    return k;
}

double intensity1(const GaussianKernel& k, double x)
{
    const double v = k.r11(x, x);
    if (!(v >= 0.0)) throw std::domain_error("kernel has r11(x,x) < 0");
    return std::sqrt(v) / kPi;
}

PairIntensity intensity2(const GaussianKernel& k, double x, double y)
{
    if (x == y) throw std::invalid_argument("intensity2 requires x != y");
    PairIntensity p;
    p.rho1_x = intensity1(k, x);
    p.rho1_y = intensity1(k, y);

    const double r = k.r(x, y);
    const double omr2 = k.one_minus_r2 ? k.one_minus_r2(x, y) : (1.0 - r) * (1.0 + r);
    if (!(omr2 > 0.0)) throw std::domain_error("degenerate pair: |r(x,y)| = 1 off the diagonal");

    const double r10 = k.r10(x, y);
    const double r01 = k.r01(x, y);
    // Conditional variances can dip below zero by rounding near the diagonal.
    const double vx = std::max(k.r11(x, x) - r10 * r10 / omr2, 0.0);
    const double vy = std::max(k.r11(y, y) - r01 * r01 / omr2, 0.0);
    p.sigma = std::sqrt(vx * vy);
    if (p.sigma == 0.0) return p;

    const double cov = k.r11(x, y) + r * r10 * r01 / omr2;
    p.rho_corr = std::clamp(cov / p.sigma, -1.0, 1.0);
    p.rho2 = h_func(p.rho_corr) * p.sigma / (kPi * kPi * std::sqrt(omr2));
    return p;
}

KacRiceResult variance_via_kacrice(const GaussianKernel& k, const ExtendedInterval& interval,
                                   double tol, const KacRiceOptions& opts)
{
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const double ta = std::atan(interval.a());
    const double tb = std::atan(interval.b());
    const double width = tb - ta;
    const double eta = opts.band;
    if (!(eta > 0.0) || 2.0 * eta >= width) throw std::invalid_argument("band too wide for interval");

    // Pair integrand in theta coordinates, Jacobian sec^2 on both axes.
    const auto g = [&k](double tx, double ty) {
        const double x = std::tan(tx);
        const double y = std::tan(ty);
        const PairIntensity p = intensity2(k, x, y);
        const double jac = (1.0 + x * x) * (1.0 + y * y);
        return (p.rho2 - p.rho1_x * p.rho1_y) * jac;
    };

    const double inner_tol = 0.25 * tol / width;
    const double outer_tol = 0.25 * tol;
    double band_density = 0.0;
    std::size_t evaluations = 0;

    const auto inner = [&](double tx) {
        const double edge = g(tx, tx + eta);
        // Inside the band the integrand is replaced by its value at the band
        // edge; the first difference bounds what that misses.
        band_density = std::max(band_density, 0.5 * eta * std::fabs(g(tx, tx + 2.0 * eta) - edge));
        const double lo = tx + eta;
        if (lo >= tb) return 0.0;
        const QuadResult r = integrate_adaptive([&](double ty) { return g(tx, ty); }, lo, tb,
                                                inner_tol, opts.quad);
        evaluations += r.evaluations;
        return r.value + eta * edge;
    };

    const QuadResult pair = integrate_adaptive(inner, ta, tb - eta, outer_tol, opts.quad);
    // Corner triangle theta_x in (tb - eta, tb), area eta^2 / 2.
    const double corner = 0.5 * eta * eta * g(tb - eta, tb);
    const QuadResult single = integrate_adaptive(
        [&k](double t) {
            const double x = std::tan(t);
            return intensity1(k, x) * (1.0 + x * x);
        },
        ta, tb, outer_tol, opts.quad);

    KacRiceResult res;
    res.expectation = single.value;
    res.variance = 2.0 * (pair.value + corner) + single.value;
    // Factor 2 on the band term covers the curvature inside the band.
    res.abs_error_estimate = 2.0 * (pair.abs_error_estimate + inner_tol * width)
                             + 4.0 * band_density * width + std::fabs(corner)
                             + single.abs_error_estimate;
    res.evaluations = evaluations + pair.evaluations + single.evaluations;
    return res;
}

}  // namespace ellzeros
