#include "ellzeros/quad.hpp"

#include "ellzeros/scaled_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

namespace ellzeros {

namespace {

// Kronrod 21-point abscissae on [-1, 1] (non-negative half, descending
// toward 0 reversed); odd indices are the 10-point Gauss nodes. Standard
// QUADPACK qk21 tables.
constexpr std::array<double, 11> kXgk = {
    9.95657163025808080735527280689002848e-01, 9.73906528517171720077964012084452053e-01,
    9.30157491355708226001207180059508346e-01, 8.65063366688984510732096688423493049e-01,
    7.80817726586416897063717578345042377e-01, 6.79409568299024406234327365114873576e-01,
    5.62757134668604683339000099272694141e-01, 4.33395394129247190799265943165784162e-01,
    2.94392862701460198131126603103865566e-01, 1.48874338981631210884826001129719985e-01,
    0.0,
};

constexpr std::array<double, 11> kWgk = {
    1.16946388673718742780643960621920484e-02, 3.25581623079647274788189724593897606e-02,
    5.47558965743519960313813002445801764e-02, 7.50396748109199527670431409161900094e-02,
    9.31254545836976055350654650833663444e-02, 1.09387158802297641899210590325804960e-01,
    1.23491976262065851077958109831074160e-01, 1.34709217311473325928054001771706833e-01,
    1.42775938577060080797094273138717061e-01, 1.47739104901338491374841515972068046e-01,
    1.49445554002916905664936468389821204e-01,
};

// Gauss weights for kXgk[1], kXgk[3], ..., kXgk[9].
constexpr std::array<double, 5> kWg = {
    6.66713443086881375935688098933317929e-02, 1.49451349150580593145776339657697332e-01,
    2.19086362515982043995534934228163192e-01, 2.69266719309996355091226921569469353e-01,
    2.95524224714752870173892994651338329e-01,
};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
};

Segment gauss_kronrod_21(const Integrand& f, double lo, double hi)
{
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const double fc = f(center);
    double kronrod = fc * kWgk[10];
    double gauss = 0.0;
    double abs_sum = std::fabs(kronrod);
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        abs_sum += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }

    Segment seg{lo, hi, kronrod * half, std::fabs((kronrod - gauss) * half)};
    // Floor at the rounding level of the rule itself.
    const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::fabs(half);
    seg.error = std::max(seg.error, round_floor);
    if (!std::isfinite(seg.value)) seg.error = std::numeric_limits<double>::infinity();
    return seg;
}

struct ByError {
    bool operator()(const Segment& x, const Segment& y) const
    {
        if (x.error != y.error) return x.error < y.error;
        return x.lo > y.lo;
    }
};

QuadResult summarize(std::vector<Segment> segments, std::size_t evaluations)
{
    std::sort(segments.begin(), segments.end(),
              [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
    QuadResult r;
    for (const Segment& s : segments) {
        r.value += s.value;
        r.abs_error_estimate += s.error;
    }
    r.evaluations = evaluations;
    return r;
}

}  // namespace

QuadResult integrate_adaptive(const Integrand& f, std::span<const double> points, double tol,
                              const QuadOptions& opts)
{
    if (points.size() < 2) throw std::invalid_argument("need at least two partition points");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i])) throw std::invalid_argument("integration limits must be finite");
        if (i > 0 && points[i] < points[i - 1])
            throw std::invalid_argument("partition points must be sorted");
    }
    if (points.front() == points.back()) return QuadResult{0.0, 0.0, 1};

    std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
    std::size_t evaluations = 0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i] == points[i + 1]) continue;
        Segment s = gauss_kronrod_21(f, points[i], points[i + 1]);
        evaluations += 21;
        total_error += s.error;
        heap.push(s);
    }

    std::size_t splits = 0;
    while (total_error > tol) {
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (splits >= opts.max_subdivisions || !(mid > worst.lo && mid < worst.hi)
            || !std::isfinite(worst.error)) {
            std::vector<Segment> all;
            while (!heap.empty()) {
                all.push_back(heap.top());
                heap.pop();
            }
            QuadResult best = summarize(std::move(all), evaluations);
            throw QuadratureError("adaptive quadrature did not reach tolerance "
                                      + std::to_string(tol) + " (estimate "
                                      + std::to_string(best.abs_error_estimate) + ")",
                                  best);
        }
        heap.pop();
        const Segment left = gauss_kronrod_21(f, worst.lo, mid);
        const Segment right = gauss_kronrod_21(f, mid, worst.hi);
        evaluations += 42;
        ++splits;
        heap.push(left);
        heap.push(right);

        // Recompute from scratch periodically so cancellation in the running
        // sum cannot stall or falsely end the loop.
        total_error += left.error + right.error - worst.error;
        if (splits % 64 == 0 || total_error <= tol) {
            auto copy = heap;
            total_error = 0.0;
            while (!copy.empty()) {
                total_error += copy.top().error;
                copy.pop();
            }
        }
    }

    std::vector<Segment> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    return summarize(std::move(all), evaluations);
}

QuadResult integrate_adaptive(const Integrand& f, double lo, double hi, double tol,
                              const QuadOptions& opts)
{
    if (lo > hi) throw std::invalid_argument("integration requires lo <= hi");
    const std::array<double, 2> pts{lo, hi};
    return integrate_adaptive(f, pts, tol, opts);
}

namespace {

// Substituting s = sqrt(n) tan(phi) maps [0, inf] onto [0, pi/2] and turns
//   F_n(s/sqrt n) / (1 + s^2/n) ds  into  sqrt(n) F_n(tan phi) dphi,
// so K_n and L_n need no tail truncation.
std::vector<double> phi_partition(int n, double phi_max)
{
    std::vector<double> pts{0.0};
    const double root_n = std::sqrt(static_cast<double>(n));
    for (double c : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double phi = std::atan(c / root_n);
        if (phi < phi_max) pts.push_back(phi);
    }
    pts.push_back(phi_max);
    return pts;
}

double phi_upper(int n, double upper)
{
    if (n < 1) throw std::invalid_argument("degree n must be positive");
    if (!(upper >= 0.0)) throw std::invalid_argument("upper limit must be >= 0");
    if (upper == std::numeric_limits<double>::infinity()) return 0.5 * std::numbers::pi;
    return std::atan(upper / std::sqrt(static_cast<double>(n)));
}

QuadResult scaled(QuadResult r, double factor)
{
    r.value *= factor;
    r.abs_error_estimate *= std::fabs(factor);
    return r;
}

}  // namespace

QuadResult k_integral(int n, double upper, double tol)
{
    const double phi_max = phi_upper(n, upper);
    if (phi_max == 0.0) return QuadResult{0.0, 0.0, 1};
    const double root_n = std::sqrt(static_cast<double>(n));
    const double factor = 2.0 / std::numbers::pi * root_n;
    const auto integrand = [n, root_n](double phi) { return big_f(n, root_n * std::tan(phi)); };
    const auto pts = phi_partition(n, phi_max);
    return scaled(integrate_adaptive(integrand, pts, tol / factor), factor);
}

QuadResult l_integral(int n, double upper, double tol)
{
    const double phi_max = phi_upper(n, upper);
    if (phi_max == 0.0) return QuadResult{0.0, 0.0, 1};
    const double root_n = std::sqrt(static_cast<double>(n));
    const double factor = 2.0 / (std::numbers::pi * std::numbers::pi) * static_cast<double>(n);
    const auto integrand = [n, root_n](double phi) {
        return big_f(n, root_n * std::tan(phi)) * phi;
    };
    const auto pts = phi_partition(n, phi_max);
    return scaled(integrate_adaptive(integrand, pts, tol / factor), factor);
}

double profile_cutoff(double tol)
{
    // smallest s >= 8 with s^5 exp(-s^2) < tol / 10
    double s = 8.0;
    while (std::pow(s, 5) * std::exp(-s * s) >= tol / 10.0) s += 0.25;
    return s;
}

namespace {

QuadResult profile_integral(ProfileTag tag, double upper, double weight, double tol,
                            bool add_tail)
{
    std::vector<double> pts{0.0};
    for (double p : {kProfileSeriesSwitch, 1.0, 2.0, 4.0}) {
        if (p < upper) pts.push_back(p);
    }
    pts.push_back(upper);
    const auto f = [tag](double s) { return limit_profile(tag, s); };
    QuadResult r = scaled(integrate_adaptive(f, pts, tol / weight), weight);
    if (add_tail) {
        // |f_1|, |g_1| decay like s^9 exp(-s^2), the slowest of the four.
        r.abs_error_estimate += weight * std::pow(upper, 9) * std::exp(-upper * upper);
    }
    return r;
}

}  // namespace

CoefficientSet coefficients(double tol, std::optional<double> c)
{
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (c && !(*c > 0.0 && std::isfinite(*c))) throw std::invalid_argument("c must be positive");

    constexpr double kw = 2.0 / std::numbers::pi;
    constexpr double lw = 2.0 / (std::numbers::pi * std::numbers::pi);
    // Leave headroom for the tail bound inside the per-constant tolerance.
    const double qtol = 0.5 * tol;
    const double cutoff = profile_cutoff(qtol);

    CoefficientSet set;
    set.tol = tol;
    set.kappa0 = profile_integral(ProfileTag::f0, cutoff, kw, qtol, true);
    set.kappa1 = profile_integral(ProfileTag::f1, cutoff, kw, qtol, true);
    set.ell0 = profile_integral(ProfileTag::g0, cutoff, lw, qtol, true);
    set.ell1 = profile_integral(ProfileTag::g1, cutoff, lw, qtol, true);
    if (c) {
        set.c = c;
        set.kappa_c0 = profile_integral(ProfileTag::f0, *c, kw, qtol, false);
        set.kappa_c1 = profile_integral(ProfileTag::f1, *c, kw, qtol, false);
        set.ell_c0 = profile_integral(ProfileTag::g0, *c, lw, qtol, false);
        set.ell_c1 = profile_integral(ProfileTag::g1, *c, lw, qtol, false);
    }
    return set;
}

}  // namespace ellzeros
