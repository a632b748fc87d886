#include "ellzeros/scaled_kernel.hpp"

#include "ellzeros/stable_math.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ellzeros {

namespace {

using stable::expm1mx;
using stable::log1pmx;

void require_nonnegative(double s)
{
    if (!(s >= 0.0)) throw std::invalid_argument("scaled argument must satisfy s >= 0");
}

void require_degree(int n)
{
    if (n < 1) throw std::invalid_argument("degree n must be positive");
}

// Below this s the closed forms underflow (A ~ s^4); values equal their s = 0
// limits to well below double resolution.
constexpr double kTinyS = 1e-30;

// Taylor coefficients about s = 0, c[j] multiplies s^j. Computed once with
// tests/oracle/taylor.py (400-digit interpolation of the closed forms on two
// grids, agreement < 1e-35). Exact values: f0 = -1 + (pi/4) s + 0 s^2 - ...,
// f1 = -(pi/4) s + s^2 - (pi/8) s^3 + ...
constexpr std::array<double, 20> kF0Taylor = {
    -1.0,
    7.85398163397448309616e-1,
    0.0,
    -6.54498469497873591346e-2,
    3.20750149549792091394e-2,
    -2.45436926061702596755e-2,
    -1.06916716516597363798e-3,
    1.22718463030851298377e-3,
    -3.43660874517634383636e-4,
    8.09600971384088426796e-4,
    -3.53560570491393398803e-6,
    -2.40445401275725510214e-5,
    3.97327083535555278624e-6,
    -2.44123099923930172554e-5,
    2.53364471755982787009e-7,
    4.94375697594868115673e-7,
    -3.44704386426734273167e-8,
    7.02230400828259852689e-7,
    -5.18525097927822288667e-9,
    -1.06709283734827432089e-8,
};

constexpr std::array<double, 20> kF1Taylor = {
    0.0,
    -7.85398163397448309616e-1,
    1.0,
    -3.92699081698724154808e-1,
    -1.28300059819916836558e-1,
    7.36310778185107790265e-2,
    -4.16975194414729718812e-2,
    4.09061543436170994591e-2,
    2.74928699614107506909e-3,
    -2.68446637879987215201e-3,
    8.94508243343225298971e-4,
    -2.18592262273703875235e-3,
    1.11210870354565559987e-6,
    7.71428995759619345269e-5,
    -1.53793285147786858303e-5,
    9.0674294257459778377e-5,
    -9.40094755439061989412e-7,
    -2.085647474228349863e-6,
    1.85029577395727147483e-7,
    -3.31608800391122708214e-6,
};

template <std::size_t N>
double horner(const std::array<double, N>& c, double s) noexcept
{
    double acc = 0.0;
    for (std::size_t j = N; j-- > 0;) acc = acc * s + c[j];
    return acc;
}

// h with the argument clamped to [-1, 1]; computed correlations can overshoot
// by an ulp.
double h_clamped(double x) noexcept
{
    x = std::clamp(x, -1.0, 1.0);
    return std::sqrt((1.0 - x) * (1.0 + x)) + x * std::asin(x);
}

double hm1_clamped(double x) noexcept
{
    x = std::clamp(x, -1.0, 1.0);
    const double root = std::sqrt((1.0 - x) * (1.0 + x));
    return x * std::asin(x) - x * x / (1.0 + root);
}

// Shared pieces of Delta_n, Gamma_n at s / sqrt(n) for n >= 2 and s > kTinyS.
struct FiniteParts {
    double delta;
    double gamma;
    double gamma_minus_one;
};

FiniteParts finite_parts(int n, double s) noexcept
{
    const double nd = n;
    const double x = s * s;
    const double t = x / nd;
    const double lt = nd * log1pmx(t);  // n log(1+t) - x
    const double w = x + lt;            // n log(1+t)
    const double e = std::exp(-w);      // (1 + s^2/n)^(-n)
    const double one_m_e = -std::expm1(-w);

    // A = 1 - (1 + s^2) e
    const double a = -std::expm1(log1pmx(x) - lt);
    // B = (1 + t)(1 - e) - s^2
    const double b = (w <= 1.0) ? lt + t * w - (1.0 + t) * expm1mx(-w)
                                : (1.0 + t) * one_m_e - x;

    const double denom = one_m_e * std::sqrt(one_m_e);
    FiniteParts p{};
    p.delta = std::exp(-0.5 * w) * b / a;
    p.gamma = a / denom;
    if (e < 0.5) {
        // A - (1 - e)^{3/2} without cancellation when e is small
        p.gamma_minus_one = (-(1.0 + x) * e - std::expm1(1.5 * std::log1p(-e))) / denom;
    } else {
        p.gamma_minus_one = p.gamma - 1.0;
    }
    return p;
}

// 1 - (1 + x) e^{-x}
double d_of(double x) noexcept { return -std::expm1(log1pmx(x)); }

double gamma0_minus_one(double s) noexcept
{
    const double x = s * s;
    const double e = std::exp(-x);
    const double one_m_e = -std::expm1(-x);
    const double denom = one_m_e * std::sqrt(one_m_e);
    if (e < 0.5) return (-(1.0 + x) * e - std::expm1(1.5 * std::log1p(-e))) / denom;
    return d_of(x) / denom - 1.0;
}

}  // namespace

double h_func(double x)
{
    if (!(std::fabs(x) <= 1.0)) throw std::invalid_argument("h_func requires |x| <= 1");
    return h_clamped(x);
}

double h_minus_one(double x)
{
    if (!(std::fabs(x) <= 1.0)) throw std::invalid_argument("h_minus_one requires |x| <= 1");
    return hm1_clamped(x);
}

double scaled_delta(int n, double s)
{
    require_degree(n);
    require_nonnegative(s);
    if (n == 1) return 0.0;
    if (s < kTinyS) return -1.0;
    return std::clamp(finite_parts(n, s).delta, -1.0, 1.0);
}

double scaled_gamma(int n, double s)
{
    require_degree(n);
    require_nonnegative(s);
    if (n == 1 || s < kTinyS) return 0.0;
    return std::max(finite_parts(n, s).gamma, 0.0);
}

double big_f(int n, double s)
{
    require_degree(n);
    require_nonnegative(s);
    if (n == 1 || s < kTinyS) return -1.0;
    const FiniteParts p = finite_parts(n, s);
    return hm1_clamped(p.delta) * p.gamma + p.gamma_minus_one;
}

double k_integrand(int n, double s)
{
    return big_f(n, s) / (1.0 + s * s / n);
}

double delta0(double s)
{
    require_nonnegative(s);
    if (s < kTinyS) return -1.0;
    const double x = s * s;
    return std::exp(-0.5 * x) * (-expm1mx(-x)) / d_of(x);
}

double gamma0(double s)
{
    require_nonnegative(s);
    if (s < kTinyS) return 0.0;
    const double x = s * s;
    const double one_m_e = -std::expm1(-x);
    return d_of(x) / (one_m_e * std::sqrt(one_m_e));
}

double delta1(double s)
{
    require_nonnegative(s);
    const double x = s * s;
    const double e = std::exp(-x);
    const double d = d_of(x);
    const double half = std::exp(-0.5 * x);
    const double first = 0.5 * x * x * half * (-expm1mx(-x)) * (1.0 + x) * e / (d * d);
    const double bracket = x + 0.25 * x * x - 0.25 * x * x * x - e * (x + 0.75 * x * x);
    return first + half * bracket / d;
}

double gamma1(double s)
{
    require_nonnegative(s);
    const double x = s * s;
    const double e = std::exp(-x);
    const double one_m_e = -std::expm1(-x);
    return x * x * e * (d_of(x) - 2.0 * x) / (4.0 * one_m_e * one_m_e * std::sqrt(one_m_e));
}

namespace detail {

double f0_series(double s) noexcept { return horner(kF0Taylor, s); }
double f1_series(double s) noexcept { return horner(kF1Taylor, s); }

double f0_closed(double s) noexcept
{
    const double g = gamma0(s);
    return hm1_clamped(delta0(s)) * g + gamma0_minus_one(s);
}

double f1_closed(double s) noexcept
{
    const double d0 = std::clamp(delta0(s), -1.0, 1.0);
    return h_clamped(d0) * gamma1(s) + delta1(s) * std::asin(d0) * gamma0(s)
           - s * s * f0_closed(s);
}

}  // namespace detail

double limit_profile(ProfileTag tag, double s)
{
    require_nonnegative(s);
    const bool series = s < kProfileSeriesSwitch;
    const auto f0 = [&] { return series ? detail::f0_series(s) : detail::f0_closed(s); };
    const auto f1 = [&] { return series ? detail::f1_series(s) : detail::f1_closed(s); };
    switch (tag) {
    case ProfileTag::f0: return f0();
    case ProfileTag::f1: return f1();
    case ProfileTag::g0: return s * f0();
    case ProfileTag::g1: return s * f1() - s * s * s / 3.0 * f0();
    default: break;
    }
    throw std::invalid_argument("limit_profile accepts f0, f1, g0, g1 only");
}

void ProfileFunction::validate() const
{
    const bool limit_tag = tag == ProfileTag::f0 || tag == ProfileTag::f1 || tag == ProfileTag::g0
                           || tag == ProfileTag::g1;
    if (limit_tag && n.has_value())
        throw std::invalid_argument("limit profiles take no finite degree");
    if (!limit_tag) {
        if (!n.has_value()) throw std::invalid_argument("finite-n profile requires a degree");
        require_degree(*n);
    }
}

double evaluate(const ProfileFunction& fn, double s)
{
    fn.validate();
    switch (fn.tag) {
    case ProfileTag::bigF: return big_f(*fn.n, s);
    case ProfileTag::delta: return scaled_delta(*fn.n, s);
    case ProfileTag::gamma: return scaled_gamma(*fn.n, s);
    default: return limit_profile(fn.tag, s);
    }
}

ProfileTag parse_profile_tag(std::string_view name)
{
    if (name == "f0") return ProfileTag::f0;
    if (name == "f1") return ProfileTag::f1;
    if (name == "g0") return ProfileTag::g0;
    if (name == "g1") return ProfileTag::g1;
    if (name == "bigF") return ProfileTag::bigF;
    if (name == "delta") return ProfileTag::delta;
    if (name == "gamma") return ProfileTag::gamma;
    throw std::invalid_argument("unknown profile '" + std::string(name) + "'");
}

}  // namespace ellzeros
