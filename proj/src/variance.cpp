#include "ellzeros/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ellzeros {

namespace {

constexpr double kPi = std::numbers::pi;

void require_degree(int n)
{
    if (n < 1) throw std::invalid_argument("degree n must be positive");
}

// floor() of a finite schedule value, or nullopt when it cannot be formed.
std::optional<int> schedule(double value)
{
    if (!std::isfinite(value)) return std::nullopt;
    return static_cast<int>(std::floor(value));
}

int capped(const std::optional<int>& k)
{
    if (!k) return 1;
    return std::clamp(*k, 0, 1);
}

double partial_sum(double c0, double c1, int order, double n)
{
    return order >= 1 ? c0 + c1 / n : c0;
}

}  // namespace

double expected_zeros(int n, const ExtendedInterval& interval)
{
    require_degree(n);
    const double root_n = std::sqrt(static_cast<double>(n));
    if (interval.is_real_line()) return root_n;
    return root_n / kPi * (std::atan(interval.b()) - std::atan(interval.a()));
}

VarianceReport variance_exact(int n, const ExtendedInterval& interval, double tol)
{
    require_degree(n);
    VarianceReport rep;
    rep.n = n;
    rep.interval = interval;
    rep.alpha = alpha_of(interval, n);
    rep.expectation = expected_zeros(n, interval);

    const double e = rep.expectation;
    const double root_n = std::sqrt(static_cast<double>(n));
    const double upper = std::fabs(rep.alpha.alpha_n);

    switch (rep.alpha.sign_case) {
    case SignCase::positive: {
        rep.K_ab = k_integral(n, upper, tol);
        rep.L_ab = l_integral(n, upper, tol);
        rep.variance_exact = (1.0 + rep.K_ab->value) * e - rep.L_ab->value;
        rep.error_estimate = e * rep.K_ab->abs_error_estimate + rep.L_ab->abs_error_estimate;
        break;
    }
    case SignCase::zero: {
        rep.K_full = k_integral(n, kInf, tol);
        rep.variance_exact = (1.0 + rep.K_full->value) * root_n;
        rep.error_estimate = root_n * rep.K_full->abs_error_estimate;
        break;
    }
    case SignCase::negative: {
        rep.K_full = k_integral(n, kInf, tol);
        rep.K_ab = k_integral(n, upper, tol);
        rep.L_ab = l_integral(n, upper, tol);
        const double kf = rep.K_full->value;
        rep.variance_exact = (1.0 + kf) * e + (kf - rep.K_ab->value) * (e - root_n)
                             - rep.L_ab->value;
        rep.error_estimate = e * rep.K_full->abs_error_estimate + rep.L_ab->abs_error_estimate
                             + std::fabs(e - root_n)
                                   * (rep.K_full->abs_error_estimate
                                      + rep.K_ab->abs_error_estimate);
        break;
    }
    }
    return rep;
}

double small_alpha_positive(int n, double alpha_n)
{
    const double a = alpha_n;
    const double nd = n;
    return a / kPi - a * a / (kPi * kPi) + a * a * a / (12.0 * kPi)
           - 5.0 * a * a * a / (12.0 * kPi * nd) + 2.0 * a * a * a * a / (3.0 * kPi * kPi * nd);
}

AsymptoticEstimate variance_asymptotic(int n, const ExtendedInterval& interval,
                                       const CoefficientSet& coeffs, double tol)
{
    require_degree(n);
    const AlphaParam alpha = alpha_of(interval, n);
    const double nd = n;
    const double root_n = std::sqrt(nd);
    const double log_n = std::log(nd);
    const double e = expected_zeros(n, interval);
    const double an = alpha.alpha_n;
    const double abs_an = std::fabs(an);
    const double k0 = coeffs.kappa0.value;
    const double k1 = coeffs.kappa1.value;

    AsymptoticEstimate est;

    if (alpha.sign_case == SignCase::zero) {
        est.regime = "full_line";
        est.plan.effective_order = 1;
        est.value = (1.0 + k0 + k1 / nd) * root_n;
        est.order_tag = "O(n^-3/2)";
        est.predicted_error = std::pow(nd, -1.5);
        return est;
    }

    if (abs_an >= kLargeAlpha) {
        est.regime = "large_alpha";
        if (n > 1) est.plan.d_n = schedule((an * an + 3.0 * std::log(abs_an)) / log_n);
        const int m = capped(est.plan.d_n);
        est.plan.effective_order = m;
        est.value = (1.0 + partial_sum(k0, k1, m, nd)) * e
                    - partial_sum(coeffs.ell0.value, coeffs.ell1.value, m, nd);
        // Capping the sum at k <= 1 leaves an O(E n^-(m+1)) residual which
        // dominates the exponentially small one of the full expansion.
        est.order_tag = m >= 1 ? "O(E n^-2)" : "O(E n^-1)";
        const double expo = std::isfinite(an) ? std::pow(an, 4) * std::exp(-an * an) : 0.0;
        est.predicted_error = e * std::pow(nd, -(m + 1)) + expo;
        return est;
    }

    if (abs_an > kSmallAlpha) {
        const CoefficientSet cc = coefficients(tol, abs_an);
        const double kc = partial_sum(cc.kappa_c0.value, cc.kappa_c1.value, 1, nd);
        const double lc = partial_sum(cc.ell_c0.value, cc.ell_c1.value, 1, nd);
        est.plan.effective_order = 1;
        est.order_tag = "O(E n^-2)";
        est.predicted_error = e / (nd * nd);
        if (alpha.sign_case == SignCase::positive) {
            est.regime = "fixed_alpha_positive";
            est.value = (1.0 + kc) * e - lc;
        } else {
            est.regime = "fixed_alpha_negative";
            const double kf = partial_sum(k0, k1, 1, nd);
            est.value = (1.0 + kf) * e - (kf - kc) * root_n / kPi * std::atan(abs_an / root_n)
                        - lc;
        }
        return est;
    }

    if (alpha.sign_case == SignCase::positive) {
        est.regime = "small_alpha_positive";
        est.plan.effective_order = 0;
        est.value = small_alpha_positive(n, an);
        est.order_tag = "O(alpha_n^5)";
        est.predicted_error = std::pow(abs_an, 5);
        return est;
    }

    est.regime = "small_alpha_negative";
    if (n > 1) {
        est.plan.q_n = schedule(0.5 - 5.0 * std::log(abs_an) / log_n);
        est.plan.r_n = schedule(-4.0 * std::log(abs_an) / log_n);
    }
    const int q = capped(est.plan.q_n);
    const int r = capped(est.plan.r_n);
    est.plan.effective_order = std::max(q, r);
    const double a = an;
    est.value = (1.0 + partial_sum(k0, k1, q, nd)) * root_n
                + 2.0 / kPi * (a - a * a * a / (3.0 * nd)) * partial_sum(k0, k1, r, nd)
                + a / kPi - a * a / (kPi * kPi) - a * a * a / (12.0 * kPi)
                - a * a * a / (4.0 * kPi * nd) + 2.0 * a * a * a * a / (3.0 * kPi * kPi * nd);
    est.order_tag = "O(|alpha_n|^5) + O(sqrt(n) n^-(q+1))";
    est.predicted_error = std::pow(abs_an, 5) + root_n * std::pow(nd, -(q + 1))
                          + abs_an * std::pow(nd, -(r + 1));
    return est;
}

AsymptoticEstimate variance_asymptotic(int n, const ExtendedInterval& interval, double tol)
{
    return variance_asymptotic(n, interval, coefficients(tol), tol);
}

std::vector<ExpansionRow> expansion_error_report(const std::vector<int>& n_list,
                                                 const IntervalFamily& family, double tol)
{
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) throw std::invalid_argument("n_list must be increasing");
    }
    std::vector<ExpansionRow> rows;
    if (n_list.empty()) return rows;
    const CoefficientSet coeffs = coefficients(tol);
    for (int n : n_list) {
        const ExtendedInterval iv = family(n);
        ExpansionRow row;
        row.n = n;
        row.exact = variance_exact(n, iv, tol).variance_exact;
        row.asymptotic = variance_asymptotic(n, iv, coeffs, tol).value;
        row.abs_diff = std::fabs(row.exact - row.asymptotic);
        row.scaled_diff = row.abs_diff * std::pow(static_cast<double>(n), 1.5);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ellzeros
