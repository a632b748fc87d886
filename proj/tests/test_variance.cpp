#include <doctest.h>

#include "ellzeros/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace ellzeros;

namespace {

constexpr double kPi = std::numbers::pi;

double bernoulli_var(double a, double b)
{
    const double p = (std::atan(b) - std::atan(a)) / kPi;
    return p * (1.0 - p);
}

}  // namespace

TEST_CASE("interval validation and alpha")
{
    CHECK_THROWS_AS(ExtendedInterval(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ExtendedInterval(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ExtendedInterval(std::nan(""), 1.0), std::invalid_argument);
    CHECK(alpha_of(ExtendedInterval::real_line()).sign_case == SignCase::zero);
    CHECK(alpha_of({0.0, 1.0}, 4).alpha == 1.0);
    CHECK(alpha_of({0.0, 1.0}, 4).alpha_n == 2.0);
    CHECK(alpha_of({-2.0, 1.0}).sign_case == SignCase::negative);
    CHECK(alpha_of({0.0, kInf}).alpha == kInf);
    CHECK(alpha_of({-kInf, 0.0}).alpha == kInf);
    CHECK(alpha_of({-1.0, kInf}).alpha == -1.0);
    CHECK(alpha_of({-kInf, 4.0}).alpha == -0.25);
    CHECK(alpha_of({-1.0, 1.0}).sign_case == SignCase::positive);
    CHECK(parse_extended("-inf") == -kInf);
    CHECK(parse_extended("+inf") == kInf);
    CHECK(parse_extended("0.25") == 0.25);
    CHECK_THROWS_AS(parse_extended("abc"), std::invalid_argument);

    // zero only for the full line, negative forces ab < -1
    const double pts[] = {-kInf, -3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0, kInf};
    for (double a : pts) {
        for (double b : pts) {
            if (!(a < b)) continue;
            const ExtendedInterval iv(a, b);
            const AlphaParam al = alpha_of(iv);
            CHECK((al.sign_case == SignCase::zero) == iv.is_real_line());
            if (al.sign_case == SignCase::negative && iv.is_finite()) CHECK(a * b < -1.0);
        }
    }
}

TEST_CASE("expectation")
{
    CHECK(expected_zeros(50, ExtendedInterval::real_line()) == std::sqrt(50.0));
    CHECK(expected_zeros(9, {0.0, kInf}) == doctest::Approx(1.5).epsilon(1e-15));
    const double a = -1.3, b = 0.4, c = 7.0;
    for (int n : {1, 5, 300}) {
        const double whole = expected_zeros(n, {a, c});
        const double parts = expected_zeros(n, {a, b}) + expected_zeros(n, {b, c});
        CHECK(whole == doctest::Approx(parts).epsilon(1e-15));
        CHECK(whole <= n);
    }
}

TEST_CASE("frozen exact variances")
{
    // tests/oracle/variance.py (mpmath, 40 digits)
    struct Row {
        int n;
        double a, b, var;
    };
    const Row rows[] = {
        {10, 0.0, 1.0, 0.49891549670556307271},
        {5, -2.0, 1.0, 0.79025196606040280131},
        {20, -1.0, 2.0, 1.5784509683681886945},
        {5, 0.0, 1.0, 0.36500813825433766392},
        {100, -kInf, kInf, 5.7021366078110649857},
        {10000, -kInf, kInf, 57.171582877065117795},
        {10000, -kInf, 100.0, 57.050570764539915894},
        {50, -kInf, kInf, 4.0213596790569833281},
        {256, -kInf, kInf, 9.1381951095680039532},
        {7, -1.0, kInf, 1.153265902173717381},
    };
    for (const auto& r : rows) {
        CAPTURE(r.n);
        CAPTURE(r.a);
        CAPTURE(r.b);
        const VarianceReport rep = variance_exact(r.n, {r.a, r.b});
        CHECK(rep.variance_exact == doctest::Approx(r.var).epsilon(1e-10));
        CHECK(rep.error_estimate < 1e-8);
    }
}

TEST_CASE("degree one is Bernoulli")
{
    CHECK(std::fabs(variance_exact(1, ExtendedInterval::real_line()).variance_exact) <= 1e-12);
    CHECK(variance_exact(1, {0.0, kInf}).variance_exact == doctest::Approx(0.25).epsilon(1e-10));
    const double pts[] = {-kInf, -4.0, -1.0, -0.2, 0.0, 0.3, 2.0, kInf};
    for (double a : pts) {
        for (double b : pts) {
            if (!(a < b) || (a == -kInf && b == kInf)) continue;
            CAPTURE(a);
            CAPTURE(b);
            CHECK(std::fabs(variance_exact(1, {a, b}).variance_exact - bernoulli_var(a, b)) <= 1e-10);
        }
    }
}

TEST_CASE("report fields follow the case")
{
    const VarianceReport pos = variance_exact(10, {0.0, 1.0});
    CHECK(pos.sign_case() == SignCase::positive);
    CHECK(pos.K_ab.has_value());
    CHECK(pos.L_ab.has_value());
    CHECK_FALSE(pos.K_full.has_value());

    const VarianceReport zero = variance_exact(10, ExtendedInterval::real_line());
    CHECK(zero.sign_case() == SignCase::zero);
    CHECK(zero.K_full.has_value());
    CHECK(zero.expectation == std::sqrt(10.0));

    const VarianceReport neg = variance_exact(10, {-2.0, 1.0});
    CHECK(neg.sign_case() == SignCase::negative);
    CHECK(neg.K_ab.has_value());
    CHECK(neg.K_full.has_value());
    CHECK(neg.L_ab.has_value());
}

TEST_CASE("symmetry and nonnegativity")
{
    const double pts[] = {-kInf, -5.0, -1.0, -0.3, 0.0, 0.7, 2.0, kInf};
    for (int n : {2, 7, 64, 1000}) {
        for (double a : pts) {
            for (double b : pts) {
                if (!(a < b)) continue;
                CAPTURE(n);
                CAPTURE(a);
                CAPTURE(b);
                const VarianceReport r = variance_exact(n, {a, b});
                const VarianceReport m = variance_exact(n, ExtendedInterval(a, b).reflected());
                CHECK(r.variance_exact == m.variance_exact);
                CHECK(r.variance_exact >= -r.error_estimate);
                CHECK(r.expectation <= n);
            }
        }
        CHECK(variance_exact(n, ExtendedInterval::real_line()).variance_exact > 0.0);
    }
}

TEST_CASE("full-line expansion has an n^-3/2 residual")
{
    const auto rows = expansion_error_report(
        {100, 400, 1600}, [](int) { return ExtendedInterval::real_line(); }, 1e-13);
    REQUIRE(rows.size() == 3);
    double lo = 1e300, hi = 0.0;
    for (const auto& r : rows) {
        lo = std::min(lo, r.scaled_diff);
        hi = std::max(hi, r.scaled_diff);
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo < 3.0);
    CHECK_THROWS_AS(
        expansion_error_report({400, 100}, [](int) { return ExtendedInterval::real_line(); }),
        std::invalid_argument);
}

TEST_CASE("fixed alpha expansion has an E n^-2 residual")
{
    for (double c : {2.0, 5.0, -2.0}) {
        std::vector<double> scaled;
        for (int n : {100, 1000, 10000}) {
            const double rn = std::sqrt(double(n));
            // alpha_n = c: (0, c/sqrt n) for c > 0, (sqrt(n)/c, inf) for c < 0
            const ExtendedInterval iv = c > 0 ? ExtendedInterval(0.0, c / rn) : ExtendedInterval(rn / c, kInf);
            const VarianceReport r = variance_exact(n, iv, 1e-13);
            CHECK(r.alpha.alpha_n == doctest::Approx(c).epsilon(1e-12));
            const AsymptoticEstimate a = variance_asymptotic(n, iv, 1e-13);
            CHECK(a.regime == (c > 0 ? "fixed_alpha_positive" : "fixed_alpha_negative"));
            scaled.push_back(std::fabs(a.value - r.variance_exact) * n * n / r.expectation);
        }
        CAPTURE(c);
        const double lo = *std::min_element(scaled.begin(), scaled.end());
        const double hi = *std::max_element(scaled.begin(), scaled.end());
        CHECK(lo > 0.0);
        CHECK(hi / lo < 3.0);
    }
}

TEST_CASE("small alpha polynomial")
{
    // residual against the exact variance shrinks like alpha_n^5 at n = 1e6
    const int n = 1000000;
    std::vector<double> res;
    for (double an : {0.1, 0.05, 0.025}) {
        const ExtendedInterval iv(0.0, an / 1000.0);
        const double exact = variance_exact(n, iv, 1e-15).variance_exact;
        res.push_back(std::fabs(exact - small_alpha_positive(n, an)));
        const AsymptoticEstimate a = variance_asymptotic(n, iv);
        CHECK(a.regime == "small_alpha_positive");
        CHECK(a.value == small_alpha_positive(n, an));
    }
    CHECK(res[0] / std::pow(0.1, 4) < 1e-3);
    CHECK(res[0] / res[1] > 16.0);
    CHECK(res[1] / res[2] > 16.0);
    CHECK(variance_exact(n, {0.0, 1e-4}, 1e-15).variance_exact
          == doctest::Approx(0.0308442960530557).epsilon(1e-11));
}

TEST_CASE("regime dispatch and schedules")
{
    const AsymptoticEstimate full = variance_asymptotic(400, ExtendedInterval::real_line());
    CHECK(full.regime == "full_line");
    CHECK(full.plan.effective_order <= 1);

    const AsymptoticEstimate large = variance_asymptotic(100, {0.0, 10.0});
    CHECK(large.regime == "large_alpha");
    REQUIRE(large.plan.d_n.has_value());
    CHECK(*large.plan.d_n == 2174);
    CHECK(large.plan.effective_order == 1);

    const AsymptoticEstimate sneg = variance_asymptotic(10000, {-1000.0, kInf});
    CHECK(sneg.regime == "small_alpha_negative");
    CHECK(sneg.plan.q_n.has_value());
    CHECK(sneg.plan.r_n.has_value());
    CHECK(sneg.plan.effective_order <= 1);
    const double exact = variance_exact(10000, {-1000.0, kInf}).variance_exact;
    CHECK(std::fabs(sneg.value - exact) < 1e-3 * exact);

    const AsymptoticEstimate one = variance_asymptotic(1, {0.0, 100.0});
    CHECK_FALSE(one.plan.d_n.has_value());

    // large-alpha truncation error falls with n at fixed alpha_n
    double prev = 1e300;
    for (int n : {100, 1000, 10000}) {
        const ExtendedInterval iv(0.0, 100.0 / std::sqrt(double(n)));
        const double d = std::fabs(variance_asymptotic(n, iv, 1e-13).value
                                   - variance_exact(n, iv, 1e-13).variance_exact);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("inputs")
{
    CHECK_THROWS_AS(variance_exact(0, ExtendedInterval::real_line()), std::invalid_argument);
    CHECK_THROWS_AS(variance_exact(5, {0.0, 1.0}, -1.0), std::invalid_argument);
}
