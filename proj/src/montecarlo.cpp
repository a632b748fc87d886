#include "ellzeros/montecarlo.hpp"

#include "ellzeros/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace ellzeros {

namespace {

constexpr double kPi = std::numbers::pi;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

unsigned thread_count(unsigned requested, std::size_t work)
{
    unsigned t = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(work, 1)));
}

// Runs body(i) for i in [0, count) over `threads` contiguous chunks.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body body)
{
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

EllipticSample sample_coefficients(int n, std::uint64_t seed, std::uint64_t stream)
{
    if (n < 0) throw std::invalid_argument("degree must be >= 0");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 gen(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    EllipticSample s;
    s.n = n;
    s.coeffs.resize(static_cast<std::size_t>(n) + 1);
    for (double& c : s.coeffs) c = normal(gen);
    return s;
}

NormalizedEvaluator::NormalizedEvaluator(const EllipticSample& sample) : n_(sample.n)
{
    if (sample.coeffs.size() != static_cast<std::size_t>(n_) + 1)
        throw std::invalid_argument("sample must hold n+1 coefficients");
    const double nd = n_;
    const double log_fact_n = std::lgamma(nd + 1.0);
    c_.resize(sample.coeffs.size());
    for (int j = 0; j <= n_; ++j) {
        const double log_binom = log_fact_n - std::lgamma(j + 1.0) - std::lgamma(nd - j + 1.0);
        c_[j] = sample.coeffs[j] * std::exp(0.5 * log_binom - 0.5 * nd * std::numbers::ln2);
    }
    rc_.assign(c_.rbegin(), c_.rend());
}

double NormalizedEvaluator::operator()(double theta) const
{
    // Polynomial in tan on |theta| <= pi/4 and in cot outside, so the variable
    // never exceeds 1 in magnitude. (sqrt2 cos)^n undoes the 2^{-n/2}.
    if (std::fabs(theta) <= 0.25 * kPi) {
        const double t = std::tan(theta);
        return poly(t, false) * std::pow(std::numbers::sqrt2 * std::cos(theta), n_);
    }
    const double u = std::cos(theta) / std::sin(theta);
    return poly(u, true) * std::pow(std::numbers::sqrt2 * std::sin(theta), n_);
}

double NormalizedEvaluator::poly(double t, bool reversed) const
{
    // Horner on even and odd coefficients in t^2: two independent chains.
    const std::vector<double>& c = reversed ? rc_ : c_;
    const double t2 = t * t;
    double even = 0.0;
    double odd = 0.0;
    int k = n_;
    if (k % 2 == 0) {
        even = c[k];
        --k;
    }
    for (; k >= 1; k -= 2) {
        odd = odd * t2 + c[k];
        even = even * t2 + c[k - 1];
    }
    return even + t * odd;
}

double eval_normalized(const EllipticSample& sample, double theta)
{
    return NormalizedEvaluator(sample)(theta);
}

namespace {

int count_sign_changes(const std::vector<double>& v, std::size_t stride)
{
    int count = 0;
    int last = 0;
    for (std::size_t i = 0; i < v.size(); i += stride) {
        const int s = sign_of(v[i]);
        const bool interior = i != 0 && i + stride < v.size();
        if (s == 0) {
            if (interior) ++count;  // a grid point landed on a root
            last = 0;
            continue;
        }
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

}  // namespace

ZeroCountRecord count_zeros(const EllipticSample& sample, const ExtendedInterval& interval,
                            const CountOptions& opts)
{
    if (opts.oversample < 1) throw std::invalid_argument("oversample must be >= 1");
    ZeroCountRecord rec;
    const int n = sample.n;
    if (n == 0) return rec;

    const NormalizedEvaluator q(sample);
    // Infinite endpoints map to theta = -+pi/2, where Q equals -+omega_n
    // (up to sign); the open interval never contains them.
    const double ta = std::atan(interval.a());
    const double tb = std::atan(interval.b());
    const double spacing = kPi / std::sqrt(static_cast<double>(n)) / opts.oversample;
    const auto cells = static_cast<std::size_t>(std::ceil((tb - ta) / spacing));
    const std::size_t fine = 2 * std::max<std::size_t>(cells, 1);

    std::vector<double> theta(fine + 1);
    std::vector<double> value(fine + 1);
    for (std::size_t i = 0; i <= fine; ++i) {
        theta[i] = i == fine ? tb : ta + (tb - ta) * static_cast<double>(i) / static_cast<double>(fine);
        value[i] = q(theta[i]);
    }

    const int coarse_count = count_sign_changes(value, 2);
    const int fine_count = count_sign_changes(value, 1);
    rec.flags.grid_disagreement = coarse_count != fine_count;
    rec.count = fine_count;

    // A local minimum of |Q| between same-signed neighbours may hide a pair
    // of zeros closer than the fine spacing; probe it on a 32-point subgrid.
    constexpr int kProbe = 32;
    for (std::size_t i = 1; i < fine; ++i) {
        const int s = sign_of(value[i]);
        if (s == 0 || sign_of(value[i - 1]) != s || sign_of(value[i + 1]) != s) continue;
        const double mag = std::fabs(value[i]);
        if (mag > std::fabs(value[i - 1]) || mag > std::fabs(value[i + 1])) continue;
        std::vector<double> sub(kProbe + 1);
        sub[0] = value[i - 1];
        sub[kProbe] = value[i + 1];
        for (int k = 1; k < kProbe; ++k) {
            sub[k] = q(theta[i - 1] + (theta[i + 1] - theta[i - 1]) * k / kProbe);
        }
        const int extra = count_sign_changes(sub, 1);
        rec.flags.hidden_pairs += extra / 2;
        rec.count += extra;
    }

    // Bisect every bracket to ~1e-9 in theta. Only the bracket matters for
    // the count; a non-finite value met while refining is reported.
    for (std::size_t i = 0; i < fine; ++i) {
        if (sign_of(value[i]) * sign_of(value[i + 1]) >= 0) continue;
        double lo = theta[i];
        double hi = theta[i + 1];
        const int slo = sign_of(value[i]);
        for (int it = 0; it < opts.max_bisect && hi - lo > 1e-9; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double vm = q(mid);
            if (!std::isfinite(vm)) {
                ++rec.flags.bracket_failures;
                break;
            }
            const int sm = sign_of(vm);
            if (sm == 0) break;
            if (sm == slo) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    if (rec.count > n) rec.count = n;
    return rec;
}

SummaryStats k_statistics(std::span<const double> x)
{
    const std::size_t m = x.size();
    if (m < 2) throw std::invalid_argument("k-statistics need at least two values");
    const double md = static_cast<double>(m);

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= md;

    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0, s6 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        s1 += d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
        s6 += d2 * d2 * d2;
    }

    SummaryStats st;
    st.m = m;
    st.mean = mean;
    st.k2 = std::max((md * s2 - s1 * s1) / (md * (md - 1.0)), 0.0);
    st.mu2 = s2 / md;
    st.mu3 = s3 / md;
    st.mu4 = s4 / md;
    if (m >= 3) {
        st.k3 = (md * md * s3 - 3.0 * md * s2 * s1 + 2.0 * s1 * s1 * s1)
                / (md * (md - 1.0) * (md - 2.0));
    }
    if (m >= 4) {
        st.k4 = ((md * md * md + md * md) * s4 - 4.0 * (md * md + md) * s3 * s1
                 - 3.0 * (md * md - md) * s2 * s2 + 12.0 * md * s2 * s1 * s1
                 - 6.0 * s1 * s1 * s1 * s1)
                / (md * (md - 1.0) * (md - 2.0) * (md - 3.0));
    }

    st.se_mean = std::sqrt(st.k2 / md);
    st.se_k2 = std::sqrt(std::max(st.k4 / md + 2.0 * st.k2 * st.k2 / (md - 1.0), 0.0));
    if (m >= 4) {
        // Sampling variance of k3 in terms of population cumulants, with the
        // sixth one taken from plug-in central moments.
        const double mu6 = s6 / md;
        const double kappa6 = mu6 - 15.0 * st.mu4 * st.mu2 - 10.0 * st.mu3 * st.mu3
                              + 30.0 * st.mu2 * st.mu2 * st.mu2;
        const double var_k3 = kappa6 / md + 9.0 * st.k2 * st.k4 / (md - 1.0)
                              + 9.0 * st.k3 * st.k3 / (md - 1.0)
                              + 6.0 * md * st.k2 * st.k2 * st.k2 / ((md - 1.0) * (md - 2.0));
        st.se_k3 = std::sqrt(std::max(var_k3, 0.0));
    }
    return st;
}

SummaryStats k_statistics(std::span<const int> counts)
{
    std::vector<double> v(counts.begin(), counts.end());
    return k_statistics(std::span<const double>(v));
}

Experiment run_experiment(int n, const ExtendedInterval& interval, std::size_t m,
                          std::uint64_t seed, const CountOptions& opts)
{
    if (n < 1) throw std::invalid_argument("degree n must be positive");
    if (m < 2) throw std::invalid_argument("need at least two samples");
    Experiment ex;
    ex.records.resize(m);
    parallel_for(m, thread_count(opts.threads, m), [&](std::size_t i) {
        const EllipticSample s = sample_coefficients(n, seed, i);
        ZeroCountRecord r = count_zeros(s, interval, opts);
        r.sample_index = i;
        ex.records[i] = r;
    });
    std::vector<double> counts(m);
    for (std::size_t i = 0; i < m; ++i) {
        counts[i] = ex.records[i].count;
        if (ex.records[i].flags.grid_disagreement) ++ex.disagreements;
    }
    ex.stats = k_statistics(std::span<const double>(counts));
    return ex;
}

CltDiagnostic clt_diagnostic(std::span<const double> values, double exact_mean, double exact_var)
{
    if (!(exact_var > 0.0)) throw std::invalid_argument("exact variance must be positive");
    if (values.size() < 2) throw std::invalid_argument("need at least two values");
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; }))
        throw std::invalid_argument("constant data: no spread to standardize");

    const double sd = std::sqrt(exact_var);
    const double md = static_cast<double>(values.size());
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    CltDiagnostic out;
    out.lattice = std::all_of(sorted.begin(), sorted.end(),
                              [](double v) { return std::floor(v) == v; });
    double d = 0.0;
    if (out.lattice) {
        // Counts on R for even n are all even, so the span is found from the
        // data; the normal CDF is read half a span above each lattice point.
        long long span = 0;
        const auto base = static_cast<long long>(sorted.front());
        for (double v : sorted) span = std::gcd(span, static_cast<long long>(v) - base);
        out.lattice_span = static_cast<int>(span);
        const auto top = static_cast<long long>(sorted.back());
        std::size_t below = 0;
        for (long long k = base - span; k <= top; k += span) {
            while (below < sorted.size() && sorted[below] <= static_cast<double>(k)) ++below;
            const double emp = static_cast<double>(below) / md;
            const double mid = static_cast<double>(k) + 0.5 * static_cast<double>(span);
            const double ref = normal_cdf((mid - exact_mean) / sd);
            d = std::max(d, std::fabs(emp - ref));
        }
    } else {
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const double f = normal_cdf((sorted[i] - exact_mean) / sd);
            d = std::max({d, static_cast<double>(i + 1) / md - f, f - static_cast<double>(i) / md});
        }
    }
    out.ks_distance = d;

    out.standardized_moments.assign(4, 0.0);
    for (double v : values) {
        const double z = (v - exact_mean) / sd;
        double p = 1.0;
        for (int k = 0; k < 4; ++k) {
            p *= z;
            out.standardized_moments[k] += p;
        }
    }
    for (double& s : out.standardized_moments) s /= md;
    return out;
}

std::vector<SllnRow> slln_trace(const std::vector<int>& n_list, const ExtendedInterval& interval,
                                std::size_t m, std::uint64_t seed, const CountOptions& opts)
{
    std::vector<SllnRow> rows;
    for (int n : n_list) {
        const Experiment ex = run_experiment(n, interval, m, seed, opts);
        const double e = expected_zeros(n, interval);
        SllnRow row;
        row.n = n;
        row.ratio = ex.stats.mean / e;
        row.se_ratio = ex.stats.se_mean / e;
        double acc = 0.0;
        for (const auto& r : ex.records) {
            const double rel = r.count / e - 1.0;
            acc += rel * rel;
        }
        row.rms_rel = std::sqrt(acc / static_cast<double>(m));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ellzeros
