#pragma once

#include "ellzeros/interval.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ellzeros {

struct EllipticSample {
    int n = 0;
    std::vector<double> coeffs;  ///< omega_0 .. omega_n
};

/// n+1 standard normals. The draw depends only on (seed, stream): each stream
/// gets its own mt19937_64 seeded from both words through std::seed_seq.
[[nodiscard]] EllipticSample sample_coefficients(int n, std::uint64_t seed, std::uint64_t stream);

/// Q(theta) = sum_j omega_j sqrt(C(n,j)) sin^j(theta) cos^{n-j}(theta).
/// Zeros of Q in (-pi/2, pi/2) are the zeros of P in x = tan(theta).
/// Works for n up to about 2000 before the scale factor overflows.
class NormalizedEvaluator {
public:
    explicit NormalizedEvaluator(const EllipticSample& sample);
    [[nodiscard]] double operator()(double theta) const;

private:
    [[nodiscard]] double poly(double t, bool reversed) const;

    int n_;
    std::vector<double> c_;   ///< omega_j sqrt(C(n,j)) 2^{-n/2}
    std::vector<double> rc_;  ///< c_ reversed, for the cot form
};

[[nodiscard]] double eval_normalized(const EllipticSample& sample, double theta);

struct CountOptions {
    int oversample = 20;
    int max_bisect = 60;
    unsigned threads = 0;  ///< 0 means hardware concurrency
};

struct RefinementFlags {
    bool grid_disagreement = false;  ///< doubled grid found a different count
    int hidden_pairs = 0;            ///< pairs found inside a fine cell by probing
    int bracket_failures = 0;        ///< non-finite values met while bisecting
};

struct ZeroCountRecord {
    std::uint64_t sample_index = 0;
    int count = 0;
    RefinementFlags flags;
};

[[nodiscard]] ZeroCountRecord count_zeros(const EllipticSample& sample,
                                          const ExtendedInterval& interval,
                                          const CountOptions& opts = {});

struct SummaryStats {
    std::size_t m = 0;
    double mean = 0.0;
    double k2 = 0.0, k3 = 0.0, k4 = 0.0;
    double mu2 = 0.0, mu3 = 0.0, mu4 = 0.0;  ///< plug-in central moments (biased)
    double se_mean = 0.0, se_k2 = 0.0, se_k3 = 0.0;
};

/// Unbiased k-statistics. Needs m >= 2 for k2; k3 needs m >= 3 and k4 m >= 4
/// (left at 0 otherwise). Throws std::invalid_argument for m < 2.
[[nodiscard]] SummaryStats k_statistics(std::span<const double> values);
[[nodiscard]] SummaryStats k_statistics(std::span<const int> counts);

struct Experiment {
    std::vector<ZeroCountRecord> records;
    SummaryStats stats;
    std::size_t disagreements = 0;
};

/// m samples on streams 0..m-1. Parallel over samples; results do not depend
/// on the thread count.
[[nodiscard]] Experiment run_experiment(int n, const ExtendedInterval& interval, std::size_t m,
                                        std::uint64_t seed, const CountOptions& opts = {});

struct CltDiagnostic {
    double ks_distance = 0.0;
    bool lattice = false;  ///< integer data, continuity-corrected
    int lattice_span = 0;  ///< gcd of the spacings between observed values
    std::vector<double> standardized_moments;  ///< E[z^k] for k = 1..4
};

/// KS distance of (x - mean)/sqrt(var) to N(0,1). For integer-valued data on
/// a lattice of span h the empirical CDF at k is compared with
/// Phi((k + h/2 - mean)/sd).
/// Throws std::invalid_argument if var <= 0 or the data are constant.
[[nodiscard]] CltDiagnostic clt_diagnostic(std::span<const double> values, double exact_mean,
                                           double exact_var);

struct SllnRow {
    int n = 0;
    double ratio = 0.0;     ///< sample mean / expected_zeros
    double se_ratio = 0.0;
    double rms_rel = 0.0;   ///< sqrt(mean((N/E - 1)^2))
};

[[nodiscard]] std::vector<SllnRow> slln_trace(const std::vector<int>& n_list,
                                              const ExtendedInterval& interval, std::size_t m,
                                              std::uint64_t seed, const CountOptions& opts = {});

}  // namespace ellzeros
