// Statistical machinery: Spearman rank correlation with exact and
// t-approximated significance tests, minimum-series-length rule, binomial
// tail flags for count tables, Fisher randomization test, lowess smoothing,
// two-segment breakpoint regression and one-way ANOVA.
//
// The Monte Carlo kernels (randomization test, breakpoint bootstrap) come in
// two flavors: an OpenMP-parallel entry point used by the analysis layer and
// a serial reference loop kept for testing and benchmarking. Both consume
// counter-based RNG substreams, so they agree bit for bit.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace polysemy::stats {

enum class SignClass { Positive, Negative };
enum class SigClass { Positive, Negative, NonSignificant };
enum class TailFlag { High, Low, None };
enum class ArrowMode { Exact, NormalApprox };

struct CorrelationResult {
    double rho = 0.0;
    double p_value = 1.0;
    int n_points = 0;
    SignClass sign = SignClass::Negative;
    SigClass significance = SigClass::NonSignificant;
};

struct RoleSummary {
    int n = 0;
    int corr_positive = 0;
    int corr_negative = 0;
    int sig_positive = 0;
    int sig_negative = 0;
    int sig_none = 0;
    TailFlag corr_positive_flag = TailFlag::None;
    TailFlag corr_negative_flag = TailFlag::None;
    TailFlag sig_positive_flag = TailFlag::None;
    TailFlag sig_negative_flag = TailFlag::None;
    TailFlag sig_none_flag = TailFlag::None;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rss = 0.0;
};

struct BreakpointFit {
    double break_age = 0.0;
    LineFit left;
    LineFit right;
    double rss_total = 0.0;
    double rss_single_line = 0.0;
    int split_index = 0;  // first point of the right segment (sorted order)
    std::optional<std::pair<double, double>> bootstrap_ci95;
};

struct AnovaResult {
    double f = 0.0;
    double p_two_sided = 1.0;
    double p_one_tailed = 1.0;
};

// Average ranks with tie handling (rank 1 = smallest value).
std::vector<double> average_ranks(std::span<const double> values);

// Spearman rho: Pearson correlation of the tie-averaged ranks.
// Throws std::invalid_argument when either vector is constant or sizes differ.
double spearman(std::span<const double> x, std::span<const double> y);

// Two-sided significance: exact permutation distribution for n <= exact_limit,
// t approximation with n-2 degrees of freedom above it.
CorrelationResult spearman_test(std::span<const double> x, std::span<const double> y,
                                double alpha = 0.05, int exact_limit = 9);

// Smallest series length m >= 2 such that 2/m! does not exceed alpha.
// Individuals with fewer time points cannot reach significance and are
// excluded from the count tables.
int min_series_length(double alpha);

// Flags whether `count` successes out of `n` are significantly high or low
// under Binomial(n, p_null). Exact mode sums binomial tails; the normal
// mode uses the Gaussian approximation with continuity correction.
TailFlag tail_flag(int count, int n, double p_null, double alpha = 0.05,
                   ArrowMode mode = ArrowMode::Exact);

// Exact binomial tail probabilities.
double binomial_upper_tail(int count, int n, double p);  // P(X >= count)
double binomial_lower_tail(int count, int n, double p);  // P(X <= count)

// Tallies correlation results into the five counts and attaches tail flags
// (null models: sign counts ~ B(N, 1/2), significant counts ~ B(N, alpha/2),
// non-significant ~ B(N, 1 - alpha)).
RoleSummary classify_counts(std::span<const CorrelationResult> results, double alpha = 0.05,
                            ArrowMode mode = ArrowMode::Exact);

// Fisher randomization test for |mean(a) - mean(b)| with `rounds` label
// shuffles. Returns (1 + exceedances) / (rounds + 1).
double fisher_randomization(std::span<const double> a, std::span<const double> b,
                            std::int64_t rounds = 100000, std::uint64_t seed = 42);

// Round-counting kernels behind fisher_randomization. The parallel kernel
// partitions rounds across OpenMP threads; the serial one is the reference.
std::int64_t fisher_exceedance_count(std::span<const double> a, std::span<const double> b,
                                     std::int64_t rounds, std::uint64_t seed);
std::int64_t fisher_exceedance_count_serial(std::span<const double> a, std::span<const double> b,
                                            std::int64_t rounds, std::uint64_t seed);

// Locally weighted scatterplot smoothing (tricube weights, no robustness
// iterations when iters = 0). Input pairs are sorted by (x, y) internally;
// the output is one smoothed pair per input point in that order.
std::vector<std::pair<double, double>> lowess(std::span<const std::pair<double, double>> points,
                                              double frac = 1.0 / 3.0, int iters = 0);

int default_min_segment(int n_points);  // max(3, ceil(0.15 * n))

// Exhaustive single-breakpoint search: fits independent least-squares lines
// left and right of every admissible split and keeps the split with minimal
// total residual sum of squares (the last split on exact ties).
BreakpointFit fit_single_breakpoint(std::span<const std::pair<double, double>> points,
                                    int min_segment = 0);

// Percentile bootstrap over point resamples; returns one break age per
// resample, indexed by resample so the parallel and serial kernels agree.
std::vector<double> bootstrap_break_ages(std::span<const std::pair<double, double>> points,
                                         int min_segment, int resamples, std::uint64_t seed);
std::vector<double> bootstrap_break_ages_serial(std::span<const std::pair<double, double>> points,
                                                int min_segment, int resamples, std::uint64_t seed);

// Attaches a 95% percentile bootstrap interval to a fitted breakpoint.
BreakpointFit fit_single_breakpoint_with_ci(std::span<const std::pair<double, double>> points,
                                            int min_segment, int resamples, std::uint64_t seed);

// One-way fixed-factor ANOVA with two groups, df (1, n - 2). The one-tailed
// p-value is half the two-sided one when mean(first) < mean(second), else
// 1 - p_two/2.
AnovaResult anova_one_way(std::span<const double> group_first, std::span<const double> group_second);

}  // namespace polysemy::stats
