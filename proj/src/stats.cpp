#include "polysemy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "polysemy/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polysemy::stats {

namespace {

constexpr double kRhoTieEps = 1e-12;     // FP slack when comparing |rho| values
constexpr double kStatTieEps = 1e-9;     // FP slack for randomization statistics

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double clamp_unit(double rho) { return std::min(1.0, std::max(-1.0, rho)); }

// Pearson correlation of two equal-length vectors; throws on zero variance.
double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw std::invalid_argument("correlation undefined: constant input vector");
    return clamp_unit(sxy / std::sqrt(sxx * syy));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double log_binom_pmf(int k, int n, double p) {
    if (p <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
           k * std::log(p) + (n - k) * std::log1p(-p);
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j + 1);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        i = j;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: size mismatch");
    if (x.size() < 2) throw std::invalid_argument("spearman: need at least 2 points");
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    return pearson(rx, ry);
}

namespace {

// Exact two-sided permutation p-value: fraction of the m! orderings of the
// y-ranks whose |rho| reaches the observed one. Heap's algorithm enumerates
// the orderings in place.
double exact_permutation_pvalue(const std::vector<double>& rx, std::vector<double> ry,
                                double rho_obs) {
    const std::size_t m = rx.size();
    const double mx = mean_of(rx);
    std::vector<double> xc(m);
    for (std::size_t i = 0; i < m; ++i) xc[i] = rx[i] - mx;
    double sxx = 0.0;
    for (double v : xc) sxx += v * v;
    const double my = mean_of(ry);
    double syy = 0.0;
    for (double v : ry) syy += (v - my) * (v - my);
    const double denom = std::sqrt(sxx * syy);
    const double threshold = std::fabs(rho_obs) - kRhoTieEps;

    std::uint64_t total = 0, hits = 0;
    std::vector<std::size_t> c(m, 0);
    const auto visit = [&]() {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += xc[i] * ry[i];
        ++total;
        if (std::fabs(dot / denom) >= threshold) ++hits;
    };
    visit();
    std::size_t i = 0;
    while (i < m) {
        if (c[i] < i) {
            if (i % 2 == 0)
                std::swap(ry[0], ry[i]);
            else
                std::swap(ry[c[i]], ry[i]);
            visit();
            ++c[i];
            i = 0;
        } else {
            c[i] = 0;
            ++i;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

CorrelationResult spearman_test(std::span<const double> x, std::span<const double> y,
                                double alpha, int exact_limit) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman_test: size mismatch");
    const int m = static_cast<int>(x.size());
    if (m < 2) throw std::invalid_argument("spearman_test: need at least 2 points");
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double rho = pearson(rx, ry);

    double p;
    if (m <= exact_limit) {
        p = exact_permutation_pvalue(rx, ry, rho);
    } else {
        const double one_minus_r2 = 1.0 - rho * rho;
        if (one_minus_r2 <= 0.0) {
            p = std::numeric_limits<double>::denorm_min();
        } else {
            const double t = std::fabs(rho) * std::sqrt((m - 2) / one_minus_r2);
            boost::math::students_t_distribution<double> dist(m - 2);
            p = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
        }
    }
    p = std::min(1.0, std::max(p, std::numeric_limits<double>::denorm_min()));

    CorrelationResult result;
    result.rho = rho;
    result.p_value = p;
    result.n_points = m;
    result.sign = rho > 0.0 ? SignClass::Positive : SignClass::Negative;
    if (p <= alpha && rho > 0.0)
        result.significance = SigClass::Positive;
    else if (p <= alpha && rho < 0.0)
        result.significance = SigClass::Negative;
    else
        result.significance = SigClass::NonSignificant;
    return result;
}

int min_series_length(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("min_series_length: alpha must be in (0, 1]");
    int m = 2;
    double v = 1.0;  // 2/2!
    while (v > alpha) {
        ++m;
        v /= m;
    }
    return m;
}

double binomial_upper_tail(int count, int n, double p) {
    if (count <= 0) return 1.0;
    if (count > n) return 0.0;
    double sum = 0.0;
    for (int k = count; k <= n; ++k) sum += std::exp(log_binom_pmf(k, n, p));
    return std::min(sum, 1.0);
}

double binomial_lower_tail(int count, int n, double p) {
    if (count >= n) return 1.0;
    if (count < 0) return 0.0;
    double sum = 0.0;
    for (int k = 0; k <= count; ++k) sum += std::exp(log_binom_pmf(k, n, p));
    return std::min(sum, 1.0);
}

TailFlag tail_flag(int count, int n, double p_null, double alpha, ArrowMode mode) {
    if (count < 0 || count > n || n < 0) throw std::invalid_argument("tail_flag: bad count");
    if (n == 0) return TailFlag::None;
    double upper, lower;
    const double sigma = std::sqrt(n * p_null * (1.0 - p_null));
    if (mode == ArrowMode::NormalApprox && sigma > 0.0) {
        // continuity-corrected Gaussian tails
        upper = 1.0 - normal_cdf((count - 0.5 - n * p_null) / sigma);
        lower = normal_cdf((count + 0.5 - n * p_null) / sigma);
    } else {
        upper = binomial_upper_tail(count, n, p_null);
        lower = binomial_lower_tail(count, n, p_null);
    }
    if (upper <= alpha) return TailFlag::High;
    if (lower <= alpha) return TailFlag::Low;
    return TailFlag::None;
}

RoleSummary classify_counts(std::span<const CorrelationResult> results, double alpha,
                            ArrowMode mode) {
    RoleSummary s;
    s.n = static_cast<int>(results.size());
    for (const CorrelationResult& r : results) {
        if (r.sign == SignClass::Positive)
            ++s.corr_positive;
        else
            ++s.corr_negative;
        switch (r.significance) {
            case SigClass::Positive: ++s.sig_positive; break;
            case SigClass::Negative: ++s.sig_negative; break;
            case SigClass::NonSignificant: ++s.sig_none; break;
        }
    }
    if (s.n == 0) return s;
    s.corr_positive_flag = tail_flag(s.corr_positive, s.n, 0.5, alpha, mode);
    s.corr_negative_flag = tail_flag(s.corr_negative, s.n, 0.5, alpha, mode);
    s.sig_positive_flag = tail_flag(s.sig_positive, s.n, alpha / 2.0, alpha, mode);
    s.sig_negative_flag = tail_flag(s.sig_negative, s.n, alpha / 2.0, alpha, mode);
    s.sig_none_flag = tail_flag(s.sig_none, s.n, 1.0 - alpha, alpha, mode);
    return s;
}

namespace {

struct ShuffleWorkspace {
    std::vector<std::uint32_t> idx;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> swaps;

    explicit ShuffleWorkspace(std::size_t n) : idx(n) {
        std::iota(idx.begin(), idx.end(), std::uint32_t{0});
    }
};

// One randomization round: samples |a| pool positions without replacement,
// evaluates |mean'(a) - mean'(b)| and restores the identity permutation so
// every round starts from the same state regardless of thread partitioning.
bool round_exceeds(const std::vector<double>& pool, std::size_t na, double sum_total,
                   double threshold, CounterRng rng, ShuffleWorkspace& ws) {
    const std::size_t n = pool.size();
    const std::size_t nb = n - na;
    ws.swaps.clear();
    double sum_a = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
        if (j != i) {
            std::swap(ws.idx[i], ws.idx[j]);
            ws.swaps.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        }
        sum_a += pool[ws.idx[i]];
    }
    for (auto it = ws.swaps.rbegin(); it != ws.swaps.rend(); ++it)
        std::swap(ws.idx[it->first], ws.idx[it->second]);
    const double stat = std::fabs(sum_a / static_cast<double>(na) -
                                  (sum_total - sum_a) / static_cast<double>(nb));
    return stat >= threshold;
}

struct RandomizationSetup {
    std::vector<double> pool;
    std::size_t na = 0;
    double sum_total = 0.0;
    double threshold = 0.0;
};

// Canonical setup: the pool is sorted and rounds always draw the smaller
// group's size, so the rounds (and the p-value) are identical no matter how
// the two groups are ordered or labeled.
RandomizationSetup make_setup(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("fisher_randomization: empty group");
    RandomizationSetup s;
    s.na = std::min(a.size(), b.size());
    s.pool.reserve(a.size() + b.size());
    s.pool.insert(s.pool.end(), a.begin(), a.end());
    s.pool.insert(s.pool.end(), b.begin(), b.end());
    std::sort(s.pool.begin(), s.pool.end());
    s.sum_total = std::accumulate(s.pool.begin(), s.pool.end(), 0.0);
    const double observed = std::fabs(mean_of(a) - mean_of(b));
    s.threshold = observed - kStatTieEps;
    return s;
}

}  // namespace

std::int64_t fisher_exceedance_count_serial(std::span<const double> a, std::span<const double> b,
                                            std::int64_t rounds, std::uint64_t seed) {
    const RandomizationSetup s = make_setup(a, b);
    ShuffleWorkspace ws(s.pool.size());
    std::int64_t count = 0;
    for (std::int64_t r = 0; r < rounds; ++r) {
        if (round_exceeds(s.pool, s.na, s.sum_total, s.threshold,
                          CounterRng(seed, static_cast<std::uint64_t>(r)), ws))
            ++count;
    }
    return count;
}

std::int64_t fisher_exceedance_count(std::span<const double> a, std::span<const double> b,
                                     std::int64_t rounds, std::uint64_t seed) {
#ifdef _OPENMP
    const RandomizationSetup s = make_setup(a, b);
    std::int64_t count = 0;
#pragma omp parallel
    {
        ShuffleWorkspace ws(s.pool.size());
        std::int64_t local = 0;
#pragma omp for schedule(static) nowait
        for (std::int64_t r = 0; r < rounds; ++r) {
            if (round_exceeds(s.pool, s.na, s.sum_total, s.threshold,
                              CounterRng(seed, static_cast<std::uint64_t>(r)), ws))
                ++local;
        }
#pragma omp atomic
        count += local;
    }
    return count;
#else
    return fisher_exceedance_count_serial(a, b, rounds, seed);
#endif
}

double fisher_randomization(std::span<const double> a, std::span<const double> b,
                            std::int64_t rounds, std::uint64_t seed) {
    if (rounds < 1) throw std::invalid_argument("fisher_randomization: rounds must be >= 1");
    const std::int64_t count = fisher_exceedance_count(a, b, rounds, seed);
    return static_cast<double>(count + 1) / static_cast<double>(rounds + 1);
}

std::vector<std::pair<double, double>> lowess(std::span<const std::pair<double, double>> points,
                                              double frac, int iters) {
    if (iters != 0) throw std::invalid_argument("lowess: only iters = 0 is supported");
    const std::size_t n = points.size();
    if (n < 3) throw std::invalid_argument("lowess: need at least 3 points");
    std::vector<std::pair<double, double>> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());

    std::size_t k = static_cast<std::size_t>(frac * static_cast<double>(n) + 1e-10);
    k = std::max<std::size_t>(k, 2);  // windows of one point would interpolate
    k = std::min(k, n);

    const double span_x = pts.back().first - pts.front().first;
    std::vector<std::pair<double, double>> out(n);
    std::size_t lo = 0, hi = k - 1;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = pts[i].first;
        while (hi + 1 < n && xi - pts[lo].first > pts[hi + 1].first - xi) {
            ++lo;
            ++hi;
        }
        const double h = std::max(xi - pts[lo].first, pts[hi].first - xi);
        double fitted;
        if (h <= 0.0) {
            double sy = 0.0;
            for (std::size_t j = lo; j <= hi; ++j) sy += pts[j].second;
            fitted = sy / static_cast<double>(hi - lo + 1);
        } else {
            double sw = 0.0, swx = 0.0, swy = 0.0;
            for (std::size_t j = lo; j <= hi; ++j) {
                const double u = std::fabs(pts[j].first - xi) / h;
                const double t = 1.0 - u * u * u;
                const double wj = t > 0.0 ? t * t * t : 0.0;
                w[j] = wj;
                sw += wj;
                swx += wj * pts[j].first;
                swy += wj * pts[j].second;
            }
            const double mx = swx / sw;
            const double my = swy / sw;
            double vx = 0.0, cxy = 0.0;
            for (std::size_t j = lo; j <= hi; ++j) {
                const double dx = pts[j].first - mx;
                vx += w[j] * dx * dx;
                cxy += w[j] * dx * (pts[j].second - my);
            }
            if (vx <= 1e-12 * span_x * span_x)
                fitted = my;
            else
                fitted = my + (cxy / vx) * (xi - mx);
        }
        out[i] = {xi, fitted};
    }
    return out;
}

int default_min_segment(int n_points) {
    return std::max(3, static_cast<int>(std::ceil(0.15 * n_points)));
}

namespace {

struct PrefixSums {
    std::vector<double> sx, sy, sxx, sxy, syy;  // index i = sum over first i points

    explicit PrefixSums(const std::vector<std::pair<double, double>>& pts) {
        const std::size_t n = pts.size();
        sx.assign(n + 1, 0.0);
        sy.assign(n + 1, 0.0);
        sxx.assign(n + 1, 0.0);
        sxy.assign(n + 1, 0.0);
        syy.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = pts[i].first, y = pts[i].second;
            sx[i + 1] = sx[i] + x;
            sy[i + 1] = sy[i] + y;
            sxx[i + 1] = sxx[i] + x * x;
            sxy[i + 1] = sxy[i] + x * y;
            syy[i + 1] = syy[i] + y * y;
        }
    }

    // Least-squares line over points [lo, hi); all-equal x falls back to the
    // horizontal line through the mean.
    LineFit fit(std::size_t lo, std::size_t hi) const {
        const double c = static_cast<double>(hi - lo);
        const double tx = sx[hi] - sx[lo], ty = sy[hi] - sy[lo];
        const double txx = sxx[hi] - sxx[lo], txy = sxy[hi] - sxy[lo], tyy = syy[hi] - syy[lo];
        const double var_x = txx - tx * tx / c;
        const double var_y = std::max(0.0, tyy - ty * ty / c);
        const double cov = txy - tx * ty / c;
        LineFit f;
        if (var_x <= 0.0 || var_x <= 1e-12 * txx) {
            f.slope = 0.0;
            f.intercept = ty / c;
            f.rss = var_y;
        } else {
            f.slope = cov / var_x;
            f.intercept = (ty - f.slope * tx) / c;
            f.rss = std::max(0.0, var_y - cov * cov / var_x);
        }
        return f;
    }
};

BreakpointFit fit_sorted(const std::vector<std::pair<double, double>>& pts, int min_segment) {
    const int n = static_cast<int>(pts.size());
    const PrefixSums sums(pts);
    BreakpointFit best;
    bool found = false;
    for (int s = min_segment; s <= n - min_segment; ++s) {
        const LineFit left = sums.fit(0, static_cast<std::size_t>(s));
        const LineFit right = sums.fit(static_cast<std::size_t>(s), static_cast<std::size_t>(n));
        const double rss = left.rss + right.rss;
        if (!found || rss <= best.rss_total) {  // ties keep the later split
            best.left = left;
            best.right = right;
            best.rss_total = rss;
            best.split_index = s;
            best.break_age = 0.5 * (pts[s - 1].first + pts[s].first);
            found = true;
        }
    }
    best.rss_single_line = sums.fit(0, static_cast<std::size_t>(n)).rss;
    return best;
}

}  // namespace

BreakpointFit fit_single_breakpoint(std::span<const std::pair<double, double>> points,
                                    int min_segment) {
    const int n = static_cast<int>(points.size());
    if (min_segment <= 0) min_segment = default_min_segment(n);
    if (n < 2 * min_segment)
        throw std::invalid_argument("fit_single_breakpoint: need at least 2*min_segment points");
    std::vector<std::pair<double, double>> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    return fit_sorted(pts, min_segment);
}

namespace {

double one_bootstrap_break(const std::vector<std::pair<double, double>>& pts, int min_segment,
                           CounterRng rng) {
    const std::size_t n = pts.size();
    std::vector<std::pair<double, double>> sample(n);
    for (std::size_t i = 0; i < n; ++i) sample[i] = pts[rng.next_below(n)];
    std::sort(sample.begin(), sample.end());
    return fit_sorted(sample, min_segment).break_age;
}

}  // namespace

std::vector<double> bootstrap_break_ages_serial(std::span<const std::pair<double, double>> points,
                                                int min_segment, int resamples,
                                                std::uint64_t seed) {
    const int n = static_cast<int>(points.size());
    if (min_segment <= 0) min_segment = default_min_segment(n);
    if (n < 2 * min_segment)
        throw std::invalid_argument("bootstrap_break_ages: need at least 2*min_segment points");
    std::vector<std::pair<double, double>> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    std::vector<double> ages(static_cast<std::size_t>(resamples));
    for (int r = 0; r < resamples; ++r)
        ages[static_cast<std::size_t>(r)] =
            one_bootstrap_break(pts, min_segment, CounterRng(seed, static_cast<std::uint64_t>(r)));
    return ages;
}

std::vector<double> bootstrap_break_ages(std::span<const std::pair<double, double>> points,
                                         int min_segment, int resamples, std::uint64_t seed) {
#ifdef _OPENMP
    const int n = static_cast<int>(points.size());
    if (min_segment <= 0) min_segment = default_min_segment(n);
    if (n < 2 * min_segment)
        throw std::invalid_argument("bootstrap_break_ages: need at least 2*min_segment points");
    std::vector<std::pair<double, double>> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    std::vector<double> ages(static_cast<std::size_t>(resamples));
#pragma omp parallel for schedule(static)
    for (int r = 0; r < resamples; ++r)
        ages[static_cast<std::size_t>(r)] =
            one_bootstrap_break(pts, min_segment, CounterRng(seed, static_cast<std::uint64_t>(r)));
    return ages;
#else
    return bootstrap_break_ages_serial(points, min_segment, resamples, seed);
#endif
}

BreakpointFit fit_single_breakpoint_with_ci(std::span<const std::pair<double, double>> points,
                                            int min_segment, int resamples, std::uint64_t seed) {
    BreakpointFit fit = fit_single_breakpoint(points, min_segment);
    if (resamples > 0) {
        std::vector<double> ages = bootstrap_break_ages(points, min_segment, resamples, seed);
        std::sort(ages.begin(), ages.end());
        const auto rank = [&](double q) {
            const auto b = static_cast<double>(ages.size());
            auto idx = static_cast<std::size_t>(std::ceil(q * b));
            idx = std::min(std::max<std::size_t>(idx, 1), ages.size());
            return ages[idx - 1];
        };
        fit.bootstrap_ci95 = {rank(0.025), rank(0.975)};
    }
    return fit;
}

AnovaResult anova_one_way(std::span<const double> group_first,
                          std::span<const double> group_second) {
    if (group_first.size() < 2 || group_second.size() < 2)
        throw std::invalid_argument("anova_one_way: each group needs at least 2 values");
    const double na = static_cast<double>(group_first.size());
    const double nb = static_cast<double>(group_second.size());
    const double ma = mean_of(group_first);
    const double mb = mean_of(group_second);
    const double grand = (ma * na + mb * nb) / (na + nb);
    double ssb = na * (ma - grand) * (ma - grand) + nb * (mb - grand) * (mb - grand);
    double ssw = 0.0;
    for (double v : group_first) ssw += (v - ma) * (v - ma);
    for (double v : group_second) ssw += (v - mb) * (v - mb);
    const double df2 = na + nb - 2.0;

    AnovaResult res;
    if (ssw <= 0.0) {
        if (ssb <= 0.0) {
            res.f = 0.0;
            res.p_two_sided = 1.0;
        } else {
            res.f = std::numeric_limits<double>::infinity();
            res.p_two_sided = 0.0;
        }
    } else {
        res.f = ssb / (ssw / df2);
        boost::math::fisher_f_distribution<double> dist(1.0, df2);
        res.p_two_sided = boost::math::cdf(boost::math::complement(dist, res.f));
    }
    res.p_one_tailed =
        ma < mb ? res.p_two_sided / 2.0 : 1.0 - res.p_two_sided / 2.0;
    return res;
}

}  // namespace polysemy::stats
