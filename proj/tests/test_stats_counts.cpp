#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "polysemy/rng.hpp"
#include "polysemy/stats.hpp"

using namespace polysemy;
using stats::ArrowMode;
using stats::TailFlag;

TEST_CASE("minimum series length for significance") {
    CHECK(stats::min_series_length(0.05) == 5);
    CHECK(stats::min_series_length(0.2) == 4);
    CHECK(stats::min_series_length(1.0) == 2);
    CHECK_THROWS_AS(stats::min_series_length(0.0), std::invalid_argument);

    // nonincreasing in alpha
    int prev = stats::min_series_length(1e-6);
    for (double alpha = 1e-6; alpha <= 1.0; alpha *= 1.7) {
        const int m = stats::min_series_length(std::min(alpha, 1.0));
        CHECK(m <= prev);
        prev = m;
    }
}

TEST_CASE("binomial tails match multiplicative-recurrence oracle") {
    const struct {
        int count, n;
        double p;
    } cases[] = {{4, 56, 0.025}, {29, 56, 0.025}, {27, 56, 0.95}, {7, 14, 0.5}, {0, 10, 0.3},
                 {10, 10, 0.3},  {2, 14, 0.025}};
    for (const auto& c : cases) {
        double upper = 0.0, lower = 0.0;
        for (int k = 0; k <= c.n; ++k) {
            const double pmf = oracles::binom_pmf_recurrence(k, c.n, c.p);
            if (k >= c.count) upper += pmf;
            if (k <= c.count) lower += pmf;
        }
        CHECK(stats::binomial_upper_tail(c.count, c.n, c.p) == doctest::Approx(upper).epsilon(1e-10));
        CHECK(stats::binomial_lower_tail(c.count, c.n, c.p) == doctest::Approx(lower).epsilon(1e-10));
    }
}

TEST_CASE("tail flags reproduce the published count-table arrows") {
    CHECK(stats::tail_flag(29, 56, 0.025) == TailFlag::High);
    CHECK(stats::tail_flag(27, 56, 0.95) == TailFlag::Low);
    CHECK(stats::tail_flag(5, 56, 0.025) == TailFlag::High);
    CHECK(stats::tail_flag(2, 14, 0.025) == TailFlag::High);
    CHECK(stats::tail_flag(51, 56, 0.5) == TailFlag::High);
    CHECK(stats::tail_flag(7, 14, 0.5) == TailFlag::None);
}

TEST_CASE("borderline cell flips between exact and normal modes") {
    // P(X >= 4 | 56, 0.025) is just above 0.05, so the exact test says None
    // while the continuity-corrected normal approximation says High.
    const double upper = stats::binomial_upper_tail(4, 56, 0.025);
    CHECK(upper > 0.05);
    CHECK(upper < 0.053);
    CHECK(stats::tail_flag(4, 56, 0.025, 0.05, ArrowMode::Exact) == TailFlag::None);
    CHECK(stats::tail_flag(4, 56, 0.025, 0.05, ArrowMode::NormalApprox) == TailFlag::High);
}

TEST_CASE("tail flag is monotone in count and never High and Low at once") {
    for (int n : {10, 14, 56}) {
        for (double p : {0.025, 0.5, 0.95}) {
            int prev = -2;
            for (int count = 0; count <= n; ++count) {
                const TailFlag f = stats::tail_flag(count, n, p);
                const int ord = f == TailFlag::Low ? -1 : (f == TailFlag::High ? 1 : 0);
                if (prev != -2) CHECK(ord >= prev);
                prev = ord;
                // exclusivity at alpha < 0.5
                const double up = stats::binomial_upper_tail(count, n, p);
                const double lo = stats::binomial_lower_tail(count, n, p);
                CHECK_FALSE((up <= 0.05 && lo <= 0.05));
            }
        }
    }
}

TEST_CASE("classify_counts reproduces a full published row") {
    // 56 individuals: 51 positive (29 significant), 5 negative (0 significant)
    std::vector<stats::CorrelationResult> results;
    for (int i = 0; i < 29; ++i)
        results.push_back({0.9, 0.01, 6, stats::SignClass::Positive, stats::SigClass::Positive});
    for (int i = 0; i < 22; ++i)
        results.push_back({0.3, 0.5, 6, stats::SignClass::Positive, stats::SigClass::NonSignificant});
    for (int i = 0; i < 5; ++i)
        results.push_back({-0.2, 0.7, 6, stats::SignClass::Negative, stats::SigClass::NonSignificant});
    const auto s = stats::classify_counts(results, 0.05);
    CHECK(s.n == 56);
    CHECK(s.corr_positive == 51);
    CHECK(s.corr_negative == 5);
    CHECK(s.sig_positive == 29);
    CHECK(s.sig_negative == 0);
    CHECK(s.sig_none == 27);
    CHECK(s.corr_positive + s.corr_negative == s.n);
    CHECK(s.sig_positive + s.sig_negative + s.sig_none == s.n);
    CHECK(s.corr_positive_flag == TailFlag::High);
    CHECK(s.corr_negative_flag == TailFlag::Low);
    CHECK(s.sig_positive_flag == TailFlag::High);
    CHECK(s.sig_negative_flag == TailFlag::None);
    CHECK(s.sig_none_flag == TailFlag::Low);
}

TEST_CASE("classify_counts on empty input") {
    const auto s = stats::classify_counts({}, 0.05);
    CHECK(s.n == 0);
    CHECK(s.sig_positive_flag == TailFlag::None);
    CHECK(s.corr_positive_flag == TailFlag::None);
}

TEST_CASE("flags rarely fire on null-model draws") {
    const int runs = 300, n = 56;
    int fired_sig_pos = 0, fired_sig_none = 0, fired_corr_pos = 0;
    for (int run = 0; run < runs; ++run) {
        CounterRng rng(555, static_cast<std::uint64_t>(run));
        std::vector<stats::CorrelationResult> results(n);
        for (auto& r : results) {
            const double p = rng.next_double();
            const bool positive = rng.next_double() < 0.5;
            r.p_value = p;
            r.rho = positive ? 0.5 : -0.5;
            r.sign = positive ? stats::SignClass::Positive : stats::SignClass::Negative;
            if (p <= 0.05)
                r.significance =
                    positive ? stats::SigClass::Positive : stats::SigClass::Negative;
            else
                r.significance = stats::SigClass::NonSignificant;
        }
        const auto s = stats::classify_counts(results, 0.05);
        fired_sig_pos += s.sig_positive_flag != TailFlag::None;
        fired_sig_none += s.sig_none_flag != TailFlag::None;
        fired_corr_pos += s.corr_positive_flag != TailFlag::None;
    }
    CHECK(fired_sig_pos <= runs / 10);
    CHECK(fired_sig_none <= runs / 10);
    // the sign-count flag is two-sided, so its null fire rate is ~2*alpha
    CHECK(fired_corr_pos <= runs * 16 / 100);
}
