#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "kphf/gamma.hpp"
#include "kphf/quadrature.hpp"
#include "kphf/thresholds.hpp"

using namespace kphf;

namespace {

// Gamma(shape, rate) log-density straight from <cmath>; independent of the
// library's gamma code.
double ref_log_gamma_pdf(double shape, double rate, double x) {
    return shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
           std::lgamma(shape);
}

double ref_gamma_cdf(double shape, double rate, double x) {
    return x <= 0 ? 0.0 : boost::math::gamma_p(shape, rate * x);
}

}  // namespace

TEST_SUITE("threshold_opt") {

TEST_CASE("regularized incomplete gamma against boost") {
    for (double a : {0.5, 1.0, 2.0, 5.0, 37.5, 100.0, 1000.0}) {
        for (double f : {0.01, 0.2, 0.5, 0.9, 1.0, 1.1, 1.5, 3.0}) {
            double x = a * f;
            double p = boost::math::gamma_p(a, x);
            double q = boost::math::gamma_q(a, x);
            CHECK(gamma_p(a, x) == doctest::Approx(p).epsilon(1e-10));
            CHECK(gamma_q(a, x) == doctest::Approx(q).epsilon(1e-10));
            if (p > 1e-290) CHECK(log_gamma_p(a, x) == doctest::Approx(std::log(p)).epsilon(1e-8));
            if (q > 1e-290) CHECK(log_gamma_q(a, x) == doctest::Approx(std::log(q)).epsilon(1e-8));
        }
    }
    CHECK(gamma_p(3.0, 0.0) == 0.0);
    CHECK(gamma_q(3.0, 0.0) == 1.0);
}

TEST_CASE("log-space gamma survives the deep tail") {
    // Plain value underflows; the log version must stay finite and ordered.
    double lp = log_gamma_p(1000.0, 200.0);
    CHECK(std::isfinite(lp));
    CHECK(lp < -300.0);
    CHECK(log_gamma_p(1000.0, 210.0) > lp);
}

TEST_CASE("gamma distribution helpers against boost") {
    boost::math::gamma_distribution<double> dist(20.0, 1.0 / 40.0);  // shape, scale
    for (double x : {0.05, 0.2, 0.5, 0.8, 1.0}) {
        CHECK(gamma_cdf(20.0, 40.0, x) ==
              doctest::Approx(boost::math::cdf(dist, x)).epsilon(1e-10));
        CHECK(log_gamma_pdf(20.0, 40.0, x) ==
              doctest::Approx(std::log(boost::math::pdf(dist, x))).epsilon(1e-8));
    }
}

TEST_CASE("poisson_cdf against boost") {
    for (double mu : {0.5, 3.0, 20.0, 120.0}) {
        boost::math::poisson_distribution<double> dist(mu);
        for (uint64_t c : {0ULL, 1ULL, 3ULL, 19ULL, 150ULL})
            CHECK(poisson_cdf(c, mu) ==
                  doctest::Approx(boost::math::cdf(dist, (double)c)).epsilon(1e-10));
    }
}

TEST_CASE("log_binom_pmf against boost") {
    for (uint64_t s : {5ULL, 40ULL, 1200ULL}) {
        boost::math::binomial_distribution<double> dist((double)s, 0.83);
        for (uint64_t j : {0ULL, 1ULL, 4ULL, 33ULL, 1000ULL}) {
            if (j > s) continue;
            double ref = boost::math::pdf(dist, (double)j);
            if (ref > 1e-290)
                CHECK(log_binom_pmf(s, j, 0.83) ==
                      doctest::Approx(std::log(ref)).epsilon(1e-8));
        }
    }
}

TEST_CASE("log_diff_exp identity") {
    CHECK(log_diff_exp(std::log(5.0), std::log(3.0)) == doctest::Approx(std::log(2.0)));
    CHECK(log_diff_exp(-1000.0, -1001.0) ==
          doctest::Approx(-1000.0 + std::log1p(-std::exp(-1.0))));
    CHECK(log_diff_exp(-2.0, -2.0) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("optimal thresholds: shape") {
    for (auto [k, gamma, t] : {std::tuple{10ULL, 2.0, 32u}, {2ULL, 2.0, 8u},
                               {100ULL, 1.2, 128u}, {1ULL, 1.5, 16u}}) {
        auto T = optimal_thresholds(k, gamma, t);
        REQUIRE(T.size() == t);
        CHECK(T.front() == 0.0);
        CHECK(T.back() == 1.0);
        for (size_t i = 1; i < T.size(); i++) CHECK(T[i] > T[i - 1]);
    }
    CHECK(optimal_thresholds(10, 2.0, 2) == std::vector<double>{0.0, 1.0});
    CHECK_THROWS_AS(optimal_thresholds(0, 2.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(optimal_thresholds(10, 0.5, 8), std::invalid_argument);
    CHECK_THROWS_AS(optimal_thresholds(10, 2.0, 1), std::invalid_argument);
}

TEST_CASE("optimal thresholds satisfy the recurrence under quadrature") {
    // T[i-1] = T[i] - T[i] * gamma * int_{T[i]}^{T[i+1]} f_k / f_{k+1}(T[i]),
    // with the integral done by adaptive Simpson on the plain gamma density.
    for (auto [k, gamma, t] : {std::tuple{10ULL, 2.0, 32u}, {100ULL, 1.2, 128u}}) {
        auto T = optimal_thresholds(k, gamma, t);
        double rate = gamma * double(k);
        for (uint32_t i = 1; i + 1 < t; i++) {
            double I = integrate(
                [&](double x) { return std::exp(ref_log_gamma_pdf((double)k, rate, x)); },
                T[i], T[i + 1], 1e-13);
            double f1 = std::exp(ref_log_gamma_pdf((double)k + 1.0, rate, T[i]));
            double expect = T[i] - T[i] * gamma * I / f1;
            CHECK(std::fabs(T[i - 1] - expect) <= 1e-6);
        }
    }
}

TEST_CASE("asymptotic thresholds are conditioned gamma quantiles") {
    const uint64_t k = 100;
    const double gamma = 1.2;
    const uint32_t t = 64;
    auto T = asymptotic_thresholds(k, gamma, t);
    REQUIRE(T.size() == t);
    CHECK(T.front() == 0.0);
    CHECK(T.back() == 1.0);
    double shape = (k + 1.0) / 2.0, rate = gamma * k / 2.0;
    double total = ref_gamma_cdf(shape, rate, 1.0);
    for (uint32_t i = 1; i + 1 < t; i++) {
        double target = total * (i - 0.5) / (t - 1.0);
        CHECK(ref_gamma_cdf(shape, rate, T[i]) == doctest::Approx(target).epsilon(1e-9));
    }
}

TEST_CASE("finite thresholds approach the asymptotic law") {
    auto fin = optimal_thresholds(100, 1.2, 64);
    auto asy = asymptotic_thresholds(100, 1.2, 64);
    double sup = 0.0;
    for (size_t i = 0; i < fin.size(); i++) sup = std::max(sup, std::fabs(fin[i] - asy[i]));
    CHECK(sup <= 0.05);
}

TEST_CASE("expected empty slots: independent integral") {
    // Same telescoping sum, but every CDF evaluated by boost.
    for (auto [k, gamma, t] : {std::tuple{10ULL, 2.0, 32u}, {4ULL, 1.5, 16u}}) {
        auto T = optimal_thresholds(k, gamma, t);
        double rate = gamma * double(k), kk = double(k);
        double ref = 0.0;
        for (size_t i = 0; i < T.size(); i++) {
            double hi1 = 1.0, hik = 1.0;
            if (i + 1 < T.size()) {
                hi1 = ref_gamma_cdf(kk + 1.0, rate, T[i + 1]);
                hik = ref_gamma_cdf(kk, rate, T[i + 1]);
            }
            double d1 = hi1 - ref_gamma_cdf(kk + 1.0, rate, T[i]);
            double dk = hik - ref_gamma_cdf(kk, rate, T[i]);
            ref += kk * (d1 - T[i] * gamma * dk);
        }
        CHECK(expected_empty_slots(k, gamma, T) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("expected empty slots agrees with simulation") {
    const uint64_t k = 10;
    const double gamma = 2.0;
    auto T = optimal_thresholds(k, gamma, 32);
    double analytic = expected_empty_slots(k, gamma, T);
    McEmpty mc = simulate_empty_slots(k, gamma, T, 100000, 321);
    CHECK(std::fabs(analytic - mc.mean) <= 4.0 * mc.se + 1e-3);
    CHECK(analytic > 0.0);
    CHECK(analytic < (double)k);
}

TEST_CASE("optimal thresholds beat uniform [2/3, 1] spacing") {
    const uint64_t k = 10;
    const double gamma = 2.0;
    const uint32_t t = 32;
    auto opt = optimal_thresholds(k, gamma, t);
    std::vector<double> uniform(t);
    for (uint32_t i = 0; i < t; i++)
        uniform[i] = 2.0 / 3.0 + (1.0 / 3.0) * double(i) / double(t - 1);
    McEmpty a = simulate_empty_slots(k, gamma, opt, 30000, 7);
    McEmpty b = simulate_empty_slots(k, gamma, uniform, 30000, 8);
    double margin = b.mean - a.mean;
    CHECK(margin > 2.0 * std::sqrt(a.se * a.se + b.se * b.se));
}

TEST_CASE("simulation accepts truncated vectors") {
    // No threshold below the cutoff: the bin bumps everything and leaves
    // k empty slots, so a vector clamped to {1} maximizes emptiness.
    McEmpty all_bump = simulate_empty_slots(10, 2.0, {1.0}, 2000, 9);
    CHECK(all_bump.mean > 9.0);
}

}  // TEST_SUITE
