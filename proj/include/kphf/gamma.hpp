#pragma once

// Regularized incomplete gamma functions and a few distribution helpers.
// Log-space variants stay accurate deep in the tails, where the plain
// values underflow to zero.

#include <cstdint>

namespace kphf {

// Lower regularized incomplete gamma P(a, x) and its complement Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);
double log_gamma_p(double a, double x);
double log_gamma_q(double a, double x);

// Gamma(shape, rate) distribution.
double gamma_cdf(double shape, double rate, double x);
double log_gamma_cdf(double shape, double rate, double x);
double log_gamma_pdf(double shape, double rate, double x);

// log(exp(la) - exp(lb)) for la >= lb.
double log_diff_exp(double la, double lb);

// P[Poisson(mu) <= c]
double poisson_cdf(uint64_t c, double mu);

// log P[Binomial(s, p) = j]
double log_binom_pmf(uint64_t s, uint64_t j, double p);

}  // namespace kphf
