#include "kphf/gamma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kphf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_args(double a, double x) {
    if (!(a > 0) || !(x >= 0)) throw std::invalid_argument("incomplete gamma: bad arguments");
}

// log of P(a,x) * Gamma(a+1) / (x^a e^-x), by series; converges fast for x < a+1.
double series_log_sum(double a, double x) {
    double sum = 1.0, term = 1.0;
    for (int i = 1; i < 100000; i++) {
        term *= x / (a + i);
        sum += term;
        if (term < sum * 1e-17) return std::log(sum);
    }
    throw std::runtime_error("incomplete gamma: series failed to converge");
}

// log of the continued fraction for Q(a,x) (modified Lentz); use for x >= a+1.
double cf_log(double a, double x) {
    double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
    for (int i = 1; i < 100000; i++) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) return std::log(h);
    }
    throw std::runtime_error("incomplete gamma: continued fraction failed to converge");
}

}  // namespace

double log_gamma_p(double a, double x) {
    check_args(a, x);
    if (x == 0) return kNegInf;
    if (x < a + 1.0)
        return a * std::log(x) - x - std::lgamma(a + 1.0) + series_log_sum(a, x);
    double q = std::exp(log_gamma_q(a, x));
    return q < 1.0 ? std::log1p(-q) : kNegInf;
}

double log_gamma_q(double a, double x) {
    check_args(a, x);
    if (x == 0) return 0.0;
    if (x >= a + 1.0) return a * std::log(x) - x - std::lgamma(a) + cf_log(a, x);
    double p = std::exp(log_gamma_p(a, x));
    return p < 1.0 ? std::log1p(-p) : kNegInf;
}

double gamma_p(double a, double x) {
    check_args(a, x);
    if (x == 0) return 0.0;
    if (x < a + 1.0) return std::exp(log_gamma_p(a, x));
    return 1.0 - std::exp(log_gamma_q(a, x));
}

double gamma_q(double a, double x) {
    check_args(a, x);
    if (x == 0) return 1.0;
    if (x >= a + 1.0) return std::exp(log_gamma_q(a, x));
    return 1.0 - std::exp(log_gamma_p(a, x));
}

double gamma_cdf(double shape, double rate, double x) {
    return x <= 0 ? 0.0 : gamma_p(shape, rate * x);
}

double log_gamma_cdf(double shape, double rate, double x) {
    return x <= 0 ? kNegInf : log_gamma_p(shape, rate * x);
}

double log_gamma_pdf(double shape, double rate, double x) {
    if (x <= 0) return kNegInf;
    return shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
           std::lgamma(shape);
}

double log_diff_exp(double la, double lb) {
    if (lb == kNegInf) return la;
    if (!(la >= lb)) throw std::invalid_argument("log_diff_exp: la < lb");
    if (la == lb) return kNegInf;
    return la + std::log1p(-std::exp(lb - la));
}

double poisson_cdf(uint64_t c, double mu) { return gamma_q(double(c) + 1.0, mu); }

double log_binom_pmf(uint64_t s, uint64_t j, double p) {
    if (j > s) return kNegInf;
    double lc = std::lgamma(double(s) + 1.0) - std::lgamma(double(j) + 1.0) -
                std::lgamma(double(s - j) + 1.0);
    double lp = 0.0, lq = 0.0;
    if (j > 0) {
        if (p <= 0) return kNegInf;
        lp = double(j) * std::log(p);
    }
    if (s - j > 0) {
        if (p >= 1) return kNegInf;
        lq = double(s - j) * std::log1p(-p);
    }
    return lc + lp + lq;
}

}  // namespace kphf
