#include "kphf/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "kphf/gamma.hpp"

namespace kphf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_params(uint64_t k, double gamma, uint32_t t) {
    if (k == 0) throw std::invalid_argument("thresholds: k must be positive");
    if (!(gamma >= 1.0)) throw std::invalid_argument("thresholds: gamma must be >= 1");
    if (t < 2) throw std::invalid_argument("thresholds: need at least 2 levels");
}

// One backward sweep from T[t-1] = 1, T[t-2] = theta down to T[0].
// Returns T[0], or -1 if the sequence left (0, 1) on the way down.
double sweep(uint64_t k, double gamma, uint32_t t, double theta, std::vector<double>& T) {
    double rate = gamma * double(k);
    T.assign(t, 0.0);
    T[t - 1] = 1.0;
    T[t - 2] = theta;
    for (uint32_t i = t - 2; i >= 1; i--) {
        double ti = T[i], tnext = T[i + 1];
        if (!(ti > 0) || ti >= tnext) return -1.0;
        double log_dcdf =
            log_diff_exp(log_gamma_cdf(double(k), rate, tnext), log_gamma_cdf(double(k), rate, ti));
        double log_term = std::log(ti) - log_gamma_pdf(double(k) + 1.0, rate, ti) +
                          std::log(gamma) + log_dcdf;
        double term = std::exp(log_term);
        if (!(term < ti)) return -1.0;
        T[i - 1] = ti - term;
    }
    return T[0];
}

}  // namespace

std::vector<double> optimal_thresholds(uint64_t k, double gamma, uint32_t t) {
    check_params(k, gamma, t);
    if (t == 2) return {0.0, 1.0};
    std::vector<double> T;
    double lo = 0.0, hi = 1.0, best = -1.0;
    for (int it = 0; it < 200; it++) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double t0 = sweep(k, gamma, t, mid, T);
        if (t0 >= 0.0 && t0 <= 1e-9) {
            best = mid;
            break;
        }
        if (t0 < 0.0) {
            lo = mid;  // sequence left (0,1): T[t-2] too small
        } else {
            hi = mid;
            best = mid;  // valid but T[0] still too large
        }
    }
    double t0 = best < 0.0 ? -1.0 : sweep(k, gamma, t, best, T);
    if (t0 < 0.0 || t0 > 1e-6)
        throw std::runtime_error("optimal_thresholds: recurrence did not converge");
    T[0] = 0.0;
    T[t - 1] = 1.0;
    for (uint32_t i = 1; i < t; i++)
        if (!(T[i] > T[i - 1]))
            throw std::runtime_error("optimal_thresholds: non-increasing solution");
    return T;
}

std::vector<double> asymptotic_thresholds(uint64_t k, double gamma, uint32_t t) {
    check_params(k, gamma, t);
    double shape = (double(k) + 1.0) / 2.0;
    double rate = gamma * double(k) / 2.0;
    double total = gamma_cdf(shape, rate, 1.0);
    std::vector<double> T(t);
    T[0] = 0.0;
    T[t - 1] = 1.0;
    // Interior entries sample the conditioned quantile function at centered
    // levels; that alignment tracks the finite-t optimum to second order.
    for (uint32_t i = 1; i + 1 < t; i++) {
        double target = total * (double(i) - 0.5) / double(t - 1);
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; it++) {
            double mid = 0.5 * (lo + hi);
            if (gamma_cdf(shape, rate, mid) < target) lo = mid; else hi = mid;
        }
        T[i] = 0.5 * (lo + hi);
    }
    return T;
}

double expected_empty_slots(uint64_t k, double gamma, const std::vector<double>& T) {
    if (T.size() < 2 || T.front() != 0.0 || T.back() != 1.0)
        throw std::invalid_argument("expected_empty_slots: thresholds must span [0, 1]");
    double rate = gamma * double(k);
    double kk = double(k);
    double total = 0.0;
    for (size_t i = 0; i < T.size(); i++) {
        double a = T[i];
        double c1_hi, ck_hi;
        if (i + 1 < T.size()) {
            c1_hi = gamma_cdf(kk + 1.0, rate, T[i + 1]);
            ck_hi = gamma_cdf(kk, rate, T[i + 1]);
        } else {
            c1_hi = 1.0;
            ck_hi = 1.0;
        }
        double d1 = c1_hi - gamma_cdf(kk + 1.0, rate, a);
        double dk = ck_hi - gamma_cdf(kk, rate, a);
        total += kk * (d1 - a * gamma * dk);
    }
    return total;
}

McEmpty simulate_empty_slots(uint64_t k, double gamma, const std::vector<double>& T,
                             uint64_t bins, uint64_t seed) {
    if (T.empty() || bins == 0) throw std::invalid_argument("simulate_empty_slots: bad arguments");
    std::mt19937_64 rng(seed);
    std::poisson_distribution<uint64_t> size_dist(gamma * double(k));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> fp;
    double sum = 0.0, sum_sq = 0.0;
    for (uint64_t b = 0; b < bins; b++) {
        uint64_t s = size_dist(rng);
        fp.resize(s);
        for (auto& f : fp) f = unit(rng);
        double cutoff = std::numeric_limits<double>::infinity();
        if (s > k) {
            std::nth_element(fp.begin(), fp.begin() + k, fp.end());
            cutoff = fp[k];
        }
        // Largest threshold strictly below the cutoff; none -> bump all.
        auto it = std::lower_bound(T.begin(), T.end(), cutoff);
        uint64_t empty;
        if (it == T.begin()) {
            empty = k;
        } else {
            double chosen = *(it - 1);
            uint64_t kept = 0;
            for (uint64_t j = 0; j < s; j++) kept += fp[j] <= chosen;
            empty = k - kept;
        }
        sum += double(empty);
        sum_sq += double(empty) * double(empty);
    }
    double mean = sum / double(bins);
    double var = std::max(0.0, sum_sq / double(bins) - mean * mean);
    return {mean, std::sqrt(var / double(bins))};
}

}  // namespace kphf
