#include "kphf/curves.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kphf/gamma.hpp"

namespace kphf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SweepPoint {
    double mu, x, p;
};

SweepPoint eval(uint64_t k, double mu) {
    double kk = double(k);
    double p = gamma_q(kk, mu);
    double x = mu / kk * p + gamma_p(kk + 1.0, mu);
    return {mu, x, p};
}

// Parametric sweep in mu; x(mu) is monotone with dx = (p/k) dmu.
std::vector<SweepPoint> sweep_curve(uint64_t k) {
    std::vector<SweepPoint> pts;
    pts.push_back({0.0, 0.0, 1.0});
    double mu = 1e-4;
    for (int i = 0; i < 200000; i++) {
        SweepPoint s = eval(k, mu);
        // Refine against the previous point until the x step is small.
        std::vector<SweepPoint> stack{s};
        while (!stack.empty()) {
            SweepPoint cur = stack.back();
            const SweepPoint& prev = pts.back();
            double lo = prev.mu > 0 ? prev.mu : cur.mu / 16.0;
            if (cur.x - prev.x <= 5e-5 || cur.mu <= lo * (1.0 + 1e-12)) {
                pts.push_back(cur);
                stack.pop_back();
            } else {
                stack.push_back(eval(k, std::sqrt(lo * cur.mu)));
            }
        }
        if (s.x >= 1.0 - 1e-9) return pts;
        mu *= 1.005;
    }
    throw std::runtime_error("bucket_curves: sweep did not reach x = 1");
}

}  // namespace

CurveTable bucket_curves(uint64_t k, uint32_t grid) {
    if (k == 0) throw std::invalid_argument("bucket_curves: k must be positive");
    if (grid < 16) throw std::invalid_argument("bucket_curves: grid too small");
    std::vector<SweepPoint> pts = sweep_curve(k);

    // Cumulative integral of ln p dx = (ln p) (p/k) dmu by trapezoid.
    size_t np = pts.size();
    std::vector<double> cum(np, 0.0);
    for (size_t i = 1; i < np; i++) {
        double ga = std::log(pts[i - 1].p) * pts[i - 1].p;
        double gb = std::log(pts[i].p) * pts[i].p;
        cum[i] = cum[i - 1] + 0.5 * (ga + gb) * (pts[i].mu - pts[i - 1].mu) / double(k);
    }
    double denom = cum.back();

    CurveTable c;
    c.k = k;
    c.xs.resize(grid);
    c.pk.resize(grid);
    c.beta.resize(grid);
    size_t j = 0;
    for (uint32_t g = 0; g < grid; g++) {
        double x = double(g) / double(grid - 1);
        c.xs[g] = x;
        while (j + 2 < np && pts[j + 1].x <= x) j++;
        const SweepPoint &a = pts[j], &b = pts[j + 1];
        double w = b.x > a.x ? std::min(1.0, std::max(0.0, (x - a.x) / (b.x - a.x))) : 0.0;
        c.pk[g] = a.p + w * (b.p - a.p);
        c.beta[g] = (cum[j] + w * (cum[j + 1] - cum[j])) / denom + 0.0;  // denom < 0: flush -0
    }
    c.pk[0] = 1.0;
    c.beta[0] = 0.0;
    c.beta[grid - 1] = 1.0;
    return c;
}

namespace {

double interp(const CurveTable& c, const std::vector<double>& ys, double x) {
    if (c.xs.size() < 2) throw std::invalid_argument("curve table is empty");
    if (x <= 0.0) return ys.front();
    if (x >= 1.0) return ys.back();
    double pos = x * double(c.xs.size() - 1);
    size_t i = (size_t)pos;
    if (i + 1 >= c.xs.size()) return ys.back();
    double w = pos - double(i);
    return ys[i] + w * (ys[i + 1] - ys[i]);
}

}  // namespace

double pk_at(const CurveTable& c, double x) { return interp(c, c.pk, x); }
double beta_at(const CurveTable& c, double x) { return interp(c, c.beta, x); }

double pk_euler_check(uint64_t k, double x_max, uint64_t steps) {
    if (!(x_max > 0 && x_max < 1) || steps < 2)
        throw std::invalid_argument("pk_euler_check: bad arguments");
    CurveTable c = bucket_curves(k);
    double h = x_max / double(steps);
    double mu = 0.0, p = 1.0, sup = 0.0;
    for (uint64_t j = 1; j <= steps; j++) {
        if (!(p > 0) || !std::isfinite(mu)) return kInf;
        mu += h * double(k) / p;
        p = gamma_q(double(k), mu);
        double err = std::fabs(p - pk_at(c, double(j) * h));
        if (!std::isfinite(err)) return kInf;
        if (err > sup) sup = err;
    }
    return sup;
}

double pk_stable_check(uint64_t k, double x_max, uint32_t grid) {
    if (!(x_max > 0 && x_max < 1)) throw std::invalid_argument("pk_stable_check: bad arguments");
    CurveTable c = bucket_curves(k, grid);
    double acc = 0.0, sup = 0.0;
    for (size_t i = 1; i < c.xs.size() && c.xs[i] <= x_max; i++) {
        acc += 0.5 * (1.0 / c.pk[i - 1] + 1.0 / c.pk[i]) * (c.xs[i] - c.xs[i - 1]);
        double err = std::fabs(gamma_q(double(k), double(k) * acc) - c.pk[i]);
        if (err > sup) sup = err;
    }
    return sup;
}

}  // namespace kphf
