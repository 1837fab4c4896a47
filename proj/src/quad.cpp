#include "qwalk/quad.hpp"
#include "qwalk/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace qwalk {

namespace {

GaussRule make_rule(int n) {
    // Newton on Legendre P_n with the usual Chebyshev-based initial guesses
    GaussRule r;
    r.x.resize(static_cast<size_t>(n));
    r.w.resize(static_cast<size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[static_cast<size_t>(i)] = -x;
        r.x[static_cast<size_t>(n - 1 - i)] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[static_cast<size_t>(i)] = w;
        r.w[static_cast<size_t>(n - 1 - i)] = w;
    }
    return r;
}

std::map<int, GaussRule> rule_cache;
std::mutex rule_mutex;

cplx apply(const std::function<cplx(double)>& f, double lo, double hi, int n) {
    const GaussRule& r = gauss_rule(n);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    cplx s = 0.0;
    for (int i = 0; i < n; ++i)
        s += r.w[static_cast<size_t>(i)] * f(mid + half * r.x[static_cast<size_t>(i)]);
    return s * half;
}

} // namespace

const GaussRule& gauss_rule(int n) {
    std::lock_guard<std::mutex> lock(rule_mutex);
    auto it = rule_cache.find(n);
    if (it == rule_cache.end()) it = rule_cache.emplace(n, make_rule(n)).first;
    return it->second;
}

cplx integrate(const std::function<cplx(double)>& f, double lo, double hi,
               double rel_tol, int n0, int max_order) {
    cplx prev = apply(f, lo, hi, n0);
    for (int n = 2 * n0; n <= max_order; n *= 2) {
        cplx cur = apply(f, lo, hi, n);
        if (std::abs(cur - prev) <= rel_tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    return prev; // callers with hard certification needs check against oracles
}

cplx integrate_sqrt_endpoints(const std::function<cplx(double)>& f, double lo, double hi,
                              double rel_tol, int n0, int max_order) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    auto g = [&](double th) { return f(mid + half * std::sin(th)) * (half * std::cos(th)); };
    return integrate(g, -std::numbers::pi / 2, std::numbers::pi / 2, rel_tol, n0, max_order);
}

} // namespace qwalk
