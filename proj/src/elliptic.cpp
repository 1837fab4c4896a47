#include <array>
#include "qwalk/elliptic.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/quad.hpp"
#include "qwalk/tolerances.hpp"

#include <cmath>
#include <numbers>

namespace qwalk {

namespace {

struct Theta {
    cplx t1, t1p, t4, t4p; // values and v-derivatives at v
};

// Jacobi theta series; q must satisfy |q| <= exp(-pi) by frame choice
Theta theta_at(cplx v, cplx q) {
    Theta r{0, 0, 1, 0};
    cplx qp = 1.0; // q^{n^2} running for t4, q^{(n+1/2)^2} for t1
    for (int n = 0; n < 64; ++n) {
        double e1exp = (n + 0.5) * (n + 0.5);
        cplx q1 = std::pow(q, e1exp);
        double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        cplx s = std::sin((2.0 * n + 1.0) * v), c = std::cos((2.0 * n + 1.0) * v);
        cplx add1 = 2.0 * sgn * q1 * s;
        r.t1 += add1;
        r.t1p += 2.0 * sgn * q1 * (2.0 * n + 1.0) * c;
        if (n >= 1) {
            cplx q4 = std::pow(q, static_cast<double>(n) * n);
            cplx s4 = std::sin(2.0 * n * v), c4 = std::cos(2.0 * n * v);
            r.t4 += 2.0 * sgn * q4 * c4;
            r.t4p += -4.0 * n * sgn * q4 * s4;
            if (std::abs(q1) * std::exp((2.0 * n + 1.0) * std::abs(v.imag())) < tol::theta_term &&
                std::abs(q4) * std::exp(2.0 * n * std::abs(v.imag())) < tol::theta_term)
                break;
        }
        (void)qp;
    }
    return r;
}

} // namespace

Weierstrass::Weierstrass(double wr, double wi_imag) : wr_(wr), wi_(wi_imag) {
    if (!(wr > 0) || !(wi_imag > 0)) throw NumericsError("periods must be positive");
    // theta frame: pick generator ordering with Im(tau) >= 1
    if (wi_imag / wr >= 1.0) {
        wa_ = cplx(wr, 0);
        wb_ = cplx(0, wi_imag);
    } else {
        wa_ = cplx(0, wi_imag);
        wb_ = cplx(-wr, 0);
    }
    cplx tau = wb_ / wa_;
    q_ = std::exp(cplx(0, std::numbers::pi) * tau);

    // theta null values
    cplx t2 = 0, t3 = 1;
    for (int n = 0; n < 64; ++n) {
        cplx q1 = std::pow(q_, (n + 0.5) * (n + 0.5));
        t2 += 2.0 * q1;
        if (n >= 1) {
            cplx q4 = std::pow(q_, static_cast<double>(n) * n);
            t3 += 2.0 * q4;
            if (std::abs(q4) < tol::theta_term) break;
        }
    }
    cplx t4 = theta_at(cplx(0, 0), q_).t4;
    t2z_ = t2;
    t3z_ = t3;
    t4z_ = t4;

    e1_ = wp(cplx(wr_ / 2, 0)).real();
    e2_ = wp(cplx(wr_ / 2, wi_ / 2)).real();
    e3_ = wp(cplx(0, wi_ / 2)).real();
    g2_ = -4.0 * (e1_ * e2_ + e1_ * e3_ + e2_ * e3_);
    g3_ = 4.0 * e1_ * e2_ * e3_;
}

cplx Weierstrass::reduce(cplx z) const {
    double m = std::round(z.real() / wr_);
    double n = std::round(z.imag() / wi_);
    return z - cplx(m * wr_, n * wi_);
}

cplx Weierstrass::wp(cplx z) const {
    cplx zr = reduce(z);
    cplx v = std::numbers::pi * zr / wa_;
    Theta th = theta_at(v, q_);
    cplx pref = std::numbers::pi / wa_ * t2z_ * t3z_;
    cplx ratio = th.t4 / th.t1;
    // additive constant is wp at the frame's wb/2 half period
    cplx ef3 = -(std::numbers::pi / wa_) * (std::numbers::pi / wa_) *
               (t2z_ * t2z_ * t2z_ * t2z_ + t3z_ * t3z_ * t3z_ * t3z_) / 3.0;
    return ef3 + pref * pref * ratio * ratio;
}

cplx Weierstrass::wp_prime(cplx z) const {
    cplx zr = reduce(z);
    cplx v = std::numbers::pi * zr / wa_;
    Theta th = theta_at(v, q_);
    cplx pref = std::numbers::pi / wa_ * t2z_ * t3z_;
    cplx ratio = th.t4 / th.t1;
    cplx dratio = (th.t4p * th.t1 - th.t4 * th.t1p) / (th.t1 * th.t1);
    return 2.0 * pref * pref * ratio * dratio * (std::numbers::pi / wa_);
}

namespace {

// period integrals 1/sqrt(|d|) with the endpoint root factors peeled off
// analytically under t = mid + half sin(theta); evaluating d itself near a
// root would cap the accuracy at sqrt(root rounding error)
double factored_modulus(double K, const std::vector<double>& roots, double t) {
    double prod = std::abs(K);
    for (double r : roots) prod *= std::abs(t - r);
    return prod;
}

std::vector<double> drop_roots(std::vector<double> roots, double lo, double hi,
                               bool lo_root, bool hi_root) {
    auto drop = [&](double v) {
        size_t best = 0;
        double bd = std::abs(roots[0] - v);
        for (size_t k = 1; k < roots.size(); ++k)
            if (std::abs(roots[k] - v) < bd) { bd = std::abs(roots[k] - v); best = k; }
        roots.erase(roots.begin() + static_cast<long>(best));
    };
    if (lo_root) drop(lo);
    if (hi_root) drop(hi);
    return roots;
}

double period_on_interval(double K, const std::vector<double>& roots, double lo, double hi,
                          bool lo_root, bool hi_root) {
    std::vector<double> others = drop_roots(roots, lo, hi, lo_root, hi_root);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    auto integrand = [&](double th) -> cplx {
        double s = std::sin(th);
        double t = mid + half * s;
        double base = 1.0 / std::sqrt(factored_modulus(K, others, t));
        if (lo_root && hi_root) return base;
        if (hi_root) return std::sqrt(half * (1.0 + s)) * base;
        if (lo_root) return std::sqrt(half * (1.0 - s)) * base;
        return half * std::cos(th) * base;
    };
    return integrate(integrand, -std::numbers::pi / 2, std::numbers::pi / 2, 1e-14, 64, 8192)
        .real();
}

// int_{-inf}^{x1} dt/sqrt(|d|) via t = x1 - (u/(1-u))^2
double period_from_minus_infinity(double K, const std::vector<double>& roots, double x1) {
    std::vector<double> others = drop_roots(roots, x1, x1, true, false);
    auto integrand = [&](double u) -> cplx {
        double s = u / (1.0 - u);
        double t = x1 - s * s;
        return 2.0 / ((1.0 - u) * (1.0 - u) * std::sqrt(factored_modulus(K, others, t)));
    };
    return integrate(integrand, 0.0, 1.0, 1e-14, 64, 8192).real();
}

GroupInfo classify_ratio(double omega2, double omega3) {
    GroupInfo g;
    double rho = omega3 / omega2; // in (0,1)
    g.ratio = omega2 / omega3;
    // continued fraction convergents of rho, denominators capped
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = rho;
    for (int it = 0; it < 40; ++it) {
        double fl = std::floor(x);
        long long a = static_cast<long long>(fl);
        long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > tol::ratio_max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (std::abs(rho - static_cast<double>(p1) / static_cast<double>(q1)) < tol::ratio_detect) {
            g.finite = true;
            g.order = static_cast<int>(2 * q1);
            g.ratio_num = static_cast<int>(q1); // omega2/omega3 = q/p
            g.ratio_den = static_cast<int>(p1);
            break;
        }
        double frac = x - fl;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    if (g.finite && g.ratio_den == 1)
        g.regime = (g.ratio_num % 2 == 0) ? X3Regime::SimplePole : X3Regime::Holomorphic;
    else
        g.regime = X3Regime::Algebraic;
    return g;
}

} // namespace

EllipticData::EllipticData(const Curve& curve) : curve_(&curve) {
    const auto& bp = curve.bx();
    const Poly& d = curve.d();

    // a nearly pinched torus (zero drift) leaves the split double root accurate
    // to only ~sqrt(eps); refuse instead of silently losing digits
    if (bp.x3 - bp.x2 < 1e-6 * (1.0 + bp.x3))
        throw NumericsError("inner branch points collide (vanishing drift)");

    double K = d[d.degree()];
    std::vector<double> rts = {bp.x1, bp.x2, bp.x3};
    if (!bp.x4_infinite) rts.push_back(bp.x4);

    omega1_ = period_on_interval(K, rts, bp.x1, bp.x2, true, true);
    omega2_ = period_on_interval(K, rts, bp.x2, bp.x3, true, true);
    double xy1 = curve.x_of_y1();
    if (std::isinf(xy1)) {
        omega3_ = period_from_minus_infinity(K, rts, bp.x1);
    } else {
        if (!(xy1 < bp.x1)) throw NumericsError("double point X(y1) not left of x1");
        omega3_ = period_on_interval(K, rts, xy1, bp.x1, false, true);
    }
    if (!(omega1_ > 0 && omega2_ > 0 && omega3_ > 0 && omega3_ < omega2_))
        throw NumericsError("period ordering violated");

    x4_infinite_ = bp.x4_infinite;
    Poly dp = d.derivative(), dpp = dp.derivative(), dppp = dpp.derivative();
    if (x4_infinite_) {
        d2_0_ = dpp(0.0);
        d3_0_ = dppp(0.0);
    } else {
        x4_ = bp.x4;
        fp_x4_ = dp(bp.x4);
        fpp_x4_ = dpp(bp.x4);
    }

    E1_ = f(bp.x1);
    E2_ = f(bp.x2);
    E3_ = f(bp.x3);

    wp12_.emplace(omega2_, omega1_);
    wp13_.emplace(omega3_, omega1_);

    group_ = classify_ratio(omega2_, omega3_);
}

double EllipticData::f(double t) const {
    if (x4_infinite_) return (d2_0_ + d3_0_ * t) / 6.0;
    return fpp_x4_ / 6.0 + fp_x4_ / (t - x4_);
}

cplx EllipticData::f(cplx t) const {
    if (x4_infinite_) return (d2_0_ + d3_0_ * t) / 6.0;
    return fpp_x4_ / 6.0 + fp_x4_ / (t - x4_);
}

cplx EllipticData::f_prime(cplx t) const {
    if (x4_infinite_) return d3_0_ / 6.0;
    return -fp_x4_ / ((t - x4_) * (t - x4_));
}

cplx EllipticData::x_of(cplx omega) const {
    cplx P = wp12_->wp(omega);
    if (x4_infinite_) return (6.0 * P - d2_0_) / d3_0_;
    return x4_ + fp_x4_ / (P - fpp_x4_ / 6.0);
}

namespace {

// chordal metric on the Riemann sphere, so tracking survives poles of y
double chordal(cplx u, cplx v) {
    return std::abs(u - v) / std::sqrt((1.0 + std::norm(u)) * (1.0 + std::norm(v)));
}

} // namespace

cplx EllipticData::y_of(cplx omega) const {
    // y is single-valued on the torus; continue it from a fixed reference
    // point by bisection tracking. The reference sits a little off the
    // half-period anchor (where the two y-roots collide and the sheet choice
    // would be arbitrary); picking the smaller-modulus root there is a fixed,
    // deterministic sheet convention shared by every call.
    const cplx anchor(omega2_ / 2, omega1_ / 2);
    const double min_per = std::min({omega1_, omega2_, omega3_});
    const cplx w_ref = anchor + min_per * cplx(1.3e-3, 0.7e-3);
    const cplx y_ref = curve_->y_branches(x_of(w_ref)).first;

    // recursive step: trust the nearest root only when the previous value is
    // well inside one basin, otherwise halve the step
    auto step = [&](auto&& self, cplx wa, cplx ya, cplx wb, int depth) -> cplx {
        auto [r0, r1] = curve_->y_branches(x_of(wb));
        double d0 = chordal(r0, ya), d1 = chordal(r1, ya);
        cplx sel = (d0 <= d1) ? r0 : r1;
        if (std::min(d0, d1) <= 0.25 * chordal(r0, r1) || depth >= 48) return sel;
        cplx wm = 0.5 * (wa + wb);
        cplx ym = self(self, wa, ya, wm, depth + 1);
        return self(self, wm, ym, wb, depth + 1);
    };

    // coarse subdivision keeps recursion shallow on long paths
    cplx dz = omega - w_ref;
    int base = std::max(8, static_cast<int>(std::ceil(std::abs(dz) / (min_per / 8.0))));
    cplx y = y_ref, w_prev = w_ref;
    for (int k = 1; k <= base; ++k) {
        cplx w = w_ref + dz * (static_cast<double>(k) / base);
        y = step(step, w_prev, y, w, 0);
        w_prev = w;
    }
    return y;
}

cplx galois_xi_y(const Curve& c, cplx x, cplx y) { return c.c()(x) / (c.a()(x) * y); }
cplx galois_eta_x(const Curve& c, cplx x, cplx y) { return c.ct()(y) / (c.at()(y) * x); }

WalkParams drift_tilt(const WalkParams& w) {
    const double tilts[][2] = {{1.06, 1.06}, {1.12, 1.03}, {1.03, 1.12},
                               {1.12, 1.12}, {1.25, 1.06}, {1.06, 1.25}};
    for (auto [ta, tb] : tilts) {
        std::array<std::array<double, 3>, 3> q{};
        double z = 0.0;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j) {
                double v = w.p(i, j) * std::pow(ta, i) * std::pow(tb, j);
                q[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)] = v;
                z += v;
            }
        for (auto& row : q)
            for (auto& v : row) v /= z;
        try {
            return WalkParams(q, w.n0(), w.m0());
        } catch (const ValidationError&) {
            continue; // this tilt direction does not make both drifts positive
        }
    }
    throw NumericsError("no exponential tilt yields positive drift");
}

GroupInfo classify_walk(const WalkParams& w) {
    try {
        return EllipticData(Curve(w)).group();
    } catch (const NumericsError&) {
        return EllipticData(Curve(drift_tilt(w))).group();
    }
}

} // namespace qwalk
