#include "qwalk/gluing.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/quad.hpp"
#include "qwalk/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qwalk {

namespace {

// Carlson symmetric form R_F by duplication, principal square roots.
// Branch jumps only move the abelian integral by lattice elements, which
// the (even, periodic) Weierstrass evaluation downstream cannot see.
cplx carlson_rf(cplx x, cplx y, cplx z) {
    cplx mu = (x + y + z) / 3.0;
    for (int it = 0; it < 64; ++it) {
        cplx sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        cplx lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        mu = (x + y + z) / 3.0;
        double e = std::max({std::abs(x - mu), std::abs(y - mu), std::abs(z - mu)});
        if (e <= 1e-8 * std::abs(mu)) break;
    }
    cplx X = 1.0 - x / mu, Y = 1.0 - y / mu, Z = -X - Y;
    cplx e2 = X * Y - Z * Z, e3 = X * Y * Z;
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) /
           std::sqrt(mu);
}

} // namespace

Gluing::Gluing(const EllipticData& ed) : ed_(&ed) {
    const auto& bp = ed.curve().bx();
    const double E1 = ed.E1(), E2 = ed.E2(), E3 = ed.E3();
    res_x2_ = (E2 - E1) * (E2 - E3) / ed.f_prime(cplx(bp.x2, 0)).real();
    res_x3_ = (E3 - E1) * (E3 - E2) / ed.f_prime(cplx(bp.x3, 0)).real();
    rf_base_ = carlson_rf(cplx(E2 - E1, 0), cplx(0, 0), cplx(E2 - E3, 0));
}

// half the integral of dz / sqrt((z-E1)(z-E2)(z-E3)) from E2 to f(t), up to
// a lattice element and a global sign
cplx Gluing::abel_rf(cplx ft) const {
    return rf_base_ -
           carlson_rf(ft - ed_->E1(), ft - ed_->E2(), ft - ed_->E3());
}

Gluing::Tracked Gluing::track(cplx ft, int n) const {
    const double E1 = ed_->E1(), E2 = ed_->E2(), E3 = ed_->E3();
    const cplx delta = ft - E2;
    const GaussRule& r = gauss_rule(n);

    auto G = [&](double u) {
        cplx z = E2 + delta * (u * u);
        return (z - E1) * (z - E3);
    };

    cplx s_prev = std::sqrt(G(0.0));
    cplx sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = 0.5 * (1.0 + r.x[static_cast<size_t>(i)]);
        cplx s = std::sqrt(G(u));
        if (std::abs(s - s_prev) > std::abs(s + s_prev)) s = -s;
        s_prev = s;
        sum += (0.5 * r.w[static_cast<size_t>(i)]) / s;
    }
    cplx s_end = std::sqrt(G(1.0));
    if (std::abs(s_end - s_prev) > std::abs(s_end + s_prev)) s_end = -s_end;
    return {s_end, sum};
}

Gluing::AbelValue Gluing::abel(cplx t) const {
    const cplx ft = ed_->f(t);
    const cplx delta = ft - ed_->E2();
    const cplx sqrt_delta = std::sqrt(delta);

    Tracked prev = track(ft, 96);
    Tracked cur = prev;
    for (int n = 192; n <= 3072; n *= 2) {
        cur = track(ft, n);
        if (std::abs(cur.integral - prev.integral) <=
            tol::quad_rel * (1.0 + std::abs(cur.integral)))
            break;
        prev = cur;
    }
    AbelValue v;
    v.I = sqrt_delta * cur.integral;
    v.dI = ed_->f_prime(t) / (2.0 * sqrt_delta * cur.value_at_1);
    return v;
}

cplx Gluing::w(cplx t) const { return ed_->wp13().wp(abel_rf(ed_->f(t))); }

std::pair<cplx, cplx> Gluing::w_and_dw(cplx t) const {
    cplx ft = ed_->f(t);
    cplx I = abel_rf(ft);
    cplx wv = ed_->wp13().wp(I);
    cplx S = std::sqrt(ft - ed_->E1()) * std::sqrt(ft - ed_->E2()) *
             std::sqrt(ft - ed_->E3());
    cplx dw = ed_->wp13().wp_prime(I) * ed_->f_prime(t) / (2.0 * S);
    // the square roots leave the sign open; settle it against w itself,
    // stepping well short of the pole at x2
    double h = 1e-4 * std::min(1.0 + std::abs(t),
                               std::abs(t - ed_->curve().bx().x2));
    cplx fd = (w(t + h) - w(t - h)) / (2.0 * h);
    if (std::abs(fd - dw) > std::abs(fd + dw)) dw = -dw;
    return {wv, dw};
}

double Gluing::res_x2_sampled() const {
    const double x2 = ed_->curve().bx().x2;
    const double r = tol::residue_radius;
    cplx acc = 0.0;
    for (int k = 0; k < tol::residue_points; ++k) {
        double th = 2.0 * std::numbers::pi * (k + 0.5) / tol::residue_points;
        cplx e = std::polar(1.0, th);
        acc += w(x2 + r * e) * (r * e);
    }
    return (acc / static_cast<double>(tol::residue_points)).real();
}

double Gluing::w1_x3() const { return ed_->wp13().wp(cplx(ed_->omega2() / 2, 0)).real(); }

double Gluing::w2_x3() const {
    const double x3 = ed_->curve().bx().x3;
    const double E1 = ed_->E1(), E2 = ed_->E2(), E3 = ed_->E3();
    double fp3 = ed_->f_prime(cplx(x3, 0)).real();
    double rad = -fp3 / ((E3 - E2) * (E3 - E1));
    if (rad < 0) throw NumericsError("branch coefficient radicand negative");
    double wp_p = ed_->wp13().wp_prime(cplx(ed_->omega2() / 2, 0)).real();
    return -std::sqrt(rad) * wp_p;
}

std::vector<double> Gluing::interior_poles() const {
    std::vector<double> out;
    const double w2 = ed_->omega2(), w3 = ed_->omega3(), w1 = ed_->omega1();
    auto g = ed_->group();
    // strict k*omega3 < omega2/2, decided in exact arithmetic for finite groups
    auto inside = [&](int k) {
        if (g.finite) return 2 * k * g.ratio_den < g.ratio_num;
        return k * w3 < w2 / 2 - 1e-9 * w2;
    };
    for (int k = 1; inside(k); ++k)
        out.push_back(ed_->x_of(cplx(w2 / 2 + k * w3, w1 / 2)).real());
    return out;
}

double Gluing::sigma(double t) const {
    auto g = ed_->group();
    if (!(g.finite && g.ratio_den == 1 && g.ratio_num % 2 == 0))
        throw NumericsError("slit involution defined only when omega2/omega3 is an even integer");
    double I = abel(cplx(t, 0)).I.real();
    return ed_->x_of(cplx(ed_->omega2() - I, ed_->omega1() / 2)).real();
}

std::vector<cplx> Gluing::sample_m_curve(int n) const {
    const auto& by = ed_->curve().by();
    std::vector<cplx> pts;
    pts.reserve(static_cast<size_t>(n));
    int half = n / 2;
    for (int j = 0; j < half; ++j) {
        double s = by.x1 + (by.x2 - by.x1) * (j + 0.5) / half;
        pts.push_back(ed_->curve().x0_slit(s, true));
    }
    for (int j = half - 1; j >= 0; --j) {
        double s = by.x1 + (by.x2 - by.x1) * (j + 0.5) / half;
        pts.push_back(ed_->curve().x0_slit(s, false));
    }
    return pts;
}

DeltaZeroStructure delta_zero_structure(const Curve& c) {
    if (std::abs(c.walk().group_determinant()) > 1e-10)
        throw NumericsError("circle structure requires a vanishing group determinant");

    DeltaZeroStructure s{};
    const Poly& r1 = c.r1();
    auto rts = r1.roots();
    std::vector<double> real_roots;
    for (const auto& z : rts)
        if (std::abs(z.imag()) < 1e-9 * (1.0 + std::abs(z))) real_roots.push_back(z.real());
    if (real_roots.size() < 2) throw NumericsError("resultant r1 lacks two real roots");
    std::sort(real_roots.begin(), real_roots.end());
    s.l1 = real_roots.front();
    s.l2 = real_roots.back();
    if (!(s.l1 < 0 && s.l2 > 0)) throw NumericsError("r1 roots do not straddle zero");
    s.gamma = 0.5 * (s.l1 + s.l2);
    s.rho = 0.5 * (s.l2 - s.l1);

    // proportionality r = alpha r1, r2 = beta r1 (coefficient-wise)
    int kmax = 0;
    double best = 0;
    for (int k = 0; k <= r1.degree(); ++k)
        if (std::abs(r1[k]) > best) { best = std::abs(r1[k]); kmax = k; }
    s.alpha = c.r()[kmax] / r1[kmax];
    s.beta = c.r2()[kmax] / r1[kmax];
    for (int k = 0; k <= std::max({r1.degree(), c.r().degree(), c.r2().degree()}); ++k) {
        if (std::abs(c.r()[k] - s.alpha * r1[k]) > 1e-9 * (1.0 + best) ||
            std::abs(c.r2()[k] - s.beta * r1[k]) > 1e-9 * (1.0 + best))
            throw NumericsError("resultant polynomials are not proportional");
    }
    return s;
}

} // namespace qwalk
