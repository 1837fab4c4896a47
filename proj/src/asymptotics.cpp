#include "qwalk/asymptotics.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/quad.hpp"
#include "qwalk/tolerances.hpp"

#include <cmath>
#include <numbers>

namespace qwalk {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= x;
    return r;
}

struct PhiDerivs {
    double f, fu, fv, fuu, fuv, fvv;
};

PhiDerivs phi_derivs(const WalkParams& w, double u, double v) {
    PhiDerivs d{};
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
            double t = w.p(i, j) * std::exp(i * u + j * v);
            d.f += t;
            d.fu += i * t;
            d.fv += j * t;
            d.fuu += i * i * t;
            d.fuv += i * j * t;
            d.fvv += j * j * t;
        }
    return d;
}

bool wrong_parity(const WalkParams& w, int s) {
    return w.is_diagonal() && (s + w.n0() + w.m0()) % 2 != 0;
}

} // namespace

TailRegime tail_regime(const GroupInfo& g) {
    if (g.finite && g.ratio_den == 1)
        return g.ratio_num % 2 == 0 ? TailRegime::Even2N : TailRegime::Odd2N1;
    return TailRegime::Irrational;
}

double phi_uv(const WalkParams& w, double u, double v) {
    return phi_derivs(w, u, v).f;
}

SaddlePoint saddle(const WalkParams& w, double gamma) {
    if (!(gamma >= 0 && gamma <= std::numbers::pi / 2 + 1e-12))
        throw NumericsError("saddle direction outside the quadrant");
    Curve c(w);
    const double x3 = c.bx().x3;
    double u = std::log(x3);
    double v = 0.5 * std::log(c.c()(x3) / c.a()(x3)); // Y1(x3), double root
    const int steps = 64;
    for (int s = 1; s <= steps; ++s) {
        double g = gamma * s / steps;
        double sg = std::sin(g), cg = std::cos(g);
        bool ok = false;
        for (int it = 0; it < 50; ++it) {
            PhiDerivs d = phi_derivs(w, u, v);
            double f1 = d.f - 1.0;
            double f2 = sg * d.fu - cg * d.fv;
            double j11 = d.fu, j12 = d.fv;
            double j21 = sg * d.fuu - cg * d.fuv;
            double j22 = sg * d.fuv - cg * d.fvv;
            double det = j11 * j22 - j12 * j21;
            if (std::abs(det) < 1e-300) break;
            double du = (f1 * j22 - f2 * j12) / det;
            double dv = (j11 * f2 - j21 * f1) / det;
            u -= du;
            v -= dv;
            if (std::abs(du) + std::abs(dv) < tol::newton) {
                ok = true;
                break;
            }
        }
        if (!ok) throw NumericsError("saddle continuation did not converge");
    }
    SaddlePoint sp;
    sp.gamma = gamma;
    sp.u = u;
    sp.v = v;
    sp.sx = std::exp(u);
    sp.sy = std::exp(v);
    return sp;
}

double tail_constant_h1(const Curve& c, int n0, int m0) {
    const double x3 = c.bx().x3;
    double a3 = c.a()(x3), c3 = c.c()(x3);
    double dp3 = c.d().derivative()(x3);
    return m0 * std::pow(x3, n0 + 0.5) / (4.0 * std::sqrt(std::numbers::pi)) *
           std::sqrt(-dp3 / (a3 * c3)) * std::pow(c3 / a3, 0.5 * m0);
}

double tail_constant_h2(const Gluing& gl, int n0, int m0) {
    const EllipticData& ed = gl.elliptic();
    const Curve& c = ed.curve();
    const auto& b = c.bx();
    switch (tail_regime(ed.group())) {
    case TailRegime::Odd2N1:
        // for an exactly odd period ratio the gluing part decays strictly
        // faster than k^{-3/2} x3^{-k}; rational detection is borderline by
        // nature, so the reported tail constant comes from the unified route,
        // which stays correct across the degeneration
        return 0.0;
    case TailRegime::Even2N: {
        double a2 = c.a()(b.x2), c2 = c.c()(b.x2);
        double dp2 = c.d().derivative()(b.x2);
        return -m0 * ipow(b.x2, n0) * std::sqrt(b.x3) /
               (4.0 * std::sqrt(std::numbers::pi)) *
               std::sqrt(dp2 / (a2 * c2)) *
               std::sqrt(-gl.res_x2() / gl.res_x3()) * std::pow(c2 / a2, 0.5 * m0);
    }
    case TailRegime::Irrational:
    default: {
        // when omega2/2 is off the period lattice the gluing map stays finite
        // at x3 and the second constant comes from differentiating the slit
        // integral there; this requires w to be pole free inside the gluing
        // domain (period ratio below 2), otherwise the slit representation
        // picks up pole corrections that this closed form does not include
        if (!gl.interior_poles().empty())
            throw NumericsError("gluing-part tail constant needs a pole-free gluing map");
        double w23 = ed.wp13().wp(cplx(ed.omega2() / 2, 0)).real();
        double wp_p = ed.wp13().wp_prime(cplx(ed.omega2() / 2, 0)).real();
        double rad = -ed.f_prime(cplx(b.x3, 0)).real() /
                     ((ed.E3() - ed.E2()) * (ed.E3() - ed.E1()));
        if (rad < 0) throw NumericsError("branch weight radicand negative");
        double pre = std::sqrt(b.x3) * wp_p * std::sqrt(rad / std::numbers::pi) /
                     (2.0 * std::numbers::pi);
        auto integrand = [&](double t) -> cplx {
            auto [wv, dwv] = gl.w_and_dw(cplx(t, 0));
            double md = std::max(0.0, -c.d()(t));
            cplx den = wv.real() - w23;
            return dwv.real() * ipow(t, n0) * mu_factor(c, t, m0).real() *
                   std::sqrt(md) / (den * den);
        };
        cplx I = integrate_sqrt_endpoints(integrand, b.x1, b.x2, 1e-9, 128, 8192);
        return pre * I.real();
    }
    }
}

double tail_unified(const AbsorptionGF& gf) {
    const Curve& c = gf.curve();
    const double x3 = c.bx().x3;
    double a3 = c.a()(x3), c3 = c.c()(x3);
    double dp3 = c.d().derivative()(x3);
    double sy0 = std::sqrt(c3 / a3); // Y(x3)
    int n0 = gf.walk().n0(), m0 = gf.walk().m0();
    double bracket =
        m0 * std::pow(c3 / a3, 0.5 * (m0 - 1)) * ipow(x3, n0) - gf.htilde_prime(sy0);
    return std::sqrt(-x3 * dp3) / (4.0 * std::sqrt(std::numbers::pi) * a3) * bracket;
}

TailAsymptotics tail_asymptotics(const AbsorptionGF& gf) {
    TailAsymptotics t;
    t.regime = tail_regime(gf.elliptic().group());
    t.rate = gf.curve().bx().x3;
    t.power = 1.5;
    t.h1k_const = tail_constant_h1(gf.curve(), gf.walk().n0(), gf.walk().m0());
    t.parity_factor = gf.walk().is_diagonal() ? 2.0 : 1.0;
    // the unified route evaluates the actual slit integrals, so it reports the
    // constant that describes the coefficients even when the period ratio sits
    // near an odd integer, where the split above degenerates
    t.constant = t.parity_factor * tail_unified(gf);
    if (t.regime == TailRegime::Irrational && !gf.gluing().interior_poles().empty())
        // the closed gluing-part form breaks once w has interior poles
        // (ratio above 2); report the exact complement instead
        t.h2k_const = t.constant / t.parity_factor - t.h1k_const;
    else
        t.h2k_const = tail_constant_h2(gf.gluing(), gf.walk().n0(), gf.walk().m0());
    return t;
}

double green_interior(const AbsorptionGF& gf, long i, long j) {
    if (i <= 0 || j <= 0) throw NumericsError("interior direction needs i, j > 0");
    const WalkParams& w = gf.walk();
    if (wrong_parity(w, static_cast<int>((i + j) % 2))) return 0.0;
    double tg = static_cast<double>(j) / static_cast<double>(i);
    SaddlePoint sp = saddle(w, std::atan(tg));
    int n0 = w.n0(), m0 = w.m0();
    double bracket = ipow(sp.sx, n0) * ipow(sp.sy, m0) -
                     gf.h(cplx(sp.sx, 0)).real() - gf.htilde(cplx(sp.sy, 0)).real() -
                     gf.h00();
    if (bracket <= 0) throw NumericsError("saddle bracket is not positive");

    // curvature of X1(sy*y) y^{tan gamma} / sx at y = 1, central differences
    // with one Richardson sweep
    const Curve& c = gf.curve();
    auto F = [&](double y) {
        return c.x_branches(cplx(sp.sy * y, 0)).second.real() *
               std::pow(y, tg) / sp.sx;
    };
    auto d2 = [&](double h) { return (F(1 + h) - 2.0 * F(1.0) + F(1 - h)) / (h * h); };
    double h = tol::fd_step;
    double D2 = (4.0 * d2(h / 2) - d2(h)) / 3.0;
    double dts = c.dt()(sp.sy);
    if (!(D2 < 0) || !(dts > 0))
        throw NumericsError("saddle curvature has the wrong sign");
    double C = sp.sy / std::sqrt(2.0 * std::numbers::pi * dts * (-D2));
    double val = bracket * C / std::sqrt(static_cast<double>(i)) *
                 std::pow(sp.sx, -static_cast<double>(i)) *
                 std::pow(sp.sy, -static_cast<double>(j));
    return w.is_diagonal() ? 2.0 * val : val;
}

double green_axis(const AbsorptionGF& gf, long i, long j) {
    if (i <= 0 || j <= 0) throw NumericsError("axis direction needs i, j > 0");
    const WalkParams& w = gf.walk();
    if (wrong_parity(w, static_cast<int>((i + j) % 2))) return 0.0;
    const Curve& c = gf.curve();
    const double x3 = c.bx().x3;
    double a3 = c.a()(x3), c3 = c.c()(x3);
    double sy0 = std::sqrt(c3 / a3);
    double syp0 = x3 * std::sqrt(c.pl()(x3)) / (2.0 * std::pow(a3, 1.5) * std::sqrt(c3));

    auto X1 = [&](double y) { return c.x_branches(cplx(y, 0)).second.real(); };
    auto d2 = [&](double h) {
        return (X1(sy0 + h) - 2.0 * X1(sy0) + X1(sy0 - h)) / (h * h);
    };
    double h = tol::fd_step * (1.0 + sy0);
    double X1pp = (4.0 * d2(h / 2) - d2(h)) / 3.0;
    double rad = -c.dt()(sy0) * X1pp;
    if (rad <= 0) throw NumericsError("axis curvature radicand not positive");
    double C0 = std::sqrt(2.0 / std::numbers::pi) * syp0 * std::sqrt(x3) / std::sqrt(rad);

    int n0 = w.n0(), m0 = w.m0();
    double bracket = m0 * ipow(x3, n0) * ipow(sy0, m0 - 1) - gf.htilde_prime(sy0);
    SaddlePoint sp = saddle(w, std::atan2(static_cast<double>(j), static_cast<double>(i)));
    double val = C0 * bracket * (static_cast<double>(j) / (i * std::sqrt(static_cast<double>(i)))) *
                 std::pow(sp.sx, -static_cast<double>(i)) *
                 std::pow(sp.sy, -static_cast<double>(j));
    return w.is_diagonal() ? 2.0 * val : val;
}

double green_residue_form(const AbsorptionGF& gf, int i, int j) {
    const Curve& c = gf.curve();
    int n0 = gf.walk().n0(), m0 = gf.walk().m0();
    auto fx = [&](cplx x) {
        cplx y1v = c.y_branches(x).second;
        return gf.h(x) * x / (c.sqrt_d(x) * std::pow(x, i) * std::pow(y1v, j));
    };
    auto fy = [&](cplx y) {
        cplx x1v = c.x_branches(y).second;
        cplx num = gf.htilde(y) + gf.h00() -
                   std::pow(x1v, n0) * std::pow(y, m0);
        return num * y / (c.sqrt_dt(y) * std::pow(x1v, i) * std::pow(y, j));
    };
    double prev = 0;
    for (int n = 512; n <= 8192; n *= 2) {
        cplx acc = 0;
        for (int k = 0; k < n / 2; ++k) {
            double th = 2.0 * std::numbers::pi * (k + 0.5) / n;
            cplx z = std::polar(1.0, th);
            acc += fx(z) + fy(z);
        }
        // conjugate nodes double the real part; -1/(2 pi i) * i dtheta = -1/(2 pi)
        double G = -2.0 * acc.real() / n;
        if (n > 512 && std::abs(G - prev) < 1e-9 * (1.0 + std::abs(G))) return G;
        prev = G;
    }
    return prev;
}

double martin_kernel(const AbsorptionGF& num, const AbsorptionGF& den, double gamma) {
    const Curve& c = num.curve();
    if (gamma == 0.0) {
        const double x3 = c.bx().x3;
        double sy0 = std::sqrt(c.c()(x3) / c.a()(x3));
        auto bracket = [&](const AbsorptionGF& g) {
            int n0 = g.walk().n0(), m0 = g.walk().m0();
            return m0 * ipow(x3, n0) * ipow(sy0, m0 - 1) - g.htilde_prime(sy0);
        };
        return bracket(num) / bracket(den);
    }
    SaddlePoint sp = saddle(num.walk(), gamma);
    auto bracket = [&](const AbsorptionGF& g) {
        int n0 = g.walk().n0(), m0 = g.walk().m0();
        return ipow(sp.sx, n0) * ipow(sp.sy, m0) - g.h(cplx(sp.sx, 0)).real() -
               g.htilde(cplx(sp.sy, 0)).real() - g.h00();
    };
    return bracket(num) / bracket(den);
}

} // namespace qwalk
