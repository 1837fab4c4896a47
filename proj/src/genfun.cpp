#include "qwalk/genfun.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/quad.hpp"
#include "qwalk/tolerances.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace qwalk {

namespace {

cplx ipow(cplx x, int n) {
    cplx r = 1.0;
    for (int k = 0; k < n; ++k) r *= x;
    return r;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= x;
    return r;
}

double slit_dist(cplx z, double s1, double s2) {
    if (z.real() >= s1 && z.real() <= s2) return std::abs(z.imag());
    return std::min(std::abs(z - cplx(s1, 0)), std::abs(z - cplx(s2, 0)));
}

bool inside_polygon(const std::vector<cplx>& poly, cplx p) {
    bool in = false;
    for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        double yi = poly[i].imag(), yj = poly[j].imag();
        if ((yi > p.imag()) != (yj > p.imag())) {
            double xc = poly[j].real() +
                        (p.imag() - yj) / (yi - yj) * (poly[i].real() - poly[j].real());
            if (p.real() < xc) in = !in;
        }
    }
    return in;
}

std::array<std::array<double, 3>, 3> jump_table(const WalkParams& w) {
    std::array<std::array<double, 3>, 3> p{};
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) p[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)] = w.p(i, j);
    return p;
}

} // namespace

cplx mu_factor(const Curve& c, cplx t, int m0) {
    cplx a = c.a()(t), b = c.b()(t), d = c.d()(t);
    cplx sum = 0.0;
    double binom = m0; // C(m0, 1)
    for (int k = 0; 2 * k + 1 <= m0; ++k) {
        if (k > 0) {
            int j = 2 * k - 1;
            binom *= static_cast<double>(m0 - j) * (m0 - j - 1) / ((j + 1.0) * (j + 2.0));
        }
        sum += binom * ipow(d, k) * ipow(-b, m0 - 2 * k - 1);
    }
    return sum / ipow(2.0 * a, m0);
}

double absorbed_bound_A(const WalkParams& w) {
    double up = w.p(1, 1) + w.p(0, 1) + w.p(-1, 1);
    double dn = w.p(1, -1) + w.p(0, -1) + w.p(-1, -1);
    double rt = w.p(1, 1) + w.p(1, 0) + w.p(1, -1);
    double lt = w.p(-1, 1) + w.p(-1, 0) + w.p(-1, -1);
    // x-axis absorption from height m0 scales with the vertical ratio, the
    // y-axis term with the horizontal one
    return ipow(dn / up, w.m0()) + ipow(lt / rt, w.n0());
}

std::pair<double, double> absorbed_bounds(const WalkParams& w) {
    double A = absorbed_bound_A(w);
    return {A / 2, std::min(A, 1.0)};
}

double finite_group_absorbed(const WalkParams& w) {
    Curve c(w);
    EllipticData ed(c);
    GroupInfo g = ed.group();
    if (!g.finite || g.ratio_den != 1)
        throw NumericsError("orbit sum requires an integer period ratio");
    const int n = g.ratio_num;
    auto f = [&](cplx x, cplx y) { return (ipow(x, w.n0()) * ipow(y, w.m0())).real(); };

    // two alternating chains from (1,1); they meet again at word length n
    cplx xa = 1.0, ya = 1.0, xb = 1.0, yb = 1.0;
    double total = f(xa, ya);
    double sgn = 1.0;
    for (int l = 1; l <= n; ++l) {
        if (l % 2 == 1) {
            ya = galois_xi_y(c, xa, ya);
            xb = galois_eta_x(c, xb, yb);
        } else {
            xa = galois_eta_x(c, xa, ya);
            yb = galois_xi_y(c, xb, yb);
        }
        sgn = -sgn;
        if (l < n) {
            total += sgn * (f(xa, ya) + f(xb, yb));
        } else {
            if (std::abs(xa - xb) + std::abs(ya - yb) >
                1e-8 * (1.0 + std::abs(xa) + std::abs(ya)))
                throw NumericsError("symmetry orbit failed to close");
            total += sgn * f(xa, ya);
        }
    }
    return 1.0 - total;
}

// one frame of the construction: the curve seen from the x side (or from the
// y side for the transposed walk), its uniformization, gluing function, and
// the start-independent part of the slit quadrature
struct AbsorptionGF::SideGeom {
    Curve curve;
    EllipticData ed;
    Gluing gl;
    std::vector<cplx> t;    // contour nodes, dipped below the slit
    std::vector<cplx> base; // quadrature weight * sqrt(-d) * w' * dt/ds * r / pi
    std::vector<cplx> W;    // gluing values at the nodes
    std::vector<cplx> mcurve; // boundary curve, for locating interior points
    double w0 = 0;            // gluing value at the origin
    double xr = 0;            // right real crossing of the boundary curve

    SideGeom(const WalkParams& w, double tol) : curve(w), ed(curve), gl(ed) {
        const auto& b = curve.bx();
        const double mid = 0.5 * (b.x1 + b.x2), half = 0.5 * (b.x2 - b.x1);

        // orientation of the jump across the slit relative to mu
        double r;
        {
            cplx lo = curve.y0_slit(mid, false), up = curve.y0_slit(mid, true);
            double sd = std::sqrt(-curve.d()(mid));
            cplx ratio = (lo - up) / (cplx(0.0, 2.0) * sd * mu_factor(curve, mid, 1));
            if (std::abs(std::abs(ratio.real()) - 1.0) > 1e-6 ||
                std::abs(ratio.imag()) > 1e-6)
                throw NumericsError("slit jump density inconsistent with branch limits");
            r = ratio.real() > 0 ? 1.0 : -1.0;
        }

        w0 = gl.w(cplx(0.0, 0.0)).real();
        mcurve = gl.sample_m_curve(360);

        // right crossing of M = X0([y1,y2]); the double point X(y2) lies in (x2, x3)
        {
            double y2 = curve.by().x2;
            double av = curve.at()(y2);
            xr = std::abs(av) > 1e-12 ? -curve.bt()(y2) / (2.0 * av) : b.x3;
            if (!(xr > b.x2 && xr < b.x3)) xr = 0.5 * (b.x2 + b.x3);
        }

        // composite quadrature: a main band plus a narrow band hugging x2,
        // where the gluing function blows up and evaluations whose image is
        // large need dense nodes; doubled until three probe evaluations settle.
        // The contour dips below the slit (the integrand continues analytically
        // into a strip), so the Cauchy kernel never becomes near-singular for
        // evaluation points in the closed upper half plane; points below are
        // reached by reflection in eval_side
        const double split = b.x2 - 0.02 * (b.x2 - b.x1);
        const double depth = 0.1 * half;
        auto dip = [&](double s) {
            double u = std::numbers::pi * (s - b.x1) / (b.x2 - b.x1);
            return std::make_pair(cplx(s, -depth * std::sin(u)),
                                  cplx(1.0, -depth * std::numbers::pi /
                                                (b.x2 - b.x1) * std::cos(u)));
        };
        const cplx xref1(mid, 0.25 * half);
        const cplx xref2(b.x2 + std::min(0.02 * (b.x3 - b.x2), 0.5 * (xr - b.x2)), 0.0);
        const cplx xref3(mid, 0.0); // on the slit, closest approach to the contour
        std::array<cplx, 3> prev{};
        bool have_prev = false;
        for (int n = 96; n <= 12288; n *= 2) {
            t.clear();
            base.clear();
            W.clear();
            auto add_band = [&](double lo, double hi, int nb) {
                const GaussRule& rule = gauss_rule(nb);
                const double bm = 0.5 * (lo + hi), bh = 0.5 * (hi - lo);
                for (int j = 0; j < nb; ++j) {
                    double th = 0.5 * std::numbers::pi * rule.x[static_cast<size_t>(j)];
                    auto [tj, dtj] = dip(bm + bh * std::sin(th));
                    cplx sd = std::sqrt(-curve.d()(tj));
                    // -d is positive on the slit and the dip is shallow, so the
                    // continued square root keeps a positive real part
                    if (sd.real() < 0) sd = -sd;
                    auto [wv, dwv] = gl.w_and_dw(tj);
                    t.push_back(tj);
                    W.push_back(wv);
                    base.push_back(rule.w[static_cast<size_t>(j)] *
                                   (0.5 * std::numbers::pi) * bh * std::cos(th) *
                                   sd * dwv * dtj * r / std::numbers::pi);
                }
            };
            add_band(b.x1, split, n);
            add_band(split, b.x2, n);
            // probe with exponents (1,1)
            auto probe = [&](cplx xp) {
                cplx wx = gl.w(xp);
                cplx s = 0.0;
                for (size_t j = 0; j < t.size(); ++j)
                    s += base[j] * t[j] * mu_factor(curve, t[j], 1) * (wx - w0) /
                         ((W[j] - wx) * (W[j] - w0));
                return s;
            };
            std::array<cplx, 3> val{probe(xref1), probe(xref2), probe(xref3)};
            bool settled = have_prev;
            for (int q = 0; q < 3 && settled; ++q)
                settled = std::abs(val[static_cast<size_t>(q)] - prev[static_cast<size_t>(q)]) <=
                          tol * (1.0 + std::abs(val[static_cast<size_t>(q)]));
            if (settled) break;
            prev = val;
            have_prev = true;
        }
    }
};

AbsorptionGF::AbsorptionGF(const WalkParams& w, double tol) : w_(w), tol_(tol) {
    gx_ = std::make_shared<SideGeom>(w, tol);
    gy_ = std::make_shared<SideGeom>(w.transposed(), tol);
    calibrate();
}

AbsorptionGF::AbsorptionGF(const AbsorptionGF& b, int n0, int m0)
    : w_(jump_table(b.w_), n0, m0), tol_(b.tol_), gx_(b.gx_), gy_(b.gy_) {
    calibrate();
}

AbsorptionGF AbsorptionGF::with_start(int n0, int m0) const {
    return AbsorptionGF(*this, n0, m0);
}

const Curve& AbsorptionGF::curve() const { return gx_->curve; }
const EllipticData& AbsorptionGF::elliptic() const { return gx_->ed; }
const Gluing& AbsorptionGF::gluing() const { return gx_->gl; }
const Curve& AbsorptionGF::curve_transposed() const { return gy_->curve; }

std::vector<cplx> AbsorptionGF::assemble(const SideGeom& g, int n0, int m0) const {
    std::vector<cplx> A(g.t.size());
    for (size_t j = 0; j < g.t.size(); ++j)
        A[j] = g.base[j] * ipow(g.t[j], n0) * mu_factor(g.curve, g.t[j], m0);
    return A;
}

cplx AbsorptionGF::eval_side(const SideGeom& g, const std::vector<cplx>& A, int n0,
                             int m0, cplx x) const {
    // the contour sits below the slit, so this branch of the integral is the
    // continuation from above; reach the lower half plane by reflection
    if (x.imag() < 0) return std::conj(eval_side(g, A, n0, m0, std::conj(x)));
    cplx y = g.curve.y0(x);
    cplx wx = g.gl.w(x);
    cplx s = 0.0;
    for (size_t j = 0; j < A.size(); ++j)
        s += A[j] * (wx - g.w0) / ((g.W[j] - wx) * (g.W[j] - g.w0));
    cplx term = ipow(x, n0) * ipow(y, m0);
    if (!std::isfinite(std::abs(term))) {
        // both y-roots escape like x^{-1/2} where the leading coefficients
        // vanish together; the monomial limit is zero when x^{n0} wins
        if (std::abs(x) < 1e-12 && 2 * n0 > m0)
            term = 0.0;
        else
            throw NumericsError("monomial term diverges at evaluation point");
    }
    return term + sign_ * s;
}

void AbsorptionGF::calibrate() {
    const int n0 = w_.n0(), m0 = w_.m0();
    Ax_ = assemble(*gx_, n0, m0);
    Ay_ = assemble(*gy_, m0, n0);

    // anchor points above the inner slit, strictly inside the gluing domain
    // and clear of both slits (the kernel is near-singular next to them);
    // the y-image must also keep its distance from the transposed slit
    const auto& b = gx_->curve.bx();
    const auto& bt = gy_->curve.bx();
    const double mid = 0.5 * (b.x1 + b.x2), half = 0.5 * (b.x2 - b.x1);
    const double halft = 0.5 * (bt.x2 - bt.x1);
    std::vector<cplx> anchors;
    {
        // the boundary can be an open arc (it escapes to infinity when the
        // leading y-coefficient vanishes at the slit end); the point-in-polygon
        // test only makes sense when the sampled curve closes up
        const auto& M = gx_->mcurve;
        bool closed = std::abs(M.front() - M.back()) <
                      0.05 * (1.0 + std::abs(M.front()));
        double scale = 1.0;
        if (closed) {
            double s = 1.0;
            for (int attempt = 0; attempt < 8; ++attempt) {
                bool ok = true;
                for (int k = 0; k < 4 && ok; ++k)
                    ok = inside_polygon(M, cplx(mid, (0.4 + 0.1 * k) * s * half));
                if (ok) {
                    scale = s;
                    break;
                }
                s *= 0.6;
            }
        }
        for (double gate : {0.1, 0.02, 0.0}) {
            for (int k = 0; k < 12 && anchors.size() < 4; ++k) {
                cplx x(mid, (0.4 + 0.1 * k) * scale * half);
                if (closed && !inside_polygon(M, x)) continue;
                cplx y = gx_->curve.y0(x);
                if (slit_dist(x, b.x1, b.x2) < gate * half ||
                    slit_dist(y, bt.x1, bt.x2) < gate * halft)
                    continue;
                anchors.push_back(x);
            }
            if (anchors.size() >= 4) break;
            anchors.clear();
        }
        if (anchors.empty())
            for (int k = 0; k < 4; ++k)
                anchors.push_back(cplx(mid, (0.5 + 0.3 * k) * scale * half));
    }

    for (double s : {1.0, -1.0}) {
        sign_ = s;
        double mean = 0, lo = 0, hi = 0, im = 0;
        bool first = true;
        for (cplx x : anchors) {
            cplx y = gx_->curve.y0(x);
            cplx v = ipow(x, n0) * ipow(y, m0) - eval_side(*gx_, Ax_, n0, m0, x) -
                     eval_side(*gy_, Ay_, m0, n0, y);
            double vr = v.real();
            mean += vr / anchors.size();
            lo = first ? vr : std::min(lo, vr);
            hi = first ? vr : std::max(hi, vr);
            im = std::max(im, std::abs(v.imag()));
            first = false;
        }
        h00_ = mean;
        h00_spread_ = std::max(hi - lo, im);
        if (h00_spread_ <= tol::h00_spread * (1.0 + std::abs(mean))) return;
    }
    throw NumericsError("absorption constant disagrees across anchor points");
}

cplx AbsorptionGF::h_direct(cplx x) const {
    return eval_side(*gx_, Ax_, w_.n0(), w_.m0(), x);
}

cplx AbsorptionGF::htilde_direct(cplx y) const {
    return eval_side(*gy_, Ay_, w_.m0(), w_.n0(), y);
}

cplx AbsorptionGF::h(cplx x) const {
    const auto& b = gx_->curve.bx();
    if (std::abs(x.imag()) < 1e-12 && x.real() >= b.x3 - 1e-10 &&
        (b.x4_infinite || x.real() <= b.x4 + 1e-10))
        throw NumericsError("evaluation point lies on the outer slit");
    cplx y = gx_->curve.y0(x);
    // the partner root escapes to infinity where both leading coefficients
    // vanish; such points sit inside the gluing domain, where the slit
    // integral applies directly
    if (!std::isfinite(std::abs(y)) ||
        std::abs(y) > 10.0 * (1.0 + gy_->curve.bx().x3))
        return h_direct(x);
    cplx wy = gy_->gl.w(y);
    if (std::isfinite(std::abs(wy)) &&
        std::abs(wy) < 1e5 * (1.0 + std::abs(gy_->w0)))
        return ipow(x, w_.n0()) * ipow(y, w_.m0()) - htilde_direct(y) - h00_;
    // the partner image sits against the pole of the other gluing map, where
    // the slit quadrature cannot resolve its boundary layer; average over a
    // small circle instead (h is analytic there, so the mean aliases only
    // far Taylor modes)
    double eps = 0.01 * (1.0 + std::abs(x));
    eps = std::min(eps, 0.45 * std::abs(x - b.x3));
    cplx s = 0.0;
    for (int k = 0; k < 16; ++k) {
        cplx z = x + eps * std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / 16);
        cplx yz = gx_->curve.y0(z);
        s += ipow(z, w_.n0()) * ipow(yz, w_.m0()) - htilde_direct(yz) - h00_;
    }
    return s / 16.0;
}

cplx AbsorptionGF::htilde(cplx y) const {
    const auto& b = gy_->curve.bx();
    if (std::abs(y.imag()) < 1e-12 && y.real() >= b.x3 - 1e-10 &&
        (b.x4_infinite || y.real() <= b.x4 + 1e-10))
        throw NumericsError("evaluation point lies on the outer slit");
    cplx x = gy_->curve.y0(y); // X0 of the original walk
    if (!std::isfinite(std::abs(x)) ||
        std::abs(x) > 10.0 * (1.0 + gx_->curve.bx().x3))
        return htilde_direct(y);
    cplx wx = gx_->gl.w(x);
    if (std::isfinite(std::abs(wx)) &&
        std::abs(wx) < 1e5 * (1.0 + std::abs(gx_->w0)))
        return ipow(y, w_.m0()) * ipow(x, w_.n0()) - h_direct(x) - h00_;
    double eps = 0.01 * (1.0 + std::abs(y));
    eps = std::min(eps, 0.45 * std::abs(y - b.x3));
    cplx s = 0.0;
    for (int k = 0; k < 16; ++k) {
        cplx z = y + eps * std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / 16);
        cplx xz = gy_->curve.y0(z);
        s += ipow(z, w_.m0()) * ipow(xz, w_.n0()) - h_direct(xz) - h00_;
    }
    return s / 16.0;
}

double AbsorptionGF::total_absorbed() const {
    return h(cplx(1.0, 0.0)).real() + htilde(cplx(1.0, 0.0)).real() + h00_;
}

std::vector<double> AbsorptionGF::coeffs(bool tilde, int kmax) const {
    const SideGeom& g = tilde ? *gy_ : *gx_;
    const auto& b = g.curve.bx();
    double r = 0.95 * b.x3;
    if (r <= b.x2) r = 0.5 * (b.x2 + b.x3);

    int m = 256;
    while (m < 8 * kmax) m *= 2;
    std::vector<cplx> vals(static_cast<size_t>(m));
    for (int j = 0; j <= m / 2; ++j) {
        double th = 2.0 * std::numbers::pi * j / m;
        cplx x = std::polar(r, th);
        cplx v = tilde ? htilde(x) : h(x);
        vals[static_cast<size_t>(j)] = v;
        if (j > 0 && j < m / 2) vals[static_cast<size_t>(m - j)] = std::conj(v);
    }
    std::vector<double> out(static_cast<size_t>(kmax) + 1, 0.0);
    for (int k = 1; k <= kmax; ++k) {
        cplx s = 0.0;
        for (int j = 0; j < m; ++j) {
            double th = -2.0 * std::numbers::pi * j * k / m;
            s += vals[static_cast<size_t>(j)] * std::polar(1.0, th);
        }
        out[static_cast<size_t>(k)] = s.real() / (m * ipow(r, k));
    }
    return out;
}

std::vector<double> AbsorptionGF::h_coeffs(int kmax) const { return coeffs(false, kmax); }
std::vector<double> AbsorptionGF::htilde_coeffs(int kmax) const { return coeffs(true, kmax); }

double AbsorptionGF::h_prime(double x) const {
    const double s = 1e-5 * (1.0 + std::abs(x));
    return (h(cplx(x + s, 0.0)).real() - h(cplx(x - s, 0.0)).real()) / (2.0 * s);
}

double AbsorptionGF::htilde_prime(double y) const {
    const double s = 1e-5 * (1.0 + std::abs(y));
    return (htilde(cplx(y + s, 0.0)).real() - htilde(cplx(y - s, 0.0)).real()) / (2.0 * s);
}

namespace {

// polynomial part of x^(n0-1) Y0(x)^m0 at infinity, by a large Cauchy circle
std::vector<double> principal_part_coeffs(const Curve& c, int n0, int m0) {
    const auto& b = c.bx();
    double R = 4.0 * (b.x4_infinite ? 4.0 * b.x3 : b.x4);
    const int m = 512;
    std::vector<cplx> vals(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        cplx x = std::polar(R, 2.0 * std::numbers::pi * (j + 0.5) / m);
        vals[static_cast<size_t>(j)] = ipow(x, n0 - 1) * ipow(c.y0(x), m0);
    }
    std::vector<double> out(static_cast<size_t>(n0 + m0) + 1, 0.0);
    for (int k = 0; k <= n0 + m0; ++k) {
        cplx s = 0.0;
        for (int j = 0; j < m; ++j) {
            double th = -2.0 * std::numbers::pi * (j + 0.5) * k / m;
            s += vals[static_cast<size_t>(j)] * std::polar(1.0, th);
        }
        double ck = s.real() / (m * ipow(R, k));
        out[static_cast<size_t>(k)] = std::abs(ck) > 1e-9 ? ck : 0.0;
    }
    return out;
}

void require_delta_zero(const Curve& c) {
    if (std::abs(c.walk().group_determinant()) > 1e-9)
        throw NumericsError("closed form needs a vanishing group determinant");
    const auto& b = c.bx();
    if (b.x4_infinite || b.x4 <= 0)
        throw NumericsError("closed form needs a finite positive x4");
}

} // namespace

cplx h_delta_zero(const AbsorptionGF& gf, cplx x) {
    const Curve& c = gf.curve();
    require_delta_zero(c);
    const auto& b = c.bx();
    const auto s = delta_zero_structure(c);
    const int n0 = gf.walk().n0(), m0 = gf.walk().m0();

    cplx integral = integrate_sqrt_endpoints(
        [&](double t) -> cplx {
            double md = -c.d()(t);
            if (md < 0) md = 0;
            return (ipow(cplx(t, 0.0), n0) - ipow(cplx(s.sigma(t), 0.0), n0)) *
                   mu_factor(c, t, m0) / (t * (t - x)) * std::sqrt(md);
        },
        b.x3, b.x4, 1e-12);

    auto pp = principal_part_coeffs(c, n0, m0);
    cplx poly = 0.0;
    for (int k = static_cast<int>(pp.size()) - 1; k >= 0; --k)
        poly = poly * x + pp[static_cast<size_t>(k)];
    return x / std::numbers::pi * integral + x * poly;
}

std::vector<double> h_delta_zero_coeffs(const AbsorptionGF& gf, int kmax) {
    const Curve& c = gf.curve();
    require_delta_zero(c);
    const auto& b = c.bx();
    const auto s = delta_zero_structure(c);
    const int n0 = gf.walk().n0(), m0 = gf.walk().m0();
    auto pp = principal_part_coeffs(c, n0, m0);

    std::vector<double> out(static_cast<size_t>(kmax) + 1, 0.0);
    for (int k = 1; k <= kmax; ++k) {
        cplx integral = integrate_sqrt_endpoints(
            [&](double t) -> cplx {
                double md = -c.d()(t);
                if (md < 0) md = 0;
                return (ipow(cplx(t, 0.0), n0) - ipow(cplx(s.sigma(t), 0.0), n0)) *
                       mu_factor(c, t, m0) / ipow(cplx(t, 0.0), k + 1) * std::sqrt(md);
            },
            b.x3, b.x4, 1e-12);
        double v = integral.real() / std::numbers::pi;
        if (k - 1 < static_cast<int>(pp.size())) v += pp[static_cast<size_t>(k) - 1];
        out[static_cast<size_t>(k)] = v;
    }
    return out;
}

} // namespace qwalk
