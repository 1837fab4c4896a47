#include "qwalk/curve.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qwalk {

namespace {

BranchPoints sort_branch_points(const Poly& d) {
    int deg = d.degree();
    if (deg != 3 && deg != 4) throw NumericsError("discriminant degree must be 3 or 4");
    auto rts = d.roots();
    for (const auto& r : rts)
        if (std::abs(r.imag()) > 1e-8 * (1.0 + std::abs(r)))
            throw NumericsError("branch points are not all real");
    std::vector<double> xs;
    for (const auto& r : rts) xs.push_back(r.real());
    std::sort(xs.begin(), xs.end(), [](double u, double v) { return std::abs(u) < std::abs(v); });

    BranchPoints bp;
    bp.x4_infinite = (deg == 3);
    // within equal-modulus pairs (diagonal walks) the positive root is the inner
    // one of {x2,x3}
    if (xs.size() >= 2 && xs[1] < 0 && std::abs(std::abs(xs[0]) - std::abs(xs[1])) <
                                           1e-9 * (1.0 + std::abs(xs[1])))
        std::swap(xs[0], xs[1]);
    bp.x1 = xs[0];
    bp.x2 = xs[1];
    if (deg == 4) {
        if (xs[2] < 0 && std::abs(std::abs(xs[2]) - std::abs(xs[3])) <
                             1e-9 * (1.0 + std::abs(xs[3])))
            std::swap(xs[2], xs[3]);
        bp.x3 = xs[2];
        bp.x4 = xs[3];
    } else {
        bp.x3 = xs[2];
        bp.x4 = 0.0;
    }
    if (!(bp.x2 > 0 && bp.x3 > 0)) throw NumericsError("inner/outer positive branch points missing");
    if (!(std::abs(bp.x1) <= bp.x2 + 1e-12 && bp.x2 < 1.0 + 1e-12))
        throw NumericsError("branch point ordering violated below 1");
    return bp;
}

// roots of A z^2 + B z + C sorted by modulus, stable when A is tiny
std::pair<cplx, cplx> quad_roots(cplx A, cplx B, cplx C) {
    if (std::abs(A) < 1e-300) return {-C / B, cplx(1e300, 0)};
    cplx s = std::sqrt(B * B - 4.0 * A * C);
    if (std::real(std::conj(B) * s) < 0) s = -s; // q = -(B+s)/2 computed without cancellation
    cplx q = -0.5 * (B + s);
    cplx r1 = (std::abs(q) > 0) ? C / q : cplx(0, 0);
    cplx r2 = (std::abs(q) > 0) ? q / A : -B / A - r1;
    if (std::abs(r1) <= std::abs(r2)) return {r1, r2};
    return {r2, r1};
}

} // namespace

Curve::Curve(const WalkParams& w) : walk_(w) {
    auto p = [&](int i, int j) { return w.p(i, j); };
    a_ = Poly{p(-1, 1), p(0, 1), p(1, 1)};
    b_ = Poly{p(-1, 0), -1.0, p(1, 0)};
    c_ = Poly{p(-1, -1), p(0, -1), p(1, -1)};
    d_ = b_ * b_ - a_ * c_ * 4.0;

    at_ = Poly{p(1, -1), p(1, 0), p(1, 1)};
    bt_ = Poly{p(0, -1), -1.0, p(0, 1)};
    ct_ = Poly{p(-1, -1), p(-1, 0), p(-1, 1)};
    dt_ = bt_ * bt_ - at_ * ct_ * 4.0;

    bx_ = sort_branch_points(d_);
    by_ = sort_branch_points(dt_);

    Poly ap = a_.derivative(), bp = b_.derivative(), cp = c_.derivative();
    r_ = a_ * cp - ap * c_;
    r1_ = b_ * ap - bp * a_;
    r2_ = c_ * bp - cp * b_;
    pl_ = r_ * r_ - r1_ * r2_;

    // orient the one-sided slit values against the analytic branches just off it
    {
        double t = 0.5 * (bx_.x1 + bx_.x2);
        cplx up = y_branches(cplx(t, 1e-6)).first;
        cplx plus = (-b_(cplx(t, 0)) - cplx(0, 1) * std::sqrt(-d_(t))) / (2.0 * a_(cplx(t, 0)));
        slit_sign_x_ = (std::abs(up - plus) < std::abs(up - std::conj(plus))) ? 1 : -1;
    }
    {
        double s = 0.5 * (by_.x1 + by_.x2);
        cplx up = x_branches(cplx(s, 1e-6)).first;
        cplx plus = (-bt_(cplx(s, 0)) - cplx(0, 1) * std::sqrt(-dt_(s))) / (2.0 * at_(cplx(s, 0)));
        slit_sign_y_ = (std::abs(up - plus) < std::abs(up - std::conj(plus))) ? 1 : -1;
    }
}

std::pair<cplx, cplx> Curve::y_branches(cplx x) const {
    return quad_roots(a_(x), b_(x), c_(x));
}

std::pair<cplx, cplx> Curve::x_branches(cplx y) const {
    return quad_roots(at_(y), bt_(y), ct_(y));
}

cplx Curve::y0_slit(double t, bool upper) const {
    double sign = (upper ? 1.0 : -1.0) * slit_sign_x_;
    return (-b_(cplx(t, 0)) - cplx(0, sign) * std::sqrt(std::max(0.0, -d_(t)))) /
           (2.0 * a_(cplx(t, 0)));
}

cplx Curve::x0_slit(double s, bool upper) const {
    double sign = (upper ? 1.0 : -1.0) * slit_sign_y_;
    return (-bt_(cplx(s, 0)) - cplx(0, sign) * std::sqrt(std::max(0.0, -dt_(s)))) /
           (2.0 * at_(cplx(s, 0)));
}

double Curve::x_of_y1() const {
    double y1v = by_.x1;
    double av = at_(y1v);
    double scale = 0.0;
    for (int k = 0; k <= at_.degree(); ++k) scale += std::abs(at_[k]);
    // a~(y1) = 0 forces b~(y1) = 0 through the vanishing discriminant, so the
    // double root sits at infinity and is approached along the negative reals
    if (std::abs(av) < 1e-10 * scale) return -std::numeric_limits<double>::infinity();
    return -bt_(y1v) / (2.0 * av);
}

cplx Curve::sqrt_d(cplx x) const {
    auto [y0, y1] = y_branches(x);
    return a_(x) * (y1 - y0);
}

cplx Curve::sqrt_dt(cplx y) const {
    auto [x0v, x1v] = x_branches(y);
    return at_(y) * (x1v - x0v);
}

Poly Curve::saddle_poly(double tg) const {
    Poly xtg{0.0, tg};
    Poly term1 = (a_ * c_ + xtg * r_) * d_ * (-1.0);
    Poly term2 = xtg * xtg * pl_;
    return term1 + term2;
}

} // namespace qwalk
