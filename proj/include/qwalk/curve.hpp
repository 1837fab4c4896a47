#pragma once
#include "qwalk/poly.hpp"
#include "qwalk/walk.hpp"

#include <utility>

namespace qwalk {

// The kernel xy(sum p_ij x^i y^j - 1) written as a(x)y^2 + b(x)y + c(x),
// or a~(y)x^2 + b~(y)x + c~(y) in the other direction.
struct BranchPoints {
    double x1 = 0, x2 = 0, x3 = 0, x4 = 0;
    bool x4_infinite = false;
};

class Curve {
public:
    explicit Curve(const WalkParams& w);

    const WalkParams& walk() const { return walk_; }

    const Poly& a() const { return a_; }
    const Poly& b() const { return b_; }
    const Poly& c() const { return c_; }
    const Poly& d() const { return d_; } // b^2 - 4ac

    const Poly& at() const { return at_; }
    const Poly& bt() const { return bt_; }
    const Poly& ct() const { return ct_; }
    const Poly& dt() const { return dt_; }

    const BranchPoints& bx() const { return bx_; } // roots of d in x
    const BranchPoints& by() const { return by_; } // roots of d~ in y

    // algebraic branches off the cuts, ordered |Y0| <= |Y1|
    std::pair<cplx, cplx> y_branches(cplx x) const;
    std::pair<cplx, cplx> x_branches(cplx y) const;
    cplx y0(cplx x) const { return y_branches(x).first; }
    cplx y1(cplx x) const { return y_branches(x).second; }
    cplx x0(cplx y) const { return x_branches(y).first; }
    cplx x1br(cplx y) const { return x_branches(y).second; }

    // one-sided limits of Y0 on the slit [x1,x2] (t real inside the slit);
    // upper = limit from Im x > 0
    cplx y0_slit(double t, bool upper) const;
    // one-sided limits of X0 on the slit [y1,y2]
    cplx x0_slit(double s, bool upper) const;

    // double point X(y1) = -b~(y1)/(2a~(y1)), left end of the third period's
    // path; -inf when a~(y1) = 0 (double point at infinity)
    double x_of_y1() const;

    // a(x)(Y1(x)-Y0(x)), an analytic square root of d(x) off the cuts
    cplx sqrt_d(cplx x) const;
    cplx sqrt_dt(cplx y) const;

    // r = ac'-a'c, r1 = ba'-b'a, r2 = cb'-c'b, and P_l = r^2 - r1 r2,
    // the resultant-type polynomials controlling the saddle-point curve
    const Poly& r() const { return r_; }
    const Poly& r1() const { return r1_; }
    const Poly& r2() const { return r2_; }
    const Poly& pl() const { return pl_; }

    // polynomial in x whose roots are the saddle candidates at slope tan(gamma):
    // -(ac + x tg r) d + (x tg)^2 P_l
    Poly saddle_poly(double tan_gamma) const;

private:
    WalkParams walk_;
    Poly a_, b_, c_, d_, at_, bt_, ct_, dt_;
    Poly r_, r1_, r2_, pl_;
    BranchPoints bx_, by_;
    int slit_sign_x_ = 1; // sign s so that Y0(t+i0) = (-b - i s sqrt(-d))/(2a)
    int slit_sign_y_ = 1;
};

} // namespace qwalk
