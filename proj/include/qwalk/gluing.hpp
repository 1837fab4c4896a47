#pragma once
#include "qwalk/elliptic.hpp"

#include <vector>

namespace qwalk {

// Conformal gluing function w for the curve bounded by M = X0([y1,y2]):
// w is built from the degree-three Weierstrass picture and satisfies
// w(t) = w(conj t) on M, with a simple pole at x2.
class Gluing {
public:
    explicit Gluing(const EllipticData& ed);

    const EllipticData& elliptic() const { return *ed_; }

    // abelian integral along the straight contour from f(x2) to f(t),
    // plus its t-derivative on the continued branch
    struct AbelValue {
        cplx I;
        cplx dI;
    };
    AbelValue abel(cplx t) const;

    cplx w(cplx t) const;
    std::pair<cplx, cplx> w_and_dw(cplx t) const;

    double res_x2() const { return res_x2_; } // residue of w at x2, closed form
    double res_x3() const { return res_x3_; } // meaningful in the simple-pole regime
    double res_x2_sampled() const;            // Laurent-circle cross-check

    double w1_x3() const; // finite part of w at x3 (non-even regimes)
    double w2_x3() const; // coefficient of sqrt(x3 - t) at x3 (algebraic regime)

    // locations of the double poles of w inside (x2,x3)
    std::vector<double> interior_poles() const;

    // involution of [x2,x3] with w(sigma(t)) = w(t), defined in the even regime
    double sigma(double t) const;

    // boundary curve M traversed once (one-sided X0 values over [y1,y2])
    std::vector<cplx> sample_m_curve(int n = 512) const;

private:
    const EllipticData* ed_;
    double res_x2_ = 0, res_x3_ = 0;
    cplx rf_base_;
    cplx abel_rf(cplx ft) const;
    // reference polyline for square-root branch tracking along the contour
    struct Tracked {
        cplx value_at_1; // continued sqrt((z-E1)(z-E3)) at the endpoint
        cplx integral;   // int_0^1 du / sqrt((z-E1)(z-E3)) on that branch
    };
    Tracked track(cplx ft, int n) const;
};

// circle-inversion structure available exactly when the group determinant
// vanishes: sigma(t) = g + r^2/(t - g), and the resultant polynomials become
// proportional
struct DeltaZeroStructure {
    double l1, l2;      // roots of r1 = ba' - b'a
    double gamma, rho;  // circle centre and radius
    double alpha, beta; // r = alpha r1, r2 = beta r1
    double sigma(double t) const { return gamma + rho * rho / (t - gamma); }
};
DeltaZeroStructure delta_zero_structure(const Curve& c);

} // namespace qwalk
