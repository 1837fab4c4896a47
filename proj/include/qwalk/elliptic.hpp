#pragma once
#include "qwalk/curve.hpp"
#include "qwalk/poly.hpp"

#include <optional>

namespace qwalk {

// Weierstrass elliptic function for the rectangular lattice Z*wr + Z*wi
// (wr real positive, wi purely imaginary, positive imaginary part),
// evaluated through Jacobi theta series in whichever frame keeps the nome
// small, so the series stays short even for very elongated lattices.
class Weierstrass {
public:
    Weierstrass(double wr, double wi_imag);

    cplx wp(cplx z) const;
    cplx wp_prime(cplx z) const;

    double g2() const { return g2_; }
    double g3() const { return g3_; }
    double e1() const { return e1_; } // wp(wr/2)
    double e2() const { return e2_; } // wp((wr+wi)/2)
    double e3() const { return e3_; } // wp(wi/2)

    double period_real() const { return wr_; }
    double period_imag() const { return wi_; } // imaginary part

private:
    cplx reduce(cplx z) const;
    double wr_, wi_;
    cplx wa_, wb_; // theta frame generators, |q| <= exp(-pi)
    cplx q_;
    double g2_, g3_, e1_, e2_, e3_;
    // theta null values in the chosen frame
    cplx t2z_, t3z_, t4z_;
};

enum class GroupOrder { Finite, Infinite };
enum class X3Regime { SimplePole, Holomorphic, Algebraic };

struct GroupInfo {
    bool finite = false;
    int order = 0;           // 2q when omega2/omega3 = q/p in lowest terms
    int ratio_num = 0;       // omega2/omega3 = ratio_num / ratio_den when finite
    int ratio_den = 0;
    double ratio = 0.0;      // omega2/omega3 as computed
    X3Regime regime = X3Regime::Algebraic;
};

// periods of the curve's uniformization and the two Weierstrass functions
// living on the corresponding tori
class EllipticData {
public:
    explicit EllipticData(const Curve& curve);

    const Curve& curve() const { return *curve_; }

    double omega1() const { return omega1_; } // imaginary part of the imaginary period
    double omega2() const { return omega2_; }
    double omega3() const { return omega3_; }

    const Weierstrass& wp12() const { return *wp12_; } // periods (omega2, omega1)
    const Weierstrass& wp13() const { return *wp13_; } // periods (omega3, omega1)

    // Moebius map sending the x-plane onto the wp12 picture: f(x_k) are the
    // half-period values, x4 goes to the pole
    double f(double t) const;
    cplx f(cplx t) const;
    cplx f_prime(cplx t) const;
    double E1() const { return E1_; }
    double E2() const { return E2_; }
    double E3() const { return E3_; }

    // uniformization: x(omega) and the y-branch continued from the anchor
    // (omega1+omega2)/2 where x=x2, y=Y(x2)
    cplx x_of(cplx omega) const;
    cplx y_of(cplx omega) const;

    GroupInfo group() const { return group_; }

private:
    const Curve* curve_;
    double omega1_, omega2_, omega3_;
    double E1_, E2_, E3_;
    std::optional<Weierstrass> wp12_, wp13_;
    GroupInfo group_;
    bool x4_infinite_ = false;
    double x4_ = 0.0, fp_x4_ = 0.0, fpp_x4_ = 0.0; // d'(x4), d''(x4) cache
    double d2_0_ = 0.0, d3_0_ = 0.0;               // d''(0), d'''(0) when x4 = inf
};

// birational involutions generating the symmetry group of the kernel
cplx galois_xi_y(const Curve& c, cplx x, cplx y);  // (x,y) -> (x, c/(a y))
cplx galois_eta_x(const Curve& c, cplx x, cplx y); // (x,y) -> (c~/(a~ x), y)

// renormalized exponential tilt p(i,j) -> p(i,j) a^i b^j / Z making both drift
// components positive while keeping the step support; for the step sets whose
// group order is support-determined this stays inside the same finite-group
// family, so the period ratio is unchanged
WalkParams drift_tilt(const WalkParams& w);

// group classification robust to the zero-drift degeneracy (x2=x3): falls back
// to a tilted walk with the same step support
GroupInfo classify_walk(const WalkParams& w);

} // namespace qwalk
