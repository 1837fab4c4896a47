#pragma once
#include "qwalk/gluing.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace qwalk {

// slit jump density: across the inner x-slit the branch powers satisfy
// Y0^m - conj(Y0)^m = +-2i sqrt(-d) mu_m with
// mu_m = (2a)^-m sum_k C(m,2k+1) d^k (-b)^(m-2k-1)
cplx mu_factor(const Curve& c, cplx t, int m0);

// crude two-sided bound: A/2 <= h(1) + htilde(1) + h00 <= A
double absorbed_bound_A(const WalkParams& w);
std::pair<double, double> absorbed_bounds(const WalkParams& w); // (A/2, min(A,1))

// alternating sum of x^n0 y^m0 over the dihedral orbit of (1,1); requires an
// integer period ratio omega2/omega3, in which case it equals the total
// absorption probability
double finite_group_absorbed(const WalkParams& w);

// Generating functions of the absorption probabilities: h collects the
// horizontal-axis sites, htilde the vertical ones, h00 the corner mass.
// Each is represented by a slit integral against the conformal gluing
// function of its own frame and continued through the kernel relation
// h(x) = x^n0 Y0(x)^m0 - htilde(Y0(x)) - h00.
class AbsorptionGF {
public:
    explicit AbsorptionGF(const WalkParams& w, double tol = 1e-11);

    // reuse the slit geometry (curve, periods, gluing nodes) for another start
    AbsorptionGF with_start(int n0, int m0) const;

    const WalkParams& walk() const { return w_; }

    double h00() const { return h00_; }
    double h00_spread() const { return h00_spread_; }
    double total_absorbed() const; // h(1) + htilde(1) + h00

    // continued evaluators, defined off the outer slits
    cplx h(cplx x) const;
    cplx htilde(cplx y) const;

    // raw slit-integral representations, valid inside the gluing domains
    cplx h_direct(cplx x) const;
    cplx htilde_direct(cplx y) const;

    // power series coefficients h_1..h_kmax via a Cauchy circle below x3
    std::vector<double> h_coeffs(int kmax) const;
    std::vector<double> htilde_coeffs(int kmax) const;

    double h_prime(double x) const;
    double htilde_prime(double y) const;

    const Curve& curve() const;
    const EllipticData& elliptic() const;
    const Gluing& gluing() const;
    const Curve& curve_transposed() const;

private:
    struct SideGeom;
    AbsorptionGF(const AbsorptionGF& base, int n0, int m0);

    std::vector<cplx> assemble(const SideGeom& g, int n0, int m0) const;
    cplx eval_side(const SideGeom& g, const std::vector<cplx>& A, int n0, int m0,
                   cplx x) const;
    void calibrate();
    std::vector<double> coeffs(bool tilde, int kmax) const;

    WalkParams w_;
    double tol_ = 1e-11;
    std::shared_ptr<const SideGeom> gx_, gy_;
    std::vector<cplx> Ax_, Ay_;
    double sign_ = 1.0; // orientation of the slit integrals
    double h00_ = 0, h00_spread_ = 0;
};

// closed-ish form available when the group determinant vanishes and x4 is
// finite: an integral over the outer slit plus a polynomial correction from
// the principal part of x^(n0-1) Y0(x)^m0 at infinity
cplx h_delta_zero(const AbsorptionGF& gf, cplx x);
std::vector<double> h_delta_zero_coeffs(const AbsorptionGF& gf, int kmax);

} // namespace qwalk
