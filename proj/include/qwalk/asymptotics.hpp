#pragma once
#include "qwalk/genfun.hpp"

namespace qwalk {

// asymptotic regime of the horizontal-axis absorption tail, driven by the
// period ratio omega2/omega3
enum class TailRegime { Even2N, Odd2N1, Irrational };

TailRegime tail_regime(const GroupInfo& g);

// saddle point of x Y1(x)^{tan(gamma)}: the positive curve point where the
// gradient of phi(u,v) = sum p_ij e^{iu+jv} points in direction (cos g, sin g)
struct SaddlePoint {
    double gamma = 0;
    double u = 0, v = 0;  // log coordinates on phi(u,v) = 1
    double sx = 1, sy = 1; // e^u, e^v
};

double phi_uv(const WalkParams& w, double u, double v);
SaddlePoint saddle(const WalkParams& w, double gamma);

// h_k ~ parity_factor * (h1k_const + h2k_const) k^{-3/2} x3^{-k}
struct TailAsymptotics {
    TailRegime regime = TailRegime::Irrational;
    double rate = 1;          // exponential base x3
    double power = 1.5;       // polynomial decay exponent
    double h1k_const = 0;     // residue-term component
    double h2k_const = 0;     // gluing-term component (0 in the odd regime)
    double constant = 0;      // parity_factor * unified constant
    double parity_factor = 1; // 2 for diagonal walks at admissible k
};

double tail_constant_h1(const Curve& c, int n0, int m0);
double tail_constant_h2(const Gluing& gl, int n0, int m0);
// single closed form valid in every regime, using htilde'(Y(x3))
double tail_unified(const AbsorptionGF& gf);
TailAsymptotics tail_asymptotics(const AbsorptionGF& gf);

// Green function asymptotics G_{i,j} for j/i -> tan(gamma)
double green_interior(const AbsorptionGF& gf, long i, long j); // gamma in ]0,pi/2[
double green_axis(const AbsorptionGF& gf, long i, long j);     // j/i -> 0

// direct contour quadrature of the two-circle representation of G_{i,j};
// slow but exact, used to validate the asymptotic formulas at small indices
double green_residue_form(const AbsorptionGF& gf, int i, int j);

// limit of G^{num}/G^{den} along direction gamma (ratio of the saddle
// brackets; the axis closed form at gamma = 0)
double martin_kernel(const AbsorptionGF& num, const AbsorptionGF& den, double gamma);

} // namespace qwalk
