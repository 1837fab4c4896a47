#pragma once

// Every numeric gate in the library pins its tolerance here so tests and
// implementation cannot drift apart.
namespace qwalk::tol {

// generic residual gate: eps_res * (1 + |value|)
inline constexpr double eps_res = 1e-11;

// probability sanity in walk validation
inline constexpr double prob_sum = 1e-12;

// quadrature node-doubling stops when successive refinements agree to this
inline constexpr double quad_rel = 1e-12;

// theta series truncation
inline constexpr double theta_term = 1e-16;

// continued-fraction rational detection of omega3/omega2
inline constexpr double ratio_detect = 1e-9;
inline constexpr int ratio_max_den = 64;

// Newton polish / saddle-point solves
inline constexpr double newton = 1e-13;

// Laurent residue sampling circle
inline constexpr double residue_radius = 1e-4;
inline constexpr int residue_points = 64;

// multi-point agreement gate for the constant term h00
inline constexpr double h00_spread = 1e-6;

// finite-difference step for the Green-function curvature constants
inline constexpr double fd_step = 1e-5;

// DP oracle Gauss-Seidel residual
inline constexpr double dp_residual = 1e-12;

} // namespace qwalk::tol
