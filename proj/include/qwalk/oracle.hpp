#pragma once
#include "qwalk/walk.hpp"

#include <cstdint>
#include <vector>

namespace qwalk {

// Green function of the absorbed walk on the truncated box [1,n]^2,
// G(i,j) = expected number of visits to (i,j) before hitting an axis,
// solved from G = delta_{start} + P^T G by Gauss-Seidel sweeps.
struct DpResult {
    int n = 0;
    std::vector<double> green; // (n+2)*(n+2), zero on axes and beyond the box

    double at(int i, int j) const { return green[static_cast<size_t>(i) * (n + 2) + j]; }

    std::vector<double> h;  // h[k]: absorbed at (k,0), k = 1..n
    std::vector<double> ht; // ht[k]: absorbed at (0,k), k = 1..n
    double h00 = 0;         // absorbed at the corner
    double absorbed = 0;    // sum of all of the above
    double escaped = 0;     // probability flux out of the box
    int sweeps = 0;
    double residual = 0;
};

DpResult dp_solve(const WalkParams& w, int n, double tol = 1e-12, int max_sweeps = 20000);

// Monte Carlo estimate of the absorption split. Paths stopping only once
// min(i,j) >= escape_radius are counted as escaped; the radius is chosen so
// that returning to an axis from there is negligible for drift-positive walks.
struct McResult {
    long long paths = 0;
    long long absorbed_x = 0; // on the horizontal axis, k >= 1
    long long absorbed_y = 0;
    long long corner = 0;
    long long escaped = 0;
    std::vector<long long> hx_counts; // absorbed at (k,0), k < hx_counts.size()
    std::vector<long long> hy_counts;

    double p_absorbed() const {
        return static_cast<double>(absorbed_x + absorbed_y + corner) / static_cast<double>(paths);
    }
    // binomial standard error of p_absorbed
    double sigma_absorbed() const;
};

McResult mc_absorb(const WalkParams& w, long long paths, std::uint64_t seed,
                   int escape_radius = 120);

} // namespace qwalk
