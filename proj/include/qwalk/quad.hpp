#pragma once
#include <functional>
#include <vector>

#include "qwalk/poly.hpp"

namespace qwalk {

// Gauss-Legendre nodes/weights on [-1,1], cached per order
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_rule(int n);

// integrate f on [lo,hi] with node doubling until successive rules agree
// to rel_tol * (1 + |I|); n0 is the starting order
cplx integrate(const std::function<cplx(double)>& f, double lo, double hi,
               double rel_tol, int n0 = 64, int max_order = 4096);

// same, but with the substitution t = mid + half*sin(theta), which absorbs
// inverse-square-root endpoint singularities
cplx integrate_sqrt_endpoints(const std::function<cplx(double)>& f, double lo, double hi,
                              double rel_tol, int n0 = 64, int max_order = 4096);

} // namespace qwalk
