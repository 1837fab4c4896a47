#include "qwalk/poly.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qwalk {

void Poly::trim() {
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) == 0.0) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double Poly::operator()(double x) const {
    double r = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
    return r;
}

cplx Poly::operator()(cplx x) const {
    cplx r = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
    return r;
}

Poly Poly::derivative() const {
    if (coeffs_.size() <= 1) return Poly{0.0};
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return Poly(std::move(d));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<double> c(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
    for (size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
    for (size_t k = 0; k < o.coeffs_.size(); ++k) c[k] += o.coeffs_[k];
    return Poly(std::move(c));
}

Poly Poly::operator-(const Poly& o) const {
    std::vector<double> c(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
    for (size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
    for (size_t k = 0; k < o.coeffs_.size(); ++k) c[k] -= o.coeffs_[k];
    return Poly(std::move(c));
}

Poly Poly::operator*(const Poly& o) const {
    std::vector<double> c(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
    return Poly(std::move(c));
}

Poly Poly::operator*(double s) const {
    std::vector<double> c = coeffs_;
    for (double& v : c) v *= s;
    return Poly(std::move(c));
}

std::vector<cplx> Poly::roots() const {
    int n = degree();
    while (n > 0 && coeffs_[static_cast<size_t>(n)] == 0.0) --n;
    if (n <= 0) return {};

    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    const double lead = coeffs_[static_cast<size_t>(n)];
    for (int k = 0; k < n; ++k) comp(0, k) = -coeffs_[static_cast<size_t>(n - 1 - k)] / lead;
    for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;

    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
    Poly dp = derivative();
    std::vector<cplx> rts;
    rts.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        cplx r = es.eigenvalues()(k);
        for (int it = 0; it < 2; ++it) {
            cplx fp = dp(r);
            if (std::abs(fp) > 0.0) r -= (*this)(r) / fp;
        }
        rts.push_back(r);
    }
    return rts;
}

} // namespace qwalk
