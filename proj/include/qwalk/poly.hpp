#pragma once
#include <complex>
#include <vector>

namespace qwalk {

using cplx = std::complex<double>;

// dense real polynomial, coeffs[k] multiplies x^k
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<double> c) : coeffs_(c) { trim(); }
    explicit Poly(std::vector<double> c) : coeffs_(std::move(c)) { trim(); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    double operator[](int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : 0.0;
    }

    double operator()(double x) const;
    cplx operator()(cplx x) const;

    Poly derivative() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(double s) const;

    // all roots via companion-matrix eigenvalues, then two Newton polish steps
    std::vector<cplx> roots() const;

private:
    void trim();
    std::vector<double> coeffs_;
};

} // namespace qwalk
