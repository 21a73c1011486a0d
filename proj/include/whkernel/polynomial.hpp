#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace wh {

using cplx = std::complex<double>;

// Dense polynomial with real coefficients in ascending power order
// (coeff[k] multiplies x^k). Ascending order is load-bearing: the
// linear-rate solver indexes numerator/denominator coefficients this way.
struct Poly {
    std::vector<double> coeff;

    Poly() = default;
    explicit Poly(std::vector<double> c) : coeff(std::move(c)) {}

    int degree() const;  // index of highest non-negligible coefficient, -1 if zero
    double operator()(double x) const;
    cplx operator()(cplx s) const;
    Poly derivative() const;

    // Removes trailing coefficients below `tol` relative to the largest.
    void trim(double tol = 1e-14);
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(double k, const Poly& p);

// Divides p by (x - root). Returns the quotient and the remainder p(root).
std::pair<Poly, double> deflate(const Poly& p, double root);

// Divides p by x. The constant coefficient is returned as the remainder and
// must be ~0 for the division to be meaningful.
std::pair<Poly, double> shift_down(const Poly& p);

// All complex roots by Durand-Kerner iteration. Intended for the small
// degrees that arise from service-time transforms.
std::vector<cplx> roots(const Poly& p);

}  // namespace wh
