#include "whkernel/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "whkernel/errors.hpp"

namespace wh {

int Poly::degree() const {
    for (int k = static_cast<int>(coeff.size()) - 1; k >= 0; --k)
        if (coeff[static_cast<size_t>(k)] != 0.0) return k;
    return -1;
}

double Poly::operator()(double x) const {
    double acc = 0.0;
    for (size_t k = coeff.size(); k-- > 0;) acc = acc * x + coeff[k];
    return acc;
}

cplx Poly::operator()(cplx s) const {
    cplx acc = 0.0;
    for (size_t k = coeff.size(); k-- > 0;) acc = acc * s + coeff[k];
    return acc;
}

Poly Poly::derivative() const {
    if (coeff.size() <= 1) return Poly{{0.0}};
    std::vector<double> d(coeff.size() - 1);
    for (size_t k = 1; k < coeff.size(); ++k) d[k - 1] = coeff[k] * static_cast<double>(k);
    return Poly{std::move(d)};
}

void Poly::trim(double tol) {
    double scale = 0.0;
    for (double c : coeff) scale = std::max(scale, std::fabs(c));
    while (coeff.size() > 1 && std::fabs(coeff.back()) <= tol * scale) coeff.pop_back();
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<double> c(std::max(a.coeff.size(), b.coeff.size()), 0.0);
    for (size_t k = 0; k < a.coeff.size(); ++k) c[k] += a.coeff[k];
    for (size_t k = 0; k < b.coeff.size(); ++k) c[k] += b.coeff[k];
    return Poly{std::move(c)};
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-1.0 * b); }

Poly operator*(const Poly& a, const Poly& b) {
    if (a.coeff.empty() || b.coeff.empty()) return Poly{{0.0}};
    std::vector<double> c(a.coeff.size() + b.coeff.size() - 1, 0.0);
    for (size_t i = 0; i < a.coeff.size(); ++i)
        for (size_t j = 0; j < b.coeff.size(); ++j) c[i + j] += a.coeff[i] * b.coeff[j];
    return Poly{std::move(c)};
}

Poly operator*(double k, const Poly& p) {
    Poly q = p;
    for (double& c : q.coeff) c *= k;
    return q;
}

std::pair<Poly, double> deflate(const Poly& p, double root) {
    const int n = p.degree();
    if (n < 1) return {Poly{{0.0}}, n == 0 ? p.coeff[0] : 0.0};
    std::vector<double> q(static_cast<size_t>(n), 0.0);
    double carry = p.coeff[static_cast<size_t>(n)];
    for (int k = n - 1; k >= 0; --k) {
        q[static_cast<size_t>(k)] = carry;
        carry = p.coeff[static_cast<size_t>(k)] + root * carry;
    }
    return {Poly{std::move(q)}, carry};
}

std::pair<Poly, double> shift_down(const Poly& p) {
    if (p.coeff.size() <= 1) return {Poly{{0.0}}, p.coeff.empty() ? 0.0 : p.coeff[0]};
    std::vector<double> q(p.coeff.begin() + 1, p.coeff.end());
    return {Poly{std::move(q)}, p.coeff[0]};
}

std::vector<cplx> roots(const Poly& p) {
    const int n = p.degree();
    if (n < 1) return {};
    std::vector<cplx> a(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        a[static_cast<size_t>(k)] = p.coeff[static_cast<size_t>(k)] / p.coeff[static_cast<size_t>(n)];

    auto eval_monic = [&](cplx z) {
        cplx acc = 1.0;
        for (int k = n - 1; k >= 0; --k) acc = acc * z + a[static_cast<size_t>(k)];
        return acc;
    };

    // scale-aware initial guesses on a spiral
    double scale = 0.0;
    for (int k = 0; k < n; ++k) scale = std::max(scale, std::pow(std::fabs(a[static_cast<size_t>(k)]), 1.0 / (n - k)));
    if (scale == 0.0) scale = 1.0;
    std::vector<cplx> z(static_cast<size_t>(n));
    const cplx seed(0.4, 0.9);
    cplx w = 1.0;
    for (int k = 0; k < n; ++k) {
        w *= seed;
        z[static_cast<size_t>(k)] = scale * w;
    }

    for (int iter = 0; iter < 500; ++iter) {
        double max_step = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx denom = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)];
            if (std::abs(denom) < 1e-300) denom = 1e-300;
            const cplx step = eval_monic(z[static_cast<size_t>(i)]) / denom;
            z[static_cast<size_t>(i)] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (max_step < 1e-14 * std::max(1.0, scale)) break;
    }
    return z;
}

}  // namespace wh
