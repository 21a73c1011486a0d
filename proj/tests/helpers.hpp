#pragma once

// Test-local oracles, deliberately independent of the library's numerics:
// an adaptive Simpson integrator, a closed-form cubic solver, and small
// utilities shared across the suites.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

namespace testutil {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// adaptive Simpson on [a, b]
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// [a, inf): doubling panels until negligible
inline double simpson_tail(const std::function<double(double)>& f, double a,
                           double tol = 1e-12) {
    double total = 0.0, lo = a, width = 1.0;
    for (int i = 0; i < 50; ++i) {
        const double part = simpson(f, lo, lo + width, tol);
        total += part;
        if (i > 2 && std::fabs(part) <= tol * std::max(1.0, std::fabs(total))) break;
        lo += width;
        width *= 2.0;
    }
    return total;
}

// real roots of x^3 + a2 x^2 + a1 x + a0 (Cardano / trigonometric form)
inline std::vector<double> cubic_real_roots(double a2, double a1, double a0) {
    const double p = a1 - a2 * a2 / 3.0;
    const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const double shift = -a2 / 3.0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    std::vector<double> roots;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + s), v = std::cbrt(-q / 2.0 - s);
        roots.push_back(u + v + shift);
    } else {
        const double r = std::sqrt(-p * p * p / 27.0);
        const double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
        const double m = 2.0 * std::sqrt(-p / 3.0);
        for (int k = 0; k < 3; ++k)
            roots.push_back(m * std::cos((phi + 2.0 * M_PI * k) / 3.0) + shift);
    }
    return roots;
}

// deterministic linear congruential stream for test point generation
struct TinyRng {
    unsigned long long s;
    explicit TinyRng(unsigned long long seed) : s(seed) {}
    double uniform() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    }
};

}  // namespace testutil
