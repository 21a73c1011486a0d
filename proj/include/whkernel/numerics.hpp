#pragma once

#include <complex>
#include <functional>
#include <limits>

namespace wh::num {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- roots ----

struct RootOptions {
    double f_tol = 1e-13;       // |f| <= f_tol * scale at the root
    double x_tol = 1e-13;       // bracket width target (absolute, eps-guarded)
    int max_iter = 200;
};

// Safeguarded Brent iteration for a continuous strictly monotone f with
// f(lo) * f(hi) < 0. Throws NumericalError on a bad bracket or
// non-convergence.
double find_root_monotone(const std::function<double(double)>& f, double lo, double hi,
                          const RootOptions& opt = {});

// Grows [lo, hi] by doubling hi until f changes sign. Used to bracket the
// positive zero of the clearing/bankruptcy characteristic functions, which
// start negative at 0 and grow linearly.
std::pair<double, double> expand_bracket(const std::function<double(double)>& f, double lo,
                                         double hi, int max_doublings = 60);

// ----------------------------------------------------- special functions ----

// Probabilists' Hermite polynomial H_n (weight e^{-x^2/2}) via the
// three-term recurrence H_{n+1} = x H_n - n H_{n-1}.
double hermite(int n, double x);

// 1/Gamma(x); returns 0 at the poles x = 0, -1, -2, ...
double recip_gamma(double x);

// Kummer confluent hypergeometric functions for real arguments.
// M by its power series (terminates for non-positive integer a).
// U for half-integer b via the M-connection formula at moderate z and the
// large-z asymptotic series beyond; accurate on the parameter range used by
// the linear-rate solver (|a| modest, b in {+-1/2, 3/2, 5/2}, z >= 0).
double kummer_m(double a, double b, double z);
double kummer_u(double a, double b, double z);
// dU/dz = -a U(a+1, b+1, z)
double kummer_u_dz(double a, double b, double z);

// ------------------------------------------------------------ quadrature ----

// integral_0^T v^p exp(w(v)) dv with w(v) = -(theta1 v + theta2 v^2) when
// `decaying`, else w(v) = +theta1 v - theta2 v^2. p > -1 makes the endpoint
// singularity integrable; it is removed by the substitution v = u^{1/(1+p)}
// before quadrature. T may be infinite only for the decaying weight.
struct SingularWeightIntegral {
    double power = 0.0;    // p > -1
    double theta1 = 0.0;   // >= 0
    double theta2 = 0.0;   // >= 0
    double upper = kInf;   // T
    bool decaying = true;  // weight sign selector
};

double singular_integral(const SingularWeightIntegral& spec, double rel_tol = 1e-12);

// tanh-sinh quadrature on [a, b] with level doubling until the relative
// change is below rel_tol. `levels_used`/`last_delta` let property tests
// confirm stability under step halving.
struct QuadratureResult {
    double value = 0.0;
    double last_delta = 0.0;
    int levels = 0;
};

QuadratureResult integrate_ts(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = 1e-12, int max_level = 12);

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

// [a, inf) for integrands with eventual monotone decay: integrates on
// doubling panels until a panel contributes less than rel_tol of the total.
double integrate_semi_infinite(const std::function<double(double)>& f, double a,
                               double rel_tol = 1e-10, double first_panel = 1.0);

// ---------------------------------------------------------- transform inv ----

// Bromwich contour inversion of a Laplace transform by the trapezoidal rule
// on Re z = gamma. The step is tied to gamma so that the aliasing error
// e^{-2 pi gamma / h} is ~1e-9 of the sup of the original function. The
// contour truncation is doubled until two successive results agree. A
// two-term large-z tail c1/(z+q) + c2/(z+q)^2 is fitted on the real axis,
// subtracted, and inverted exactly, so transforms with O(1/z) decay invert
// at the same accuracy as rapidly decaying ones.
struct BromwichConfig {
    double gamma = 1.0;          // abscissa, right of all singularities
    double omega_init = 64.0;    // initial truncation frequency
    int max_doublings = 9;
    double tol = 1e-7;           // doubling stop criterion
    bool subtract_tail = true;
    double tail_pole = 1.0;      // q in the subtracted tail
};

struct BromwichResult {
    double value = 0.0;
    double err_estimate = 0.0;
    bool converged = true;
};

BromwichResult bromwich_invert(const std::function<cplx(cplx)>& transform,
                               const BromwichConfig& cfg, double x);

}  // namespace wh::num
