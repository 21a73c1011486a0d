#pragma once

#include <string>
#include <vector>

#include "whkernel/numerics.hpp"

namespace wh::linear_omega {

using wh::num::cplx;

// Queue with exponential service and clearing rate omega(x) = a x.
//
// For any rational transform beta = N/D of degree m the problem reduces to
// a degree-m polynomial remainder R(s) with R(0) = 0, the workload transform
// phi_plus(s) = R(s) / ((s - lambda) D(s) + lambda N(s)), the m interpolation
// conditions -lambda N(-mu_j) phi_minus(mu_j) = R(-mu_j) at the denominator
// zeros -mu_j, and a first-order differential equation for phi_minus with
// removable singularities at the mu_j. Only the m = 1 (exponential service)
// solver is implemented; the relations above are exercised by the tests in
// their m = 1 form, where R(s) = r1 s and the only singular point is mu.
//
// sigma = mu*lambda/a governs the solution regime: integer sigma has a
// polynomial-times-Gaussian inventory density, non-integer sigma is handled
// through the transform and contour inversion.
struct LinearExpModel {
    double lambda = 0.0;
    double mu = 0.0;
    double a = 0.0;
    double sigma = 0.0;
    int K = 0;  // ceil(sigma)
    bool integer_sigma = false;
};

LinearExpModel classify(double lambda, double mu, double a);

// Output of the series/boundary pipeline: Taylor coefficients c_k of the
// transform around z = mu, the chain multipliers that express them through
// c_K, the boundary integrals, and the derived constants r1 (workload
// density at 0) and EI (mean inventory).
struct SeriesSolution {
    LinearExpModel model;
    std::vector<double> c;      // c[0..K], all positive
    std::vector<double> chain;  // B[0..K], c_k = B_k c_K
    double integral_tail_hi = 0.0;  // I at power K - sigma
    double integral_tail_lo = 0.0;  // I at power K - sigma - 1 (or I at 0 when integer)
    double integral_left_hi = 0.0;  // J at power K - sigma
    double integral_left_lo = 0.0;  // J at power K - sigma - 1 (unused when integer)
    double boundary_term = 0.0;     // R_K
    double r1 = 0.0;
    double mean_inventory = 0.0;  // EI
    std::vector<std::string> warnings;

    double phi_minus0() const { return 1.0 - r1 / (model.mu - model.lambda); }
    double phi_plus0() const { return r1 / (model.mu - model.lambda); }

    // transform of the inventory density, piecewise around z = mu
    double phi_minus(double z) const;
    // contour values; requires Re z > mu
    cplx phi_minus(cplx z) const;

    // density in the integer-sigma regime (Gaussian times Hermite)
    double v_minus_integer(double t) const;

    // workload density at 0 reappears as v_plus(0)
    double v_plus(double x) const;
};

SeriesSolution series_solve(const LinearExpModel& model);

// Inventory density by contour inversion of the transform; non-integer
// sigma regime (gamma must exceed mu).
double v_minus_noninteger(const SeriesSolution& sol, double x,
                          const num::BromwichConfig& cfg);

// Solution of the pointwise second-order equation for the inventory
// density, in terms of Kummer U or its Hermite-polynomial reductions.
// Serves as the independent cross-check of the pipeline above.
struct DirectSolution {
    enum class Route { kummer, hermite_odd, hermite_even };

    LinearExpModel model;
    double nu = 0.0;  // = sigma
    Route route = Route::kummer;
    double C = 0.0;         // integral of e^{-mu x} v_minus
    double k_form = 0.0;   // constant of the route's conventional normal form
    double k_eff = 0.0;     // multiplier of the raw shape used internally
    double r1() const { return model.lambda * C; }

    double v_minus(double x) const;
    double v_plus(double x) const;

    static const char* route_name(Route r);
};

DirectSolution direct_solve(const LinearExpModel& model);

}  // namespace wh::linear_omega
