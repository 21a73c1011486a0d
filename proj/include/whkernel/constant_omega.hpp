#pragma once

#include "whkernel/dist.hpp"
#include "whkernel/numerics.hpp"
#include "whkernel/polynomial.hpp"

namespace wh::constant_omega {

using wh::cplx;

// Steady-state workload/inventory law of the queue with Poisson(omega)
// inventory clearing. The inventory density is A e^{-delta x}; the workload
// transform is reduced at solve time to an explicit ratio of polynomials
// with the removable zeros at s = 0 and s = delta cancelled exactly.
struct QueueSolution {
    double lambda = 0.0;
    double omega = 0.0;
    ServiceDistribution dist;
    double rho = 0.0;
    double delta = 0.0;  // positive zero of lambda beta(s) + s - lambda - omega
    double a_const = 0.0;  // (1 - rho) delta^2 / omega

    Poly workload_num;  // phi_plus = scale * workload_num / drift_den
    Poly drift_den;     // (s D - lambda (D - N)) / s
    double scale = 0.0;

    double phi_minus0() const { return a_const / delta; }
    double phi_plus0() const;

    cplx phi_minus(cplx s) const { return a_const / (s + delta); }
    double v_minus(double x) const;
    cplx phi_plus(cplx s) const;
    double v_plus(double x) const;  // closed form for exponential service, contour otherwise

    bool exponential_service() const;
};

QueueSolution solve_queue(double lambda, double omega, ServiceDistribution dist);

// First service of a busy period, distributed as the overshoot of a service
// time over the exponential inventory level.
struct ExceptionalFirstService {
    double delta = 0.0;
    double beta_at_delta = 0.0;
    Poly overshoot_num;  // beta_hat = delta * overshoot_num / ((1 - beta(delta)) D)
    Poly den;
    double mean_first_service = 0.0;  // E B / (1 - beta(delta)) - 1/delta
    double p_empty = 0.0;             // (1-rho) / (1-rho + lambda E B-hat)

    cplx beta_hat(cplx s) const;
};

ExceptionalFirstService exceptional_first_service(const QueueSolution& sol);

// Bankruptcy model with constant bankruptcy rate. u_plus / u_minus are the
// bankruptcy and survival probabilities from positive / negative surplus.
struct InsuranceSolution {
    double lambda = 0.0;
    double c = 0.0;
    double omega = 0.0;
    ServiceDistribution claims;
    double rho = 0.0;    // lambda E Y / c
    double delta = 0.0;  // positive zero of c s - lambda (1 - beta(s)) - omega
    double z_const = 0.0;  // -c delta (1 - rho) / omega

    Poly bankruptcy_num;  // Psi_plus = bankruptcy_num / premium_den
    Poly premium_den;

    double psi_minus0() const { return -z_const / delta; }
    double u_minus(double x) const;        // survival from surplus -x
    double u_tilde_minus(double x) const;  // bankruptcy from surplus -x
    double u_plus0() const;
    double u_plus(double x) const;  // closed form for exponential claims, contour otherwise
    cplx psi_plus(cplx s) const;
    cplx psi_minus(cplx s) const { return -z_const / (s + delta); }

    bool exponential_claims() const;
    double eta() const;  // negative companion zero, exponential claims only
};

InsuranceSolution solve_insurance(double lambda, double c, double omega,
                                  ServiceDistribution claims);

// Survival probability under Poisson observation, computed from the
// classical survival function; exponential claims only.
double ai_survival_hat(const InsuranceSolution& sol, double x);

// Classical (no-relaxation) ruin probability for exponential claims.
double classical_ruin_exponential(double nu, double lambda, double c, double x);

// Adjustment coefficient R: positive solution of lambda(beta(-R) - 1) = c R.
double lundberg_coefficient(const ServiceDistribution& claims, double lambda, double c);

}  // namespace wh::constant_omega
