#include "whkernel/constant_omega.hpp"

#include <cmath>

#include "whkernel/errors.hpp"

namespace wh::constant_omega {

namespace {

double bromwich_abscissa(const ServiceDistribution& dist) {
    double min_re = 1.0;
    for (const cplx& z : dist.den_roots()) min_re = std::min(min_re, std::fabs(z.real()));
    return 0.5 * min_re;
}

// positive zero of a function that is negative at 0 and grows ~linearly
double positive_zero(const std::function<double(double)>& f, double hi_guess) {
    auto [lo, hi] = num::expand_bracket(f, 1e-12, hi_guess);
    return num::find_root_monotone(f, lo, hi);
}

}  // namespace

// ------------------------------------------------------------------ queue ----

QueueSolution solve_queue(double lambda, double omega, ServiceDistribution dist) {
    if (lambda <= 0.0) throw ConfigError("arrival rate must be positive");
    if (omega <= 0.0) throw ConfigError("clearing rate must be positive");
    const double rho = lambda * dist.mean();
    if (rho >= 1.0) throw ConfigError("unstable system: rho = " + std::to_string(rho) + " >= 1");

    const auto f = [&](double s) { return lambda * dist.lst(s) + s - lambda - omega; };
    const double delta = positive_zero(f, omega + lambda + 1.0);

    QueueSolution sol{lambda, omega, std::move(dist), rho, delta,
                      (1.0 - rho) * delta * delta / omega, {}, {}, 0.0};

    // phi_plus as an explicit rational function: multiply numerator and
    // denominator by D and cancel the zeros at s = 0 and s = delta exactly.
    const Poly& n = sol.dist.num();
    const Poly& d = sol.dist.den();
    const Poly s_poly{{0.0, 1.0}};
    const Poly drift = s_poly * d - lambda * (d - n);  // s D - lambda (D - N)
    auto [drift_red, drift_rem] = shift_down(drift);
    const Poly work = (delta - omega) * (s_poly * d) - (lambda * delta) * (d - n);
    auto [work_red, work_rem] = shift_down(work);
    auto [work_final, rem_at_delta] = deflate(work_red, delta);
    double poly_scale = 0.0;
    for (double cft : work_red.coeff) poly_scale = std::max(poly_scale, std::fabs(cft));
    if (std::fabs(drift_rem) > 1e-9 || std::fabs(work_rem) > 1e-9 ||
        std::fabs(rem_at_delta) > 1e-8 * std::max(1.0, poly_scale))
        throw NumericalError("workload transform factorization left a residue");
    sol.drift_den = drift_red;
    sol.workload_num = work_final;
    sol.scale = (1.0 - rho) * delta / omega;
    return sol;
}

double QueueSolution::phi_plus0() const { return 1.0 - phi_minus0(); }

double QueueSolution::v_minus(double x) const { return a_const * std::exp(-delta * x); }

cplx QueueSolution::phi_plus(cplx s) const { return scale * workload_num(s) / drift_den(s); }

bool QueueSolution::exponential_service() const {
    return std::holds_alternative<Exponential>(dist.variant());
}

double QueueSolution::v_plus(double x) const {
    const double at_zero = (1.0 - rho) * delta * (delta - omega) / omega;
    if (exponential_service()) {
        const double mu = std::get<Exponential>(dist.variant()).mu;
        return at_zero * std::exp(-(mu - lambda) * x);
    }
    // flux balance at level 0 gives the boundary value for every service law
    if (x <= 0.0) return at_zero;
    num::BromwichConfig cfg;
    cfg.gamma = bromwich_abscissa(dist);
    const auto res = num::bromwich_invert([this](cplx z) { return phi_plus(z); }, cfg, x);
    return res.value;
}

// --------------------------------------------------- exceptional service ----

ExceptionalFirstService exceptional_first_service(const QueueSolution& sol) {
    ExceptionalFirstService ex;
    ex.delta = sol.delta;
    ex.beta_at_delta = sol.dist.lst(sol.delta);
    ex.den = sol.dist.den();
    // (beta(delta) D - N) has a zero at s = delta; divide it out
    Poly top = ex.beta_at_delta * sol.dist.den() - sol.dist.num();
    auto [reduced, rem] = deflate(top, sol.delta);
    double poly_scale = 0.0;
    for (double cft : top.coeff) poly_scale = std::max(poly_scale, std::fabs(cft));
    if (std::fabs(rem) > 1e-9 * std::max(1.0, poly_scale))
        throw NumericalError("overshoot transform factorization left a residue");
    ex.overshoot_num = reduced;
    ex.mean_first_service = sol.dist.mean() / (1.0 - ex.beta_at_delta) - 1.0 / sol.delta;
    ex.p_empty = (1.0 - sol.rho) / (1.0 - sol.rho + sol.lambda * ex.mean_first_service);
    return ex;
}

cplx ExceptionalFirstService::beta_hat(cplx s) const {
    return delta * overshoot_num(s) / ((1.0 - beta_at_delta) * den(s));
}

// -------------------------------------------------------------- insurance ----

InsuranceSolution solve_insurance(double lambda, double c, double omega,
                                  ServiceDistribution claims) {
    if (lambda <= 0.0) throw ConfigError("claim rate must be positive");
    if (c <= 0.0) throw ConfigError("premium rate must be positive");
    if (omega <= 0.0) throw ConfigError("bankruptcy rate must be positive");
    const double rho = lambda * claims.mean() / c;
    if (rho >= 1.0) throw ConfigError("unstable system: rho = " + std::to_string(rho) + " >= 1");

    const auto f = [&](double s) { return c * s - lambda * (1.0 - claims.lst(s)) - omega; };
    const double delta = positive_zero(f, (omega + lambda) / c + 1.0);

    InsuranceSolution sol{lambda, c,     omega, std::move(claims),
                          rho,    delta, -c * delta * (1.0 - rho) / omega,
                          {},     {}};

    // Psi_plus as an explicit rational function, zeros at 0 and delta cancelled
    const Poly& n = sol.claims.num();
    const Poly& d = sol.claims.den();
    const Poly s_poly{{0.0, 1.0}};
    const Poly premium = c * (s_poly * d) - lambda * (d - n);  // c s D - lambda (D - N)
    auto [premium_red, prem_rem] = shift_down(premium);
    Poly top = sol.z_const * (s_poly * premium_red - omega * d) +
               (s_poly - Poly{{delta}}) * premium_red;
    auto [top_red, top_rem0] = shift_down(top);
    auto [top_final, top_rem_delta] = deflate(top_red, delta);
    double poly_scale = 0.0;
    for (double cft : top.coeff) poly_scale = std::max(poly_scale, std::fabs(cft));
    if (std::fabs(prem_rem) > 1e-9 || std::fabs(top_rem0) > 1e-8 * std::max(1.0, poly_scale) ||
        std::fabs(top_rem_delta) > 1e-8 * std::max(1.0, poly_scale))
        throw NumericalError("bankruptcy transform factorization left a residue");
    sol.premium_den = premium_red;
    sol.bankruptcy_num = top_final;
    return sol;
}

double InsuranceSolution::u_minus(double x) const {
    return c * delta * (1.0 - rho) / omega * std::exp(-delta * x);
}

double InsuranceSolution::u_tilde_minus(double x) const { return 1.0 - u_minus(x); }

double InsuranceSolution::u_plus0() const { return 1.0 - u_minus(0.0); }

cplx InsuranceSolution::psi_plus(cplx s) const { return bankruptcy_num(s) / premium_den(s); }

bool InsuranceSolution::exponential_claims() const {
    return std::holds_alternative<Exponential>(claims.variant());
}

double InsuranceSolution::eta() const {
    if (!exponential_claims()) throw ConfigError("companion zero defined for exponential claims");
    const double nu = std::get<Exponential>(claims.variant()).mu;
    const double b = c * nu - omega - lambda;
    return (-std::sqrt(b * b + 4.0 * omega * nu * c) - b) / (2.0 * c);
}

double InsuranceSolution::u_plus(double x) const {
    if (exponential_claims()) {
        const double nu = std::get<Exponential>(claims.variant()).mu;
        const double rate = nu - lambda / c;
        return (1.0 - rate / (-eta())) * std::exp(-rate * x);
    }
    if (x == 0.0) return u_plus0();
    num::BromwichConfig cfg;
    cfg.gamma = bromwich_abscissa(claims);
    const auto res = num::bromwich_invert([this](cplx z) { return psi_plus(z); }, cfg, x);
    return res.value;
}

double ai_survival_hat(const InsuranceSolution& sol, double x) {
    if (!sol.exponential_claims())
        throw ConfigError("Poisson-observation survival needs exponential claims");
    const double nu = std::get<Exponential>(sol.claims.variant()).mu;
    const double rate = nu - sol.lambda / sol.c;
    const double factor = sol.delta / (sol.delta + rate);
    return 1.0 - factor * (sol.lambda / (nu * sol.c)) * std::exp(-rate * x);
}

double classical_ruin_exponential(double nu, double lambda, double c, double x) {
    return lambda / (nu * c) * std::exp(-(nu - lambda / c) * x);
}

double lundberg_coefficient(const ServiceDistribution& claims, double lambda, double c) {
    if (lambda * claims.mean() >= c) throw ConfigError("no adjustment coefficient: rho >= 1");
    // beta(-R) = E e^{R Y} is finite up to the smallest transform pole
    double pole = num::kInf;
    for (const cplx& z : claims.den_roots()) pole = std::min(pole, std::fabs(z.real()));
    const auto g = [&](double r) { return lambda * (claims.lst(-r) - 1.0) - c * r; };
    // g < 0 near 0 and g -> +inf toward the smallest transform pole
    double hi = std::isfinite(pole) ? 0.999 * pole : 1.0;
    if (g(hi) <= 0.0) hi = 0.99999 * pole;
    if (g(hi) <= 0.0) throw NumericalError("failed to bracket the adjustment coefficient");
    return num::find_root_monotone(g, 1e-9, hi);
}

}  // namespace wh::constant_omega
