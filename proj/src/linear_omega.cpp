#include "whkernel/linear_omega.hpp"

#include <algorithm>
#include <cmath>

#include "whkernel/errors.hpp"

namespace wh::linear_omega {

namespace {

// exponent of the growing weight on [0, mu]
double a1_weight(const LinearExpModel& m, double w) {
    return ((m.mu + m.lambda) * w - 0.5 * w * w) / m.a;
}

// largest u with ((mu+lambda+re_w) u + u^2/2)/a <= target
double decay_cutoff(const LinearExpModel& m, double re_w, double target = 80.0) {
    const double b = m.mu + m.lambda + re_w;
    return -b + std::sqrt(b * b + 2.0 * m.a * target);
}

}  // namespace

LinearExpModel classify(double lambda, double mu, double a) {
    if (lambda <= 0.0 || mu <= 0.0 || a <= 0.0)
        throw ConfigError("rates and the clearing slope must be positive");
    if (mu <= lambda) throw ConfigError("stability requires mu > lambda");
    LinearExpModel m{lambda, mu, a, mu * lambda / a, 0, false};
    const double nearest = std::round(m.sigma);
    if (nearest >= 1.0 && std::fabs(m.sigma - nearest) < 1e-12 * std::max(1.0, m.sigma)) {
        m.integer_sigma = true;
        m.sigma = nearest;
        m.K = static_cast<int>(nearest);
    } else {
        m.K = static_cast<int>(std::ceil(m.sigma));
    }
    return m;
}

SeriesSolution series_solve(const LinearExpModel& model) {
    SeriesSolution sol;
    sol.model = model;
    const double mu = model.mu, lambda = model.lambda, a = model.a;
    const double sigma = model.sigma;
    const int K = model.K;

    const double nearest = std::round(sigma);
    if (!model.integer_sigma && nearest >= 1.0 && std::fabs(sigma - nearest) < 1e-6)
        sol.warnings.push_back(
            "sigma within 1e-6 of an integer: the near-singular integrand degrades quadrature");

    const double theta1 = (mu + lambda) / a;
    const double theta2 = 0.5 / a;

    std::vector<double>& B = sol.chain;
    B.assign(static_cast<size_t>(K) + 1, 0.0);
    B[static_cast<size_t>(K)] = 1.0;

    if (model.integer_sigma) {
        sol.integral_tail_lo = num::singular_integral({0.0, theta1, theta2, num::kInf, true});
        sol.integral_left_hi = num::singular_integral({0.0, theta1, theta2, mu, false});
        B[static_cast<size_t>(K) - 1] = a / sol.integral_tail_lo;
        sol.boundary_term = 1.0;
    } else {
        sol.integral_tail_hi =
            num::singular_integral({K - sigma, theta1, theta2, num::kInf, true});
        sol.integral_tail_lo =
            num::singular_integral({K - sigma - 1.0, theta1, theta2, num::kInf, true});
        sol.integral_left_hi = num::singular_integral({K - sigma, theta1, theta2, mu, false});
        sol.integral_left_lo =
            num::singular_integral({K - sigma - 1.0, theta1, theta2, mu, false});
        B[static_cast<size_t>(K) - 1] =
            a * (K - sigma) * sol.integral_tail_lo / sol.integral_tail_hi;
        sol.boundary_term = (K - sigma) * sol.integral_left_lo;
    }

    // express every coefficient through c_K
    for (int k = K; k >= 2; --k)
        B[static_cast<size_t>(k) - 2] = (k * a - mu * lambda) * B[static_cast<size_t>(k)] +
                                        (mu + lambda) * B[static_cast<size_t>(k) - 1];

    // normalization fixing c_K
    double paren = mu / (mu - lambda) * B[0];
    double mu_pow = 1.0;
    for (int k = 1; k <= K - 1; ++k) {
        mu_pow *= mu;
        paren += B[static_cast<size_t>(k)] * mu_pow;
    }
    paren += std::pow(mu, sigma) * std::exp(-a1_weight(model, mu)) *
             (sol.integral_left_hi / a * B[static_cast<size_t>(K) - 1] + sol.boundary_term);
    if (!(std::fabs(paren) > 1e-12)) throw NumericalError("degenerate normalization equation");

    sol.c.assign(static_cast<size_t>(K) + 1, 0.0);
    const double cK = 1.0 / paren;
    for (int k = 0; k <= K; ++k) sol.c[static_cast<size_t>(k)] = B[static_cast<size_t>(k)] * cK;
    for (double ck : sol.c)
        if (!(ck > 0.0)) throw NumericalError("transform coefficients must be positive");

    sol.r1 = lambda * sol.c[0];
    sol.mean_inventory = mu / a * sol.c[0] + (1.0 - sigma) * sol.c[1];
    if (!(sol.r1 > 0.0 && sol.r1 < mu - lambda))
        throw NumericalError("workload mass fell outside (0, 1)");
    return sol;
}

// ------------------------------------------------------------- transform ----

double SeriesSolution::phi_minus(double z) const {
    const double mu = model.mu, lambda = model.lambda, a = model.a;
    const double sigma = model.sigma;
    const int K = model.K;
    if (z < 0.0) throw ConfigError("transform argument must be non-negative");
    const double theta1 = (mu + lambda) / a, theta2 = 0.5 / a;

    if (z <= mu) {
        const double w = mu - z;
        double val = 0.0, wp = 1.0;
        for (int k = 0; k <= K - 1; ++k) {
            val += c[static_cast<size_t>(k)] * wp;
            wp *= w;
        }
        if (w == 0.0) return val;
        const double damp = std::exp(-a1_weight(model, w));
        if (model.integer_sigma) val += c[static_cast<size_t>(K)] * std::pow(w, K) * damp;
        double grow = 0.0;
        if (!model.integer_sigma)
            grow += (K - sigma) * c[static_cast<size_t>(K)] *
                    num::singular_integral({K - sigma - 1.0, theta1, theta2, w, false});
        grow += c[static_cast<size_t>(K) - 1] / a *
                num::singular_integral({K - sigma, theta1, theta2, w, false});
        return val + std::pow(w, sigma) * damp * grow;
    }

    const double w = z - mu;
    if (w > 48.0) return phi_minus(cplx(z, 0.0)).real();  // moment-series regime

    double poly = 0.0, wp = 1.0;
    for (int k = 0; k <= K - 1; ++k) {
        const double dk = (k % 2 == 0) ? c[static_cast<size_t>(k)] : -c[static_cast<size_t>(k)];
        poly += dk * wp;
        wp *= w;
    }
    const double dK = (K % 2 == 0) ? c[static_cast<size_t>(K)] : -c[static_cast<size_t>(K)];
    const double dKm1 =
        ((K - 1) % 2 == 0) ? c[static_cast<size_t>(K) - 1] : -c[static_cast<size_t>(K) - 1];

    if (w <= 0.5) {
        // boundary-layer form: growing factor times a cancelling bracket;
        // safe here because the growth stays modest for small w
        const double back = std::exp(theta1 * w + theta2 * w * w);
        double bracket = 0.0;
        if (model.integer_sigma)
            bracket += dK;
        else
            bracket += (K - sigma) * dK *
                       num::singular_integral({K - sigma - 1.0, theta1, theta2, w, true});
        bracket += dKm1 / a * num::singular_integral({K - sigma, theta1, theta2, w, true});
        return poly + std::pow(w, sigma) * back * bracket;
    }

    // flipped tail form: positive decaying kernel, no cancellation in the integral
    const double b_lin = (mu + lambda + w) / a;
    const double u_max = decay_cutoff(model, w);
    const auto kern = [&](double u) {
        double q = dKm1 / a * std::pow(u + w, K - sigma);
        if (!model.integer_sigma) q += (K - sigma) * dK * std::pow(u + w, K - sigma - 1.0);
        return q * std::exp(-(b_lin * u + 0.5 * u * u / a));
    };
    const double g = num::integrate(kern, 0.0, u_max, 1e-13);
    return poly - std::pow(w, sigma) * g;
}

cplx SeriesSolution::phi_minus(cplx z) const {
    const double mu = model.mu, lambda = model.lambda, a = model.a;
    const double sigma = model.sigma;
    const int K = model.K;
    const cplx w = z - mu;
    if (w.real() <= 0.0)
        throw ConfigError("contour evaluation of the transform needs Re z > mu");

    // far field: 1/z moment series generated by the defining equation
    if (std::abs(w) > 48.0) {
        std::vector<double> p(64, 0.0);
        p[1] = a * mean_inventory + r1;
        p[2] = (mu - lambda) * p[1] - a * mu * mean_inventory;
        for (int j = 1; j + 2 < static_cast<int>(p.size()); ++j)
            p[static_cast<size_t>(j) + 2] = (mu - lambda) * p[static_cast<size_t>(j) + 1] -
                                            a * j * p[static_cast<size_t>(j)] +
                                            a * mu * (j - 1) * p[static_cast<size_t>(j) - 1];
        cplx sum = 0.0;
        cplx zp = 1.0 / z;
        double last = num::kInf;
        for (size_t j = 1; j < p.size(); ++j) {
            const cplx term = p[j] * zp;
            if (std::abs(term) > last && j > 4) break;  // asymptotic turnover
            sum += term;
            last = std::abs(term);
            if (last <= 1e-17 * std::abs(sum)) break;
            zp /= z;
        }
        return sum;
    }

    cplx poly = 0.0;
    cplx wp = 1.0;
    for (int k = 0; k <= K - 1; ++k) {
        const double dk = (k % 2 == 0) ? c[static_cast<size_t>(k)] : -c[static_cast<size_t>(k)];
        poly += dk * wp;
        wp *= w;
    }
    const double dK = (K % 2 == 0) ? c[static_cast<size_t>(K)] : -c[static_cast<size_t>(K)];
    const double dKm1 =
        ((K - 1) % 2 == 0) ? c[static_cast<size_t>(K) - 1] : -c[static_cast<size_t>(K) - 1];

    const auto q2 = [&](cplx v) -> cplx {
        cplx val = dKm1 / a * std::pow(v, K - sigma);
        if (!model.integer_sigma) val += (K - sigma) * dK * std::pow(v, K - sigma - 1.0);
        return val;
    };
    const auto kernel = [&](double u) -> cplx {
        const cplx e = -((mu + lambda + w) * u + 0.5 * u * u) / a;
        return q2(u + w) * std::exp(e);
    };

    const double u_max = decay_cutoff(model, w.real());
    const double wavelength = 2.0 * M_PI * a / std::max(std::fabs(w.imag()), 1.0);
    const double panel = std::min(wavelength / 4.0, u_max / 8.0);
    const int n_panels = std::min(20000, static_cast<int>(std::ceil(u_max / panel)));

    static const double gx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double gw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    cplx acc = 0.0;
    for (int i = 0; i < n_panels; ++i) {
        const double lo = i * u_max / n_panels, hi = (i + 1) * u_max / n_panels;
        const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
        for (int j = 0; j < 8; ++j)
            acc += rad * gw[j] * (kernel(mid + rad * gx[j]) + kernel(mid - rad * gx[j]));
    }
    return poly - std::pow(w, sigma) * acc;
}

double SeriesSolution::v_minus_integer(double t) const {
    if (!model.integer_sigma)
        throw ConfigError("closed-form density applies to integer sigma only");
    const double mu = model.mu, lambda = model.lambda;
    const int K = model.K;
    const double ml_over_k = mu * lambda / K;
    const double arg = (mu + lambda) / std::sqrt(ml_over_k) + std::sqrt(ml_over_k) * t;
    return c[static_cast<size_t>(K) - 1] * std::pow(ml_over_k, 0.5 * K) *
           std::exp(-lambda * t - 0.5 * ml_over_k * t * t) * num::hermite(K, arg);
}

double SeriesSolution::v_plus(double x) const {
    return r1 * std::exp(-(model.mu - model.lambda) * x);
}

double v_minus_noninteger(const SeriesSolution& sol, double x, const num::BromwichConfig& cfg) {
    if (sol.model.integer_sigma)
        throw ConfigError("contour inversion route is for non-integer sigma");
    if (cfg.gamma <= sol.model.mu) throw ConfigError("abscissa must exceed mu");
    const auto F = [&](cplx z) { return sol.phi_minus(z); };
    return num::bromwich_invert(F, cfg, x).value;
}

// ----------------------------------------------------------- direct route ----

namespace {

double shape_value(const DirectSolution& d, double x) {
    const auto& m = d.model;
    const double damp = std::exp(-0.5 * m.a * x * x - m.lambda * x);
    if (d.route == DirectSolution::Route::kummer) {
        const double z = 0.5 * m.a * std::pow(x + (m.lambda + m.mu) / m.a, 2.0);
        return damp * num::kummer_u(-0.5 * d.nu, 0.5, z);
    }
    const double y = std::sqrt(m.a) * x + (m.lambda + m.mu) / std::sqrt(m.a);
    return damp * num::hermite(static_cast<int>(std::lround(d.nu)), y);
}

}  // namespace

DirectSolution direct_solve(const LinearExpModel& model) {
    DirectSolution d;
    d.model = model;
    d.nu = model.mu * model.lambda / model.a;

    const bool integer_nu = std::fabs(d.nu - std::round(d.nu)) < 1e-9 * std::max(1.0, d.nu);
    if (integer_nu) {
        d.nu = std::round(d.nu);
        const long n = std::lround(d.nu);
        d.route = (n % 2 == 0) ? DirectSolution::Route::hermite_even
                               : DirectSolution::Route::hermite_odd;
    } else {
        d.route = DirectSolution::Route::kummer;
    }

    const double mu = model.mu, lambda = model.lambda, a = model.a;
    double t0;  // S'(0) + lambda S(0), the flux constant of the boundary relation
    if (d.route == DirectSolution::Route::kummer) {
        const double z0 = 0.5 * (lambda + mu) * (lambda + mu) / a;
        t0 = (lambda + mu) * num::kummer_u_dz(-0.5 * d.nu, 0.5, z0);
    } else {
        const double y0 = (lambda + mu) / std::sqrt(a);
        t0 = std::sqrt(a) * d.nu * num::hermite(static_cast<int>(std::lround(d.nu)) - 1, y0);
    }

    const double x_cut = (-lambda + std::sqrt(lambda * lambda + 120.0 * a)) / a;  // ~e^{-60}
    const double mass =
        num::integrate([&](double x) { return shape_value(d, x); }, 0.0, x_cut, 1e-12);

    d.k_eff = 1.0 / (t0 / (mu * (mu - lambda)) + mass);
    d.C = d.k_eff * t0 / (lambda * mu);

    switch (d.route) {
        case DirectSolution::Route::kummer:
            d.k_form = d.k_eff;
            break;
        case DirectSolution::Route::hermite_odd:
            d.k_form = d.k_eff * std::pow(2.0, 0.5 * d.nu);
            break;
        case DirectSolution::Route::hermite_even: {
            const double n = d.nu / 2.0;
            const double sign = (std::lround(n) % 2 == 0) ? 1.0 : -1.0;
            d.k_form = d.k_eff * sign * std::tgamma(d.nu + 1.0) /
                        (std::tgamma(n + 1.0) * std::pow(2.0, 0.5 * d.nu));
            break;
        }
    }
    return d;
}

double DirectSolution::v_minus(double x) const { return k_eff * shape_value(*this, x); }

double DirectSolution::v_plus(double x) const {
    return r1() * std::exp(-(model.mu - model.lambda) * x);
}

const char* DirectSolution::route_name(Route r) {
    switch (r) {
        case Route::kummer: return "kummer";
        case Route::hermite_odd: return "hermite-odd";
        case Route::hermite_even: return "hermite-even";
    }
    return "?";
}

}  // namespace wh::linear_omega
