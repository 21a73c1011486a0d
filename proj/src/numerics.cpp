#include "whkernel/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "whkernel/errors.hpp"

namespace wh::num {

// ---------------------------------------------------------------- roots ----

double find_root_monotone(const std::function<double(double)>& f, double lo, double hi,
                          const RootOptions& opt) {
    if (!(lo < hi)) throw NumericalError("root bracket is empty");
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NumericalError("no sign change over the root bracket");
    const double scale = std::max({1.0, std::fabs(fa), std::fabs(fb)});

    double c = b, fc = fb;
    double d = b - a, e = d;
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 =
            2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) + 0.5 * opt.x_tol;
        const double xm = 0.5 * (c - b);
        if (fb == 0.0) return b;
        if (std::fabs(xm) <= tol1 && std::fabs(fb) <= opt.f_tol * scale) return b;
        if (std::fabs(xm) <= tol1) return b;  // width at the floating-point limit
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::fabs(d) > tol1)
            b += d;
        else
            b += (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw NumericalError("root iteration did not converge");
}

std::pair<double, double> expand_bracket(const std::function<double(double)>& f, double lo,
                                         double hi, int max_doublings) {
    double fl = f(lo);
    if (fl == 0.0) return {lo, lo};
    for (int i = 0; i < max_doublings; ++i) {
        if (fl * f(hi) < 0.0) return {lo, hi};
        hi *= 2.0;
    }
    throw NumericalError("could not bracket a sign change");
}

// ----------------------------------------------------- special functions ----

double hermite(int n, double x) {
    if (n < 0) throw ConfigError("hermite order must be non-negative");
    if (n == 0) return 1.0;
    double hm = 1.0, h = x;
    for (int k = 1; k < n; ++k) {
        const double hp = x * h - k * hm;
        hm = h;
        h = hp;
    }
    return h;
}

double recip_gamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

double kummer_m(double a, double b, double z) {
    if (b <= 0.0 && b == std::floor(b))
        throw ConfigError("kummer M undefined for non-positive integer b");
    double term = 1.0, sum = 1.0;
    for (int s = 0; s < 5000; ++s) {
        if (a + s == 0.0) return sum;  // terminating series
        term *= (a + s) / (b + s) * z / (s + 1);
        sum += term;
        if (std::fabs(term) <= 1e-17 * std::fabs(sum) && s > 2) return sum;
    }
    throw NumericalError("kummer M series did not converge");
}

namespace {

// U(a,b,z) ~ z^{-a} sum_s (a)_s (a-b+1)_s / (s! (-z)^s), truncated at the
// smallest term. Adequate beyond z ~ 18 for the modest |a| used here.
double kummer_u_asymptotic(double a, double b, double z) {
    double term = 1.0, sum = 1.0, best = 1.0;
    for (int s = 0; s < 400; ++s) {
        const double next = term * (a + s) * (a - b + 1.0 + s) / ((s + 1) * (-z));
        if (std::fabs(next) > best && s > 2) break;  // divergence onset
        term = next;
        best = std::fabs(term);
        sum += term;
        if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
    }
    return std::pow(z, -a) * sum;
}

constexpr double kUAsymptoticSwitch = 18.0;

}  // namespace

double kummer_u(double a, double b, double z) {
    if (z < 0.0) throw ConfigError("kummer U requires z >= 0");
    const bool half_integer_b = std::fabs(b - std::floor(b) - 0.5) < 1e-12;
    if (!half_integer_b) throw ConfigError("kummer U implemented for half-integer b only");
    if (z == 0.0) {
        if (b >= 1.0) throw ConfigError("kummer U diverges at z = 0 for b >= 1");
        return std::tgamma(1.0 - b) * recip_gamma(a - b + 1.0);
    }
    if (z > kUAsymptoticSwitch) return kummer_u_asymptotic(a, b, z);
    // connection formula; a branch drops out automatically when its
    // reciprocal gamma factor hits a pole (the polynomial reductions)
    const double c1 = std::tgamma(1.0 - b) * recip_gamma(a - b + 1.0);
    const double c2 = std::tgamma(b - 1.0) * recip_gamma(a);
    double value = 0.0;
    if (c1 != 0.0) value += c1 * kummer_m(a, b, z);
    if (c2 != 0.0) value += c2 * std::pow(z, 1.0 - b) * kummer_m(a - b + 1.0, 2.0 - b, z);
    return value;
}

double kummer_u_dz(double a, double b, double z) { return -a * kummer_u(a + 1.0, b + 1.0, z); }

// ------------------------------------------------------------ quadrature ----

namespace {

struct TsNode {
    double offset;  // distance from an endpoint (or half width for the midpoint)
    double w;
    bool from_lower;
};

// nodes of one tanh-sinh level; odd multiples of h only, unless level 0
void ts_nodes(double h, bool all_multiples, double half_width, std::vector<TsNode>& out) {
    out.clear();
    for (int k = all_multiples ? 0 : 1;; k += all_multiples ? 1 : 2) {
        const double t = k * h;
        const double u = 0.5 * M_PI * std::sinh(t);
        if (u > 350.0) break;
        const double cosh_u = std::cosh(u);
        const double w = half_width * 0.5 * M_PI * std::cosh(t) / (cosh_u * cosh_u);
        const double dist = half_width * 2.0 / (1.0 + std::exp(2.0 * u));
        if (w < 1e-300 || dist <= 0.0) break;
        if (k == 0)
            out.push_back({half_width, w, true});  // midpoint
        else {
            out.push_back({dist, w, false});
            out.push_back({dist, w, true});
        }
    }
}

}  // namespace

QuadratureResult integrate_ts(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, int max_level) {
    QuadratureResult res;
    if (a == b) return res;
    const double half = 0.5 * (b - a);
    std::vector<TsNode> nodes;
    double h = 1.0;
    double weighted_sum = 0.0;  // sum of w*f over all nodes seen so far
    double prev = 0.0;
    for (int level = 0; level <= max_level; ++level) {
        ts_nodes(h, level == 0, half, nodes);
        for (const TsNode& n : nodes) {
            const double x = n.from_lower ? a + n.offset : b - n.offset;
            const double fx = f(x);
            if (std::isfinite(fx)) weighted_sum += n.w * fx;
        }
        const double value = weighted_sum * h;
        res.value = value;
        res.levels = level;
        if (level >= 2) {
            res.last_delta = std::fabs(value - prev);
            if (res.last_delta <= rel_tol * std::max(std::fabs(value), 1e-300)) return res;
        }
        prev = value;
        h *= 0.5;
    }
    return res;  // caller decides whether last_delta is acceptable
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    return integrate_ts(f, a, b, rel_tol).value;
}

double integrate_semi_infinite(const std::function<double(double)>& f, double a, double rel_tol,
                               double first_panel) {
    double total = 0.0;
    double lo = a, width = first_panel;
    for (int panel = 0; panel < 60; ++panel) {
        const double part = integrate(f, lo, lo + width, rel_tol);
        total += part;
        if (panel > 2 && std::fabs(part) <= rel_tol * std::max(1e-300, std::fabs(total)))
            return total;
        lo += width;
        width *= 2.0;
    }
    throw NumericalError("semi-infinite integral did not settle");
}

double singular_integral(const SingularWeightIntegral& spec, double rel_tol) {
    const double p = spec.power;
    if (p <= -1.0) throw ConfigError("integrand power must exceed -1");
    if (spec.theta1 < 0.0 || spec.theta2 < 0.0)
        throw ConfigError("weight coefficients must be non-negative");
    if (!spec.decaying && !std::isfinite(spec.upper))
        throw ConfigError("growing weight needs a finite upper limit");
    if (spec.decaying && !std::isfinite(spec.upper) && spec.theta1 == 0.0 && spec.theta2 == 0.0)
        throw ConfigError("integral over [0, inf) needs a decaying weight");

    const auto weight = [&](double v) {
        const double e = spec.decaying ? -(spec.theta1 * v + spec.theta2 * v * v)
                                       : spec.theta1 * v - spec.theta2 * v * v;
        return std::exp(e);
    };

    // cutoff for an infinite range: weight ~1e-35 at the cut
    double upper = spec.upper;
    if (!std::isfinite(upper)) {
        const double target = 80.0;
        if (spec.theta2 > 0.0)
            upper = (-spec.theta1 +
                     std::sqrt(spec.theta1 * spec.theta1 + 4.0 * spec.theta2 * target)) /
                    (2.0 * spec.theta2);
        else
            upper = target / spec.theta1;
        upper = std::max(upper, 1.0);
    }

    if (p < 0.0) {
        // v = u^{1/(1+p)} flattens the endpoint: v^p dv = du / (1+p)
        const double q = 1.0 / (1.0 + p);
        const double u_max = std::pow(upper, 1.0 + p);
        const auto g = [&](double u) { return weight(std::pow(u, q)) / (1.0 + p); };
        return integrate(g, 0.0, u_max, rel_tol);
    }
    const auto g = [&](double v) { return std::pow(v, p) * weight(v); };
    return integrate(g, 0.0, upper, rel_tol);
}

// ---------------------------------------------------------- transform inv ----

namespace {

// fit F(z) ~ c1/(z+q) + c2/(z+q)^2 from two real-axis samples far to the right
void fit_tail(const std::function<cplx(cplx)>& F, double gamma, double q, double& c1,
              double& c2) {
    const double z1 = gamma + 1.0e3, z2 = gamma + 3.0e3;
    const double y1 = F(cplx(z1, 0.0)).real() * (z1 + q);
    const double y2 = F(cplx(z2, 0.0)).real() * (z2 + q);
    c2 = (y1 - y2) / (1.0 / (z1 + q) - 1.0 / (z2 + q));
    c1 = y1 - c2 / (z1 + q);
    if (!std::isfinite(c1) || !std::isfinite(c2)) {
        c1 = 0.0;
        c2 = 0.0;
    }
}

}  // namespace

BromwichResult bromwich_invert(const std::function<cplx(cplx)>& transform,
                               const BromwichConfig& cfg, double x) {
    if (x <= 0.0) throw ConfigError("inversion point must be positive");
    const double gamma = cfg.gamma;
    const double q = cfg.tail_pole;
    double c1 = 0.0, c2 = 0.0;
    if (cfg.subtract_tail) fit_tail(transform, gamma, q, c1, c2);

    const auto psi = [&](cplx z) {
        return transform(z) - c1 / (z + q) - c2 / ((z + q) * (z + q));
    };

    // step tied to the abscissa: aliasing error ~ e^{-2 pi gamma / h} = e^{-20}
    const double h = M_PI * gamma / 10.0;
    const double known = (c1 + c2 * x) * std::exp(-q * x);

    BromwichResult res;
    double prev = 0.0;
    double omega = cfg.omega_init;
    const double psi0 = psi(cplx(gamma, 0.0)).real();
    for (int round = 0; round <= cfg.max_doublings; ++round) {
        const int n = std::max(8, static_cast<int>(omega / h));
        double acc = 0.5 * psi0;
        const int taper_from = static_cast<int>(0.8 * n);
        for (int k = 1; k <= n; ++k) {
            const double w = k * h;
            double win = 1.0;
            if (k > taper_from)
                win = 0.5 *
                      (1.0 + std::cos(M_PI * double(k - taper_from) / double(n - taper_from)));
            const cplx val = psi(cplx(gamma, w)) * std::exp(cplx(0.0, w * x));
            acc += win * val.real();
        }
        const double value = std::exp(gamma * x) / M_PI * h * acc + known;
        res.value = value;
        if (round > 0) {
            res.err_estimate = std::fabs(value - prev);
            if (res.err_estimate <= cfg.tol * std::max(1.0, std::fabs(value))) {
                res.converged = true;
                return res;
            }
        }
        prev = value;
        omega *= 2.0;
    }
    res.converged = false;
    return res;
}

}  // namespace wh::num
