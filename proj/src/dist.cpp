#include "whkernel/dist.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "whkernel/errors.hpp"

namespace wh {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace

ServiceDistribution::ServiceDistribution(Exponential e) : variant_(e) {
    require(e.mu > 0.0, "exponential: rate must be positive");
    num_ = Poly{{e.mu}};
    den_ = Poly{{e.mu, 1.0}};
    finalize();
}

ServiceDistribution::ServiceDistribution(Erlang e) : variant_(e) {
    require(e.k >= 1, "erlang: phase count must be >= 1");
    require(e.mu > 0.0, "erlang: rate must be positive");
    num_ = Poly{{std::pow(e.mu, e.k)}};
    den_ = Poly{{1.0}};
    const Poly factor{{e.mu, 1.0}};
    for (int i = 0; i < e.k; ++i) den_ = den_ * factor;
    finalize();
}

ServiceDistribution::ServiceDistribution(HyperExponential h) : variant_(h) {
    require(h.p.size() == h.mu.size() && !h.p.empty(),
            "hyperexp: weight and rate lists must match and be non-empty");
    double total = 0.0;
    for (size_t i = 0; i < h.p.size(); ++i) {
        require(h.p[i] > 0.0, "hyperexp: weights must be positive");
        require(h.mu[i] > 0.0, "hyperexp: rates must be positive");
        total += h.p[i];
    }
    require(std::fabs(total - 1.0) < 1e-9, "hyperexp: weights must sum to 1");

    den_ = Poly{{1.0}};
    for (double m : h.mu) den_ = den_ * Poly{{m, 1.0}};
    num_ = Poly{{0.0}};
    for (size_t i = 0; i < h.p.size(); ++i) {
        Poly term{{h.p[i] * h.mu[i]}};
        for (size_t j = 0; j < h.mu.size(); ++j)
            if (j != i) term = term * Poly{{h.mu[j], 1.0}};
        num_ = num_ + term;
    }
    finalize();
}

ServiceDistribution::ServiceDistribution(RationalLst r) : variant_(r), num_(r.num), den_(r.den) {
    num_.trim();
    den_.trim();
    finalize();
}

void ServiceDistribution::finalize() {
    const int m = den_.degree();
    require(m >= 1, "transform denominator must be non-constant");
    require(num_.degree() <= m - 1, "transform numerator degree must be below denominator degree");
    require(std::fabs(num_.coeff[0] - den_.coeff[0]) <=
                1e-9 * std::max(1.0, std::fabs(den_.coeff[0])),
            "transform must equal 1 at s=0 (constant coefficients must match)");
    num_.coeff[0] = den_.coeff[0];  // pin beta(0) = 1 exactly

    den_roots_ = roots(den_);
    for (const cplx& z : den_roots_)
        require(z.real() < 0.0, "transform denominator must have all zeros in Re s < 0");

    // coprimality: a shared zero would silently cancel a transform pole.
    // Checked as |D| at the numerator zeros (robust against the clustering
    // of repeated denominator roots).
    for (const cplx& zn : roots(num_)) {
        double scale = 0.0, zp = 1.0;
        for (double dk : den_.coeff) {
            scale += std::fabs(dk) * zp;
            zp *= std::abs(zn);
        }
        require(std::abs(den_(zn)) > 1e-9 * std::max(scale, 1e-300),
                "transform numerator and denominator share a zero");
    }

    // E B = -d/ds (N/D) at 0 = (n0 d1 - n1 d0) / d0^2
    const double d0 = den_.coeff[0];
    const double d1 = den_.coeff.size() > 1 ? den_.coeff[1] : 0.0;
    const double n1 = num_.coeff.size() > 1 ? num_.coeff[1] : 0.0;
    mean_ = (num_.coeff[0] * d1 - n1 * d0) / (d0 * d0);
    require(mean_ > 0.0, "transform must have a positive mean");
}

cplx ServiceDistribution::lst(cplx s) const {
    return std::visit(
        [&](const auto& v) -> cplx {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                const cplx d = v.mu + s;
                if (std::abs(d) < 1e-12 * v.mu)
                    throw NumericalError("transform evaluated too close to its pole");
                return v.mu / d;
            } else if constexpr (std::is_same_v<T, Erlang>) {
                const cplx d = v.mu + s;
                if (std::abs(d) < 1e-12 * v.mu)
                    throw NumericalError("transform evaluated too close to its pole");
                return std::pow(v.mu / d, v.k);
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                cplx acc = 0.0;
                for (size_t i = 0; i < v.p.size(); ++i) {
                    const cplx d = v.mu[i] + s;
                    if (std::abs(d) < 1e-12 * v.mu[i])
                        throw NumericalError("transform evaluated too close to its pole");
                    acc += v.p[i] * v.mu[i] / d;
                }
                return acc;
            } else {
                const cplx d = den_(s);
                double scale = 0.0;
                for (double c : den_.coeff) scale = std::max(scale, std::fabs(c));
                if (std::abs(d) < 1e-12 * scale)
                    throw NumericalError("transform evaluated too close to a pole");
                return num_(s) / d;
            }
        },
        variant_);
}

double ServiceDistribution::lst(double s) const { return lst(cplx(s, 0.0)).real(); }

double ServiceDistribution::mean() const { return mean_; }

bool ServiceDistribution::samplable() const {
    return !std::holds_alternative<RationalLst>(variant_);
}

double ServiceDistribution::sample(Rng& rng) const {
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return rng.exponential(v.mu);
            } else if constexpr (std::is_same_v<T, Erlang>) {
                double acc = 0.0;
                for (int i = 0; i < v.k; ++i) acc += rng.exponential(v.mu);
                return acc;
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                const double u = rng.next_double();
                double cum = 0.0;
                for (size_t i = 0; i < v.p.size(); ++i) {
                    cum += v.p[i];
                    if (u < cum || i + 1 == v.p.size()) return rng.exponential(v.mu[i]);
                }
                return rng.exponential(v.mu.back());
            } else {
                throw ConfigError("general rational transforms have no sampler");
            }
        },
        variant_);
}

double ServiceDistribution::survival(double t) const {
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return std::exp(-v.mu * t);
            } else if constexpr (std::is_same_v<T, Erlang>) {
                double term = 1.0, acc = 1.0;
                for (int j = 1; j < v.k; ++j) {
                    term *= v.mu * t / j;
                    acc += term;
                }
                return std::exp(-v.mu * t) * acc;
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                double acc = 0.0;
                for (size_t i = 0; i < v.p.size(); ++i) acc += v.p[i] * std::exp(-v.mu[i] * t);
                return acc;
            } else {
                throw ConfigError("general rational transforms have no survival function");
            }
        },
        variant_);
}

std::pair<Poly, Poly> ServiceDistribution::rational_form() const { return {num_, den_}; }

std::string ServiceDistribution::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exponential>)
                os << "exponential(mu=" << v.mu << ")";
            else if constexpr (std::is_same_v<T, Erlang>)
                os << "erlang(k=" << v.k << ", mu=" << v.mu << ")";
            else if constexpr (std::is_same_v<T, HyperExponential>)
                os << "hyperexp(" << v.p.size() << " branches)";
            else
                os << "rational(m=" << den_.degree() << ")";
        },
        variant_);
    return os.str();
}

}  // namespace wh
