#pragma once

#include <string>
#include <variant>
#include <vector>

#include "whkernel/polynomial.hpp"
#include "whkernel/rng.hpp"

namespace wh {

// Service-requirement / claim-size laws with rational Laplace-Stieltjes
// transforms. The three named variants support exact sampling and explicit
// survival functions; the general rational form is transform-only (sampling
// it would need a phase-type fit, which is out of scope).

struct Exponential {
    double mu;  // rate, 1/time
};

struct Erlang {
    int k;      // phases >= 1
    double mu;  // per-phase rate
};

struct HyperExponential {
    std::vector<double> p;   // positive weights summing to 1
    std::vector<double> mu;  // per-branch rates
};

struct RationalLst {
    Poly num;  // degree <= deg(den) - 1, num.coeff[0] == den.coeff[0]
    Poly den;  // all zeros in Re s < 0
};

class ServiceDistribution {
  public:
    explicit ServiceDistribution(Exponential e);
    explicit ServiceDistribution(Erlang e);
    explicit ServiceDistribution(HyperExponential h);
    explicit ServiceDistribution(RationalLst r);

    // Transform value beta(s) = E[exp(-sB)]. Named variants use their closed
    // forms; the rational variant evaluates num/den. Throws NumericalError
    // when s is too close to a transform pole.
    cplx lst(cplx s) const;
    double lst(double s) const;

    double mean() const;

    // Exact draw. Throws ConfigError for the rational variant.
    double sample(Rng& rng) const;
    bool samplable() const;

    // P(B > t). Same availability as sample().
    double survival(double t) const;

    // (N, D) with N/D = beta, coprime, ascending coefficients.
    std::pair<Poly, Poly> rational_form() const;
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    // Zeros of D; all have negative real part.
    const std::vector<cplx>& den_roots() const { return den_roots_; }

    std::string describe() const;

    const std::variant<Exponential, Erlang, HyperExponential, RationalLst>& variant() const {
        return variant_;
    }

  private:
    void finalize();  // builds (N, D), validates invariants, caches roots

    std::variant<Exponential, Erlang, HyperExponential, RationalLst> variant_;
    Poly num_, den_;
    double mean_ = 0.0;
    std::vector<cplx> den_roots_;
};

}  // namespace wh
