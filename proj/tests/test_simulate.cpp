#include <cmath>
#include <cstring>

#include "doctest.h"
#include "whkernel/constant_omega.hpp"
#include "whkernel/errors.hpp"
#include "whkernel/linear_omega.hpp"
#include "whkernel/simulate.hpp"

using namespace wh;
using namespace wh::sim;

namespace {

SimConfig small_cfg() {
    SimConfig cfg;
    cfg.seed = 99;
    cfg.replications = 8;
    cfg.time_total = 20000.0;
    cfg.burn_in = 500.0;
    return cfg;
}

}  // namespace

TEST_CASE("identical seeds give identical estimates") {
    const ServiceDistribution dist(Exponential{2.0});
    const ClearingSpec clearing{ClearingSpec::Kind::constant, 2.0};
    auto cfg = small_cfg();
    cfg.time_total = 5000.0;
    const auto a = simulate_workload(1.0, dist, clearing, cfg);
    const auto b = simulate_workload(1.0, dist, clearing, cfg);
    CHECK(a.phi_minus_hat == b.phi_minus_hat);
    CHECK(a.mean_inventory_hat == b.mean_inventory_hat);
    CHECK(a.n_arrivals == b.n_arrivals);
    REQUIRE(a.bins.size() == b.bins.size());
    for (size_t i = 0; i < a.bins.size(); ++i) {
        CHECK(a.bins[i].density == b.bins[i].density);
        CHECK(a.bins[i].se == b.bins[i].se);
    }
}

TEST_CASE("estimates do not depend on the worker count") {
    const ServiceDistribution dist(Exponential{2.0});
    const ClearingSpec clearing{ClearingSpec::Kind::constant, 2.0};
    auto cfg = small_cfg();
    cfg.time_total = 5000.0;
    cfg.threads = 1;
    const auto a = simulate_workload(1.0, dist, clearing, cfg);
    cfg.threads = 4;
    const auto b = simulate_workload(1.0, dist, clearing, cfg);
    CHECK(a.phi_minus_hat == b.phi_minus_hat);
    CHECK(a.clearing_rate_hat == b.clearing_rate_hat);
}

TEST_CASE("constant clearing estimates match the solved model") {
    const ServiceDistribution dist(Exponential{2.0});
    const auto sol = constant_omega::solve_queue(1.0, 2.0, dist);
    const auto est =
        simulate_workload(1.0, dist, {ClearingSpec::Kind::constant, 2.0}, small_cfg());
    CHECK(std::fabs(est.phi_minus_hat - sol.phi_minus0()) < 3.0 * est.phi_minus_se);
    // mean inventory of the exponential density
    const double ei = sol.a_const / (sol.delta * sol.delta);
    CHECK(std::fabs(est.mean_inventory_hat - ei) < 3.0 * est.mean_inventory_se);
    // rate conservation: clearings occur at rate omega while negative
    CHECK(std::fabs(est.clearing_rate_hat - 2.0 * sol.phi_minus0()) <
          3.0 * (est.clearing_rate_se + 2.0 * est.phi_minus_se));
    CHECK(std::fabs(est.phi_minus_hat + est.phi_plus_hat - 1.0) < 1e-14);
}

TEST_CASE("mixture service through the full pipeline") {
    const ServiceDistribution dist(HyperExponential{{0.4, 0.6}, {1.5, 6.0}});
    const auto sol = constant_omega::solve_queue(1.0, 2.0, dist);
    const auto est =
        simulate_workload(1.0, dist, {ClearingSpec::Kind::constant, 2.0}, small_cfg());
    CHECK(std::fabs(est.phi_minus_hat - sol.phi_minus0()) < 4.0 * est.phi_minus_se);
    CHECK(std::fabs(est.clearing_rate_hat - 2.0 * sol.phi_minus0()) <
          4.0 * (est.clearing_rate_se + 2.0 * est.phi_minus_se));
}

TEST_CASE("statistics are insensitive to doubling the burn-in") {
    const ServiceDistribution dist(Exponential{2.0});
    const ClearingSpec clearing{ClearingSpec::Kind::constant, 2.0};
    auto cfg = small_cfg();
    const auto a = simulate_workload(1.0, dist, clearing, cfg);
    cfg.burn_in *= 2.0;
    const auto b = simulate_workload(1.0, dist, clearing, cfg);
    CHECK(std::fabs(a.phi_minus_hat - b.phi_minus_hat) <
          3.0 * (a.phi_minus_se + b.phi_minus_se));
}

TEST_CASE("linear clearing estimates match the series pipeline") {
    const ServiceDistribution dist(Exponential{2.0});
    const auto sol = linear_omega::series_solve(linear_omega::classify(1.0, 2.0, 1.0));
    // 4 standard errors: the error estimate itself carries 7-dof noise here
    const auto est =
        simulate_workload(1.0, dist, {ClearingSpec::Kind::linear, 1.0}, small_cfg());
    CHECK(std::fabs(est.mean_inventory_hat - sol.mean_inventory) <
          4.0 * est.mean_inventory_se);
    CHECK(std::fabs(est.phi_minus_hat - sol.phi_minus0()) < 4.0 * est.phi_minus_se);
}

TEST_CASE("instant clearing pushes the inventory against zero") {
    const ServiceDistribution dist(Exponential{2.0});
    auto cfg = small_cfg();
    cfg.time_total = 5000.0;
    cfg.bin_width = 0.0005;
    cfg.x_max_neg = 0.1;
    cfg.x_max_pos = 8.0;
    const auto est = simulate_workload(1.0, dist, {ClearingSpec::Kind::constant, 1000.0}, cfg);
    // idle fraction of the plain single-server queue
    CHECK(std::fabs(est.phi_minus_hat - 0.5) < 4.0 * est.phi_minus_se);
    // essentially no inventory deeper than a few clearing scales
    double deep = est.below_range_mass;
    for (const auto& b : est.bins)
        if (b.right <= -0.005) deep += b.density * (b.right - b.left);
    CHECK(deep < 0.05);
}

TEST_CASE("bankruptcy estimates match the solved model") {
    const ServiceDistribution claims(Exponential{2.0});
    const auto sol = constant_omega::solve_insurance(1.0, 1.0, 2.0, claims);
    SimConfig cfg;
    cfg.seed = 31;
    cfg.paths = 120000;
    const auto at0 =
        simulate_bankruptcy(1.0, 1.0, {ClearingSpec::Kind::constant, 2.0}, claims, 0.0, cfg);
    CHECK(std::fabs(at0.p_bankrupt - sol.u_plus0()) < 3.0 * at0.se + at0.eps_tail);
    // classical ruin: fraction of paths that ever run a deficit
    CHECK(std::fabs(at0.p_ever_negative -
                    constant_omega::classical_ruin_exponential(2.0, 1.0, 1.0, 0.0)) <
          3.0 * at0.se_negative + at0.eps_tail);

    const auto neg =
        simulate_bankruptcy(1.0, 1.0, {ClearingSpec::Kind::constant, 2.0}, claims, -1.0, cfg);
    CHECK(std::fabs(neg.p_bankrupt - sol.u_tilde_minus(1.0)) < 3.0 * neg.se + neg.eps_tail);
}

TEST_CASE("bankruptcy probability decreases with initial capital") {
    const ServiceDistribution claims(Exponential{2.0});
    SimConfig cfg;
    cfg.seed = 8;
    cfg.paths = 60000;
    double prev = 1.0, prev_se = 0.0;
    for (double x0 : {0.0, 0.5, 1.0}) {
        const auto est =
            simulate_bankruptcy(1.0, 1.0, {ClearingSpec::Kind::constant, 2.0}, claims, x0, cfg);
        CHECK(est.p_bankrupt <= prev + 3.0 * (est.se + prev_se));
        prev = est.p_bankrupt;
        prev_se = est.se;
    }
}

TEST_CASE("instant bankruptcy recovers the classical ruin probability") {
    const ServiceDistribution claims(Exponential{2.0});
    SimConfig cfg;
    cfg.seed = 77;
    cfg.paths = 120000;
    const auto est =
        simulate_bankruptcy(1.0, 1.0, {ClearingSpec::Kind::constant, 1.0e5}, claims, 0.5, cfg);
    const double classical = constant_omega::classical_ruin_exponential(2.0, 1.0, 1.0, 0.5);
    CHECK(std::fabs(est.p_bankrupt - classical) < 4.0 * est.se + est.eps_tail);
}

TEST_CASE("linear bankruptcy hazard is exact on its quadratic integral") {
    // with a huge slope the hazard acts instantly as well
    const ServiceDistribution claims(Exponential{2.0});
    SimConfig cfg;
    cfg.seed = 5;
    cfg.paths = 60000;
    const auto est =
        simulate_bankruptcy(1.0, 1.0, {ClearingSpec::Kind::linear, 1.0e7}, claims, 0.5, cfg);
    const double classical = constant_omega::classical_ruin_exponential(2.0, 1.0, 1.0, 0.5);
    CHECK(std::fabs(est.p_bankrupt - classical) < 4.0 * est.se + est.eps_tail);
}

TEST_CASE("environment variable caps the worker count") {
    setenv("WHKERNEL_THREADS", "2", 1);
    CHECK(effective_threads(8, 100) == 2);
    CHECK(effective_threads(1, 100) == 1);
    unsetenv("WHKERNEL_THREADS");
    CHECK(effective_threads(8, 100) == 8);
    CHECK(effective_threads(8, 3) == 3);
}

TEST_CASE("simulation configuration errors") {
    const ServiceDistribution dist(Exponential{2.0});
    SimConfig cfg = small_cfg();
    cfg.burn_in = cfg.time_total;
    CHECK_THROWS_AS(simulate_workload(1.0, dist, {ClearingSpec::Kind::constant, 2.0}, cfg),
                    ConfigError);
    cfg = small_cfg();
    cfg.bin_width = 0.0;
    CHECK_THROWS_AS(simulate_workload(1.0, dist, {ClearingSpec::Kind::constant, 2.0}, cfg),
                    ConfigError);
    CHECK_THROWS_AS(
        simulate_workload(3.0, dist, {ClearingSpec::Kind::constant, 2.0}, small_cfg()),
        ConfigError);
    auto [n, d] = dist.rational_form();
    const ServiceDistribution rational(RationalLst{n, d});
    CHECK_THROWS_AS(
        simulate_workload(1.0, rational, {ClearingSpec::Kind::constant, 2.0}, small_cfg()),
        ConfigError);
    SimConfig bad;
    bad.eps_tail = 2.0;
    CHECK_THROWS_AS(
        simulate_bankruptcy(1.0, 1.0, {ClearingSpec::Kind::constant, 2.0}, dist, 0.0, bad),
        ConfigError);
}
