#pragma once

#include <cstdint>
#include <vector>

#include "whkernel/dist.hpp"

namespace wh::sim {

// Clearing (queue) or bankruptcy (insurance) rate: omega(x) = value, or
// omega(x) = value * x with x the inventory level / deficit.
struct ClearingSpec {
    enum class Kind { constant, linear };
    Kind kind = Kind::constant;
    double value = 1.0;
};

struct SimConfig {
    std::uint64_t seed = 12345;
    int replications = 16;
    double time_total = 1.0e5;  // per replication, simulated time
    double burn_in = 1000.0;
    double bin_width = 0.05;
    double x_max_neg = 6.0;  // histogram covers X in [-x_max_neg, x_max_pos]
    double x_max_pos = 6.0;
    long paths = 100000;        // insurance paths
    double threshold_m = 0.0;   // survival threshold; <= 0 selects the Lundberg bound
    double eps_tail = 1.0e-4;   // truncation bias budget for the threshold
    int threads = 0;            // 0 = hardware; WHKERNEL_THREADS caps either way
};

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    double density = 0.0;
    double se = 0.0;
};

// Time-weighted stationary estimates on the signed workload axis
// (X < 0 is the inventory side; the inventory level is -X).
struct DensityEstimate {
    std::vector<HistogramBin> bins;
    double phi_minus_hat = 0.0;  // time fraction with X < 0
    double phi_minus_se = 0.0;
    double phi_plus_hat = 0.0;
    double mean_inventory_hat = 0.0;
    double mean_inventory_se = 0.0;
    double clearing_rate_hat = 0.0;
    double clearing_rate_se = 0.0;
    double below_range_mass = 0.0;
    double above_range_mass = 0.0;
    double observed_time = 0.0;
    long n_arrivals = 0;
    long n_clearings = 0;
    std::uint64_t seed = 0;
};

DensityEstimate simulate_workload(double lambda, const ServiceDistribution& dist,
                                  const ClearingSpec& clearing, const SimConfig& cfg);

struct BankruptcyEstimate {
    double p_bankrupt = 0.0;
    double se = 0.0;
    double p_ever_negative = 0.0;
    double se_negative = 0.0;
    double eps_tail = 0.0;
    double threshold_m = 0.0;
    long n_paths = 0;
    long n_bankrupt = 0;
    long n_ever_negative = 0;
    std::uint64_t seed = 0;
};

// Surplus paths C_t = x0 + c t - S_t with bankruptcy hazard omega(-C) while
// negative; a path is declared survived once it reaches the threshold M,
// whose classical ruin probability is below eps_tail.
BankruptcyEstimate simulate_bankruptcy(double lambda, double c, const ClearingSpec& omega,
                                       const ServiceDistribution& claims, double x0,
                                       const SimConfig& cfg);

// effective worker count after the WHKERNEL_THREADS cap
int effective_threads(int requested, int jobs);

}  // namespace wh::sim
