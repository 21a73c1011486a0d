#include "whkernel/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "whkernel/constant_omega.hpp"
#include "whkernel/errors.hpp"
#include "whkernel/numerics.hpp"

namespace wh::sim {

int effective_threads(int requested, int jobs) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* cap = std::getenv("WHKERNEL_THREADS")) {
        const int c = std::atoi(cap);
        if (c > 0) n = std::min(n, c);
    }
    return std::max(1, std::min(n, jobs));
}

namespace {

void validate_common(const SimConfig& cfg) {
    if (cfg.bin_width <= 0.0) throw ConfigError("bin width must be positive");
    if (cfg.burn_in >= cfg.time_total) throw ConfigError("burn-in must precede the end time");
    if (cfg.x_max_neg <= 0.0 || cfg.x_max_pos <= 0.0)
        throw ConfigError("histogram range must be positive on both sides");
}

double sample_clearing_time(const ClearingSpec& spec, double inventory, Rng& rng) {
    if (spec.kind == ClearingSpec::Kind::constant) return rng.exponential(spec.value);
    // integrated hazard a (x0 t + t^2 / 2) inverted exactly
    const double e = rng.standard_exponential();
    return -inventory + std::sqrt(inventory * inventory + 2.0 * e / spec.value);
}

struct WorkloadAccum {
    std::vector<double> bin_time;
    double below = 0.0, above = 0.0;
    double time_neg = 0.0;
    double inv_integral = 0.0;
    double observed = 0.0;
    long clearings = 0;
    long arrivals = 0;
};

struct WorkloadStats {
    double phi_minus = 0.0;
    double mean_inventory = 0.0;
    double clearing_rate = 0.0;
};

// One replication of the two-sided workload process. X drops at unit rate,
// jumps by a service requirement at arrivals, and is reset to 0 from below
// at clearing epochs. Occupancy is integrated exactly over each linear
// segment.
WorkloadAccum run_workload_rep(double lambda, const ServiceDistribution& dist,
                               const ClearingSpec& clearing, const SimConfig& cfg,
                               std::uint64_t stream) {
    Rng rng(cfg.seed, stream);
    const double x_lo = -cfg.x_max_neg;
    const double width = cfg.bin_width;
    const int n_bins =
        static_cast<int>(std::ceil((cfg.x_max_pos - x_lo) / width - 1e-12));

    WorkloadAccum acc;
    acc.bin_time.assign(static_cast<size_t>(n_bins), 0.0);

    const auto record = [&](double t1, double t2, double x1) {
        double lo_t = std::max(t1, cfg.burn_in);
        if (t2 <= lo_t) return;
        const double x_start = x1 - (lo_t - t1);
        const double d = t2 - lo_t;
        acc.observed += d;
        const double x_end = x_start - d;
        // time below zero and the exact inventory integral
        const double pos_part = std::clamp(x_start, 0.0, d);
        const double r = d - pos_part;
        acc.time_neg += r;
        acc.inv_integral += 0.5 * r * r + r * std::max(-x_start, 0.0);
        // histogram: segment sweeps levels [x_end, x_start] at unit speed
        const double lo_x = x_end, hi_x = x_start;
        acc.below += std::max(0.0, std::min(hi_x, x_lo) - lo_x);
        acc.above += std::max(0.0, hi_x - std::max(lo_x, x_lo + n_bins * width));
        int b0 = static_cast<int>(std::floor((lo_x - x_lo) / width));
        int b1 = static_cast<int>(std::floor((hi_x - x_lo) / width));
        b0 = std::max(b0, 0);
        b1 = std::min(b1, n_bins - 1);
        for (int b = b0; b <= b1; ++b) {
            const double bl = x_lo + b * width, br = bl + width;
            const double overlap = std::min(hi_x, br) - std::max(lo_x, bl);
            if (overlap > 0.0) acc.bin_time[static_cast<size_t>(b)] += overlap;
        }
    };

    double t = 0.0, x = 0.0;
    double next_arrival = rng.exponential(lambda);
    const double t_end = cfg.time_total;
    while (t < t_end) {
        double t_event;
        int kind;  // 0 arrival, 1 drain-to-zero, 2 clearing, 3 end
        if (x > 0.0) {
            const double t_zero = t + x;
            t_event = std::min({next_arrival, t_zero, t_end});
            kind = (t_event == next_arrival) ? 0 : (t_event == t_zero ? 1 : 3);
        } else {
            const double t_clear = t + sample_clearing_time(clearing, -x, rng);
            t_event = std::min({next_arrival, t_clear, t_end});
            kind = (t_event == next_arrival) ? 0 : (t_event == t_clear ? 2 : 3);
        }
        record(t, t_event, x);
        x -= (t_event - t);
        t = t_event;
        switch (kind) {
            case 0:
                x += dist.sample(rng);
                ++acc.arrivals;
                next_arrival = t + rng.exponential(lambda);
                break;
            case 1:
                x = 0.0;
                break;
            case 2:
                x = 0.0;
                if (t > cfg.burn_in) ++acc.clearings;
                break;
            default:
                break;
        }
    }
    return acc;
}

}  // namespace

DensityEstimate simulate_workload(double lambda, const ServiceDistribution& dist,
                                  const ClearingSpec& clearing, const SimConfig& cfg) {
    if (lambda <= 0.0) throw ConfigError("arrival rate must be positive");
    if (!dist.samplable()) throw ConfigError("simulation needs a samplable distribution");
    if (clearing.value <= 0.0) throw ConfigError("clearing rate must be positive");
    if (cfg.replications < 1) throw ConfigError("at least one replication required");
    validate_common(cfg);
    if (lambda * dist.mean() >= 1.0) throw ConfigError("unstable system: rho >= 1");

    const int reps = cfg.replications;
    std::vector<WorkloadAccum> acc(static_cast<size_t>(reps));
    const int workers = effective_threads(cfg.threads, reps);
    std::vector<std::thread> pool;
    std::atomic<int> cursor{0};
    for (int wkr = 0; wkr < workers; ++wkr)
        pool.emplace_back([&]() {
            for (;;) {
                const int r = cursor.fetch_add(1);
                if (r >= reps) return;
                acc[static_cast<size_t>(r)] =
                    run_workload_rep(lambda, dist, clearing, cfg, static_cast<std::uint64_t>(r));
            }
        });
    for (auto& th : pool) th.join();

    DensityEstimate out;
    out.seed = cfg.seed;
    const size_t n_bins = acc[0].bin_time.size();
    const double x_lo = -cfg.x_max_neg;

    std::vector<WorkloadStats> stats(static_cast<size_t>(reps));
    for (int r = 0; r < reps; ++r) {
        const auto& a = acc[static_cast<size_t>(r)];
        stats[static_cast<size_t>(r)] = {a.time_neg / a.observed, a.inv_integral / a.observed,
                                         a.clearings / a.observed};
        out.observed_time += a.observed;
        out.n_arrivals += a.arrivals;
        out.n_clearings += a.clearings;
        out.below_range_mass += a.below;
        out.above_range_mass += a.above;
    }
    out.below_range_mass /= out.observed_time;
    out.above_range_mass /= out.observed_time;

    const auto mean_se = [&](auto pick) {
        double m = 0.0;
        for (const auto& s : stats) m += pick(s);
        m /= reps;
        double v = 0.0;
        for (const auto& s : stats) v += (pick(s) - m) * (pick(s) - m);
        const double se = reps > 1 ? std::sqrt(v / (reps - 1.0) / reps) : 0.0;
        return std::pair<double, double>{m, se};
    };
    std::tie(out.phi_minus_hat, out.phi_minus_se) =
        mean_se([](const WorkloadStats& s) { return s.phi_minus; });
    std::tie(out.mean_inventory_hat, out.mean_inventory_se) =
        mean_se([](const WorkloadStats& s) { return s.mean_inventory; });
    std::tie(out.clearing_rate_hat, out.clearing_rate_se) =
        mean_se([](const WorkloadStats& s) { return s.clearing_rate; });
    out.phi_plus_hat = 1.0 - out.phi_minus_hat;

    out.bins.resize(n_bins);
    for (size_t b = 0; b < n_bins; ++b) {
        double m = 0.0, v = 0.0;
        for (int r = 0; r < reps; ++r) {
            const auto& a = acc[static_cast<size_t>(r)];
            m += a.bin_time[b] / (a.observed * cfg.bin_width);
        }
        m /= reps;
        for (int r = 0; r < reps; ++r) {
            const auto& a = acc[static_cast<size_t>(r)];
            const double d = a.bin_time[b] / (a.observed * cfg.bin_width) - m;
            v += d * d;
        }
        out.bins[b].left = x_lo + static_cast<double>(b) * cfg.bin_width;
        out.bins[b].right = out.bins[b].left + cfg.bin_width;
        out.bins[b].density = m;
        out.bins[b].se = reps > 1 ? std::sqrt(v / (reps - 1.0) / reps) : 0.0;
    }
    return out;
}

// -------------------------------------------------------------- insurance ----

namespace {

struct PathResult {
    bool bankrupt = false;
    bool ever_negative = false;
};

PathResult run_path(double lambda, double c, const ClearingSpec& omega,
                    const ServiceDistribution& claims, double x0, double m_threshold,
                    const SimConfig& cfg, std::uint64_t stream) {
    Rng rng(cfg.seed, stream);
    PathResult res;
    double capital = x0;
    if (capital < 0.0) res.ever_negative = true;
    for (long step = 0; step < 100000000L; ++step) {
        if (capital >= m_threshold) return res;
        if (capital >= 0.0) {
            const double t_claim = rng.exponential(lambda);
            if (capital + c * t_claim >= m_threshold) return res;
            capital += c * t_claim - claims.sample(rng);
            if (capital < 0.0) res.ever_negative = true;
        } else {
            const double deficit = -capital;
            const double t_recover = deficit / c;
            double t_bank;
            if (omega.kind == ClearingSpec::Kind::constant) {
                t_bank = rng.exponential(omega.value);
            } else {
                // hazard a(deficit - c t) until recovery; invert its integral
                const double e = rng.standard_exponential();
                const double max_integral = omega.value * deficit * deficit / (2.0 * c);
                t_bank = (e >= max_integral)
                             ? num::kInf
                             : (deficit - std::sqrt(deficit * deficit -
                                                    2.0 * c * e / omega.value)) /
                                   c;
            }
            const double t_claim = rng.exponential(lambda);
            if (t_bank < t_claim && t_bank < t_recover) {
                res.bankrupt = true;
                return res;
            }
            if (t_claim < t_recover)
                capital += c * t_claim - claims.sample(rng);
            else
                capital = 0.0;
        }
    }
    throw NumericalError("surplus path exceeded the event budget");
}

}  // namespace

BankruptcyEstimate simulate_bankruptcy(double lambda, double c, const ClearingSpec& omega,
                                       const ServiceDistribution& claims, double x0,
                                       const SimConfig& cfg) {
    if (lambda <= 0.0 || c <= 0.0) throw ConfigError("rates must be positive");
    if (!claims.samplable()) throw ConfigError("simulation needs a samplable distribution");
    if (omega.value <= 0.0) throw ConfigError("bankruptcy rate must be positive");
    if (cfg.paths < 1) throw ConfigError("at least one path required");
    const double rho = lambda * claims.mean() / c;
    if (rho >= 1.0) throw ConfigError("unstable system: rho >= 1");
    if (cfg.eps_tail <= 0.0 || cfg.eps_tail >= 1.0)
        throw ConfigError("tail tolerance must lie in (0, 1)");

    double m = cfg.threshold_m;
    if (m <= 0.0) {
        // survival threshold from the Lundberg bound: ruin prob from m <= eps
        const double r = constant_omega::lundberg_coefficient(claims, lambda, c);
        m = -std::log(cfg.eps_tail) / r;
    }
    m = std::max(m, std::max(x0, 0.0) + 1.0);

    const long n = cfg.paths;
    const int workers = effective_threads(cfg.threads, static_cast<int>(std::min<long>(n, 1024)));
    std::vector<long> bankrupt_cnt(static_cast<size_t>(workers), 0);
    std::vector<long> negative_cnt(static_cast<size_t>(workers), 0);
    std::vector<std::thread> pool;
    for (int wkr = 0; wkr < workers; ++wkr)
        pool.emplace_back([&, wkr]() {
            long nb = 0, nn = 0;
            for (long i = wkr; i < n; i += workers) {
                const PathResult pr = run_path(lambda, c, omega, claims, x0, m, cfg,
                                               static_cast<std::uint64_t>(i));
                nb += pr.bankrupt ? 1 : 0;
                nn += pr.ever_negative ? 1 : 0;
            }
            bankrupt_cnt[static_cast<size_t>(wkr)] = nb;
            negative_cnt[static_cast<size_t>(wkr)] = nn;
        });
    for (auto& th : pool) th.join();

    BankruptcyEstimate out;
    out.seed = cfg.seed;
    out.n_paths = n;
    for (int wkr = 0; wkr < workers; ++wkr) {
        out.n_bankrupt += bankrupt_cnt[static_cast<size_t>(wkr)];
        out.n_ever_negative += negative_cnt[static_cast<size_t>(wkr)];
    }
    out.p_bankrupt = static_cast<double>(out.n_bankrupt) / static_cast<double>(n);
    out.se = std::sqrt(out.p_bankrupt * (1.0 - out.p_bankrupt) / static_cast<double>(n));
    out.p_ever_negative = static_cast<double>(out.n_ever_negative) / static_cast<double>(n);
    out.se_negative =
        std::sqrt(out.p_ever_negative * (1.0 - out.p_ever_negative) / static_cast<double>(n));
    out.eps_tail = cfg.eps_tail;
    out.threshold_m = m;
    return out;
}

}  // namespace wh::sim
