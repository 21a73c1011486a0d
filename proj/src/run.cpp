#include "whkernel/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>

#include "whkernel/constant_omega.hpp"
#include "whkernel/dist_json.hpp"
#include "whkernel/errors.hpp"
#include "whkernel/linear_omega.hpp"

namespace wh::cli {

using nlohmann::json;

namespace {

double checked(double v) {
    if (!std::isfinite(v)) throw NumericalError("refusing to write a non-finite value");
    return v;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", checked(v));
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file: " + path);
    os << content;
}

void write_json(const std::string& path, const json& j) {
    if (path.empty()) return;
    write_file(path, j.dump(2) + "\n");
}

void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
    if (path.empty()) return;
    std::string s;
    for (size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
    s += "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + fmt17(row[i]);
        s += "\n";
    }
    write_file(path, s);
}

ServiceDistribution resolve_dist(const RunConfig& cfg) {
    if (cfg.has_dist) return dist_from_json(cfg.dist_json);
    return ServiceDistribution(Exponential{cfg.mu});
}

sim::ClearingSpec resolve_clearing(const RunConfig& cfg) {
    if (cfg.omega_kind == "constant") return {sim::ClearingSpec::Kind::constant, cfg.omega};
    if (cfg.omega_kind == "linear") return {sim::ClearingSpec::Kind::linear, cfg.a};
    throw ConfigError("omega_kind must be \"constant\" or \"linear\"");
}

std::vector<double> grid_points(const GridSpec& g) {
    if (g.step <= 0.0) throw ConfigError("grid step must be positive");
    if (g.max < g.min) throw ConfigError("grid max must be >= min");
    std::vector<double> xs;
    for (double x = g.min; x <= g.max + 1e-12 * g.step; x += g.step) xs.push_back(x);
    return xs;
}

// mean of f over [lo, hi] by 5-point Gauss-Legendre
double bin_average(const std::function<double(double)>& f, double lo, double hi) {
    static const double gx[3] = {0.0, 0.5384693101056831, 0.9061798459386640};
    static const double gw[3] = {0.5688888888888889, 0.4786286704993665, 0.2369268850561891};
    const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
    double acc = gw[0] * f(mid);
    for (int j = 1; j < 3; ++j) acc += gw[j] * (f(mid + rad * gx[j]) + f(mid - rad * gx[j]));
    return 0.5 * acc;
}

// ------------------------------------------------------------- commands ----

int run_solve_queue_const(const RunConfig& cfg) {
    const auto sol = constant_omega::solve_queue(cfg.lambda, cfg.omega, resolve_dist(cfg));
    json summary = {{"lambda", sol.lambda},       {"omega", sol.omega},
                    {"rho", sol.rho},             {"delta", sol.delta},
                    {"A_or_Z", sol.a_const},      {"phi_minus_0", checked(sol.phi_minus0())},
                    {"phi_plus_0", checked(sol.phi_plus0())}};
    write_json(cfg.out.summary, summary);
    if (!cfg.out.table_minus.empty() || !cfg.out.table_plus.empty()) {
        const auto xs = grid_points(cfg.grid);
        std::vector<std::vector<double>> rows_m, rows_p;
        for (double x : xs) {
            rows_m.push_back({x, sol.v_minus(x)});
            rows_p.push_back({x, sol.v_plus(x)});
        }
        write_table(cfg.out.table_minus, {"x", "value"}, rows_m);
        write_table(cfg.out.table_plus, {"x", "value"}, rows_p);
    }
    return kExitOk;
}

int run_solve_ins_const(const RunConfig& cfg) {
    const auto sol =
        constant_omega::solve_insurance(cfg.lambda, cfg.c, cfg.omega, resolve_dist(cfg));
    json summary = {{"lambda", sol.lambda},
                    {"omega", sol.omega},
                    {"c", sol.c},
                    {"rho", sol.rho},
                    {"delta", sol.delta},
                    {"A_or_Z", sol.z_const},
                    {"phi_minus_0", checked(sol.u_minus(0.0))},
                    {"phi_plus_0", checked(sol.u_plus0())}};
    write_json(cfg.out.summary, summary);
    if (!cfg.out.table_minus.empty() || !cfg.out.table_plus.empty()) {
        const auto xs = grid_points(cfg.grid);
        std::vector<std::vector<double>> rows_m, rows_p;
        for (double x : xs) {
            rows_m.push_back({x, sol.u_tilde_minus(x)});
            rows_p.push_back({x, sol.u_plus(x)});
        }
        write_table(cfg.out.table_minus, {"x", "value"}, rows_m);
        write_table(cfg.out.table_plus, {"x", "value"}, rows_p);
    }
    return kExitOk;
}

int run_solve_linear(const RunConfig& cfg) {
    const auto model = linear_omega::classify(cfg.lambda, cfg.mu, cfg.a);
    const auto sol = linear_omega::series_solve(model);
    const auto direct = linear_omega::direct_solve(model);
    json summary = {{"lambda", model.lambda},
                    {"mu", model.mu},
                    {"a", model.a},
                    {"sigma", model.sigma},
                    {"K", model.K},
                    {"c", sol.c},
                    {"r1", checked(sol.r1)},
                    {"EI", checked(sol.mean_inventory)},
                    {"route", model.integer_sigma
                                  ? "hermite"
                                  : linear_omega::DirectSolution::route_name(direct.route)},
                    {"r1_direct", checked(direct.r1())},
                    {"phi_minus_0", checked(sol.phi_minus0())}};
    if (!sol.warnings.empty()) summary["warnings"] = sol.warnings;
    write_json(cfg.out.summary, summary);
    if (!cfg.out.table.empty()) {
        const auto xs = grid_points(cfg.grid);
        std::vector<std::vector<double>> rows;
        for (double x : xs) {
            const double vm =
                model.integer_sigma ? sol.v_minus_integer(x) : direct.v_minus(x);
            rows.push_back({x, vm, sol.v_plus(x)});
        }
        write_table(cfg.out.table, {"x", "v_minus", "v_plus"}, rows);
    }
    return kExitOk;
}

json histogram_summary(const sim::DensityEstimate& est) {
    return {{"phi_minus_hat", est.phi_minus_hat},
            {"phi_minus_se", est.phi_minus_se},
            {"phi_plus_hat", est.phi_plus_hat},
            {"mean_inventory_hat", est.mean_inventory_hat},
            {"mean_inventory_se", est.mean_inventory_se},
            {"clearing_rate_hat", est.clearing_rate_hat},
            {"clearing_rate_se", est.clearing_rate_se},
            {"below_range_mass", est.below_range_mass},
            {"above_range_mass", est.above_range_mass},
            {"observed_time", est.observed_time},
            {"n_arrivals", est.n_arrivals},
            {"n_clearings", est.n_clearings},
            {"seed", est.seed}};
}

int run_simulate_queue(const RunConfig& cfg) {
    const auto dist = resolve_dist(cfg);
    const auto est = sim::simulate_workload(cfg.lambda, dist, resolve_clearing(cfg), cfg.simcfg);
    write_json(cfg.out.summary, histogram_summary(est));
    if (!cfg.out.histogram.empty()) {
        std::vector<std::vector<double>> rows;
        for (const auto& b : est.bins) rows.push_back({b.left, b.right, b.density, b.se});
        write_table(cfg.out.histogram, {"bin_left", "bin_right", "density", "stderr"}, rows);
    }
    return kExitOk;
}

int run_simulate_ins(const RunConfig& cfg) {
    const auto dist = resolve_dist(cfg);
    const auto est = sim::simulate_bankruptcy(cfg.lambda, cfg.c, resolve_clearing(cfg), dist,
                                              cfg.x0, cfg.simcfg);
    json summary = {{"p_bankrupt", est.p_bankrupt},
                    {"se", est.se},
                    {"p_ever_negative", est.p_ever_negative},
                    {"se_negative", est.se_negative},
                    {"eps_tail", est.eps_tail},
                    {"threshold_m", est.threshold_m},
                    {"n_paths", est.n_paths},
                    {"n_bankrupt", est.n_bankrupt},
                    {"n_ever_negative", est.n_ever_negative},
                    {"x0", cfg.x0},
                    {"seed", est.seed}};
    write_json(cfg.out.summary, summary);
    return kExitOk;
}

int run_compare(const RunConfig& cfg) {
    const auto dist = resolve_dist(cfg);
    const auto clearing = resolve_clearing(cfg);

    std::function<double(double)> v_minus, v_plus;  // densities on the level axis
    double mass_plus = 0.0;                         // total workload-side mass
    if (cfg.compare_model == "queue-const") {
        if (clearing.kind != sim::ClearingSpec::Kind::constant)
            throw ConfigError("queue-const comparison needs omega_kind=constant");
        auto sol = constant_omega::solve_queue(cfg.lambda, cfg.omega, dist);
        auto shared = std::make_shared<constant_omega::QueueSolution>(std::move(sol));
        v_minus = [shared](double y) { return shared->v_minus(y); };
        v_plus = [shared](double y) { return shared->v_plus(y); };
        mass_plus = shared->phi_plus0();
    } else if (cfg.compare_model == "linear") {
        if (clearing.kind != sim::ClearingSpec::Kind::linear)
            throw ConfigError("linear comparison needs omega_kind=linear");
        const auto model = linear_omega::classify(cfg.lambda, cfg.mu, cfg.a);
        if (model.integer_sigma) {
            auto shared =
                std::make_shared<linear_omega::SeriesSolution>(linear_omega::series_solve(model));
            v_minus = [shared](double y) { return shared->v_minus_integer(y); };
            v_plus = [shared](double y) { return shared->v_plus(y); };
            mass_plus = shared->phi_plus0();
        } else {
            auto shared =
                std::make_shared<linear_omega::DirectSolution>(linear_omega::direct_solve(model));
            v_minus = [shared](double y) { return shared->v_minus(y); };
            v_plus = [shared](double y) { return shared->v_plus(y); };
            mass_plus = shared->r1() / (model.mu - model.lambda);
        }
    } else {
        throw ConfigError("compare model must be \"queue-const\" or \"linear\"");
    }

    // bin edges must land on 0 and on the range ends for the table alignment
    const auto near_multiple = [&](double v) {
        const double r = v / cfg.simcfg.bin_width;
        return std::fabs(r - std::round(r)) < 1e-9;
    };
    if (!near_multiple(cfg.simcfg.x_max_neg) || !near_multiple(cfg.simcfg.x_max_pos))
        throw ConfigError("compare needs histogram ranges that are multiples of the bin width");

    const auto est = sim::simulate_workload(cfg.lambda, dist, clearing, cfg.simcfg);

    // The workload-side density may come from contour inversion, so it is
    // tabulated once on a half-bin grid: bin averages use Simpson on the
    // table and the beyond-range mass is the total minus the table integral.
    const double half_step = 0.5 * cfg.simcfg.bin_width;
    const int n_half = static_cast<int>(std::round(cfg.simcfg.x_max_pos / half_step));
    std::vector<double> vp(static_cast<size_t>(n_half) + 1);
    for (int i = 0; i <= n_half; ++i) vp[static_cast<size_t>(i)] = v_plus(i * half_step);
    double covered_plus = 0.0;
    for (int i = 0; i + 2 <= n_half; i += 2)
        covered_plus += half_step / 3.0 *
                        (vp[static_cast<size_t>(i)] + 4.0 * vp[static_cast<size_t>(i) + 1] +
                         vp[static_cast<size_t>(i) + 2]);

    const auto neg_side = [&](double x) { return v_minus(-x); };
    std::vector<std::vector<double>> rows;
    double l1 = 0.0, max_z = 0.0;
    int plus_bin = 0;
    for (const auto& b : est.bins) {
        double ana;
        if (b.right <= 1e-9) {
            ana = bin_average(neg_side, b.left, b.right);
        } else {
            const size_t i = 2 * static_cast<size_t>(plus_bin++);
            ana = (vp[i] + 4.0 * vp[i + 1] + vp[i + 2]) / 6.0;
        }
        const double diff = std::fabs(ana - b.density);
        l1 += diff * (b.right - b.left);
        if (b.se > 0.0) max_z = std::max(max_z, diff / b.se);
        rows.push_back({0.5 * (b.left + b.right), ana, b.density, b.se, diff});
    }
    // out-of-range mass mismatch counts toward the distance
    const double ana_below = num::integrate_semi_infinite(v_minus, cfg.simcfg.x_max_neg, 1e-10);
    const double ana_above = mass_plus - covered_plus;
    l1 += std::fabs(ana_below - est.below_range_mass) + std::fabs(ana_above - est.above_range_mass);

    write_table(cfg.out.table, {"x", "analytic", "simulated", "stderr", "abs_diff"}, rows);
    const bool pass = l1 <= cfg.l1_threshold;
    json verdict = {{"l1_distance", checked(l1)},
                    {"max_z_score", checked(max_z)},
                    {"l1_threshold", cfg.l1_threshold},
                    {"pass", pass}};
    write_json(cfg.out.verdict, verdict);
    write_json(cfg.out.summary, histogram_summary(est));
    return pass ? kExitOk : kExitVerdict;
}

}  // namespace

// --------------------------------------------------------------- config ----

json RunConfig::to_json() const {
    json j = {{"command", command},
              {"lambda", lambda},
              {"omega", omega},
              {"c", c},
              {"a", a},
              {"mu", mu},
              {"x0", x0},
              {"omega_kind", omega_kind},
              {"compare_model", compare_model},
              {"l1_threshold", l1_threshold},
              {"grid", {{"min", grid.min}, {"max", grid.max}, {"step", grid.step}}},
              {"sim",
               {{"seed", simcfg.seed},
                {"replications", simcfg.replications},
                {"time_total", simcfg.time_total},
                {"burn_in", simcfg.burn_in},
                {"bin_width", simcfg.bin_width},
                {"x_max_neg", simcfg.x_max_neg},
                {"x_max_pos", simcfg.x_max_pos},
                {"paths", simcfg.paths},
                {"threshold_m", simcfg.threshold_m},
                {"eps_tail", simcfg.eps_tail},
                {"threads", simcfg.threads}}},
              {"outputs",
               {{"summary", out.summary},
                {"table", out.table},
                {"table_minus", out.table_minus},
                {"table_plus", out.table_plus},
                {"histogram", out.histogram},
                {"verdict", out.verdict}}}};
    if (has_dist) j["dist"] = dist_json;
    return j;
}

std::vector<std::string> RunConfig::apply_json(const json& j) {
    std::vector<std::string> applied;
    const auto take = [&](const char* key, auto& target) {
        if (j.contains(key)) {
            j.at(key).get_to(target);
            applied.push_back(key);
        }
    };
    take("command", command);
    take("lambda", lambda);
    take("omega", omega);
    take("c", c);
    take("a", a);
    take("mu", mu);
    take("x0", x0);
    take("omega_kind", omega_kind);
    take("compare_model", compare_model);
    take("l1_threshold", l1_threshold);
    if (j.contains("dist")) {
        dist_json = j.at("dist");
        has_dist = true;
        applied.push_back("dist");
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (g.contains("min")) g.at("min").get_to(grid.min);
        if (g.contains("max")) g.at("max").get_to(grid.max);
        if (g.contains("step")) g.at("step").get_to(grid.step);
        applied.push_back("grid");
    }
    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        const auto tk = [&](const char* key, auto& target) {
            if (s.contains(key)) s.at(key).get_to(target);
        };
        tk("seed", simcfg.seed);
        tk("replications", simcfg.replications);
        tk("time_total", simcfg.time_total);
        tk("burn_in", simcfg.burn_in);
        tk("bin_width", simcfg.bin_width);
        tk("x_max_neg", simcfg.x_max_neg);
        tk("x_max_pos", simcfg.x_max_pos);
        tk("paths", simcfg.paths);
        tk("threshold_m", simcfg.threshold_m);
        tk("eps_tail", simcfg.eps_tail);
        tk("threads", simcfg.threads);
        applied.push_back("sim");
    }
    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        const auto tk = [&](const char* key, std::string& target) {
            if (o.contains(key)) o.at(key).get_to(target);
        };
        tk("summary", out.summary);
        tk("table", out.table);
        tk("table_minus", out.table_minus);
        tk("table_plus", out.table_plus);
        tk("histogram", out.histogram);
        tk("verdict", out.verdict);
        applied.push_back("outputs");
    }
    return applied;
}

void RunConfig::validate() const {
    static const char* known[] = {"solve-queue-const", "solve-ins-const", "solve-linear",
                                  "simulate-queue",    "simulate-ins",    "compare"};
    bool ok = false;
    for (const char* k : known) ok = ok || command == k;
    if (!ok) throw ConfigError("unknown command: " + command);
    if (grid.step <= 0.0) throw ConfigError("grid step must be positive");
    if (command == "compare" && compare_model != "queue-const" && compare_model != "linear")
        throw ConfigError("compare model must be \"queue-const\" or \"linear\"");
    if (omega_kind != "constant" && omega_kind != "linear")
        throw ConfigError("omega_kind must be \"constant\" or \"linear\"");
}

int run(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.command == "solve-queue-const") return run_solve_queue_const(cfg);
    if (cfg.command == "solve-ins-const") return run_solve_ins_const(cfg);
    if (cfg.command == "solve-linear") return run_solve_linear(cfg);
    if (cfg.command == "simulate-queue") return run_simulate_queue(cfg);
    if (cfg.command == "simulate-ins") return run_simulate_ins(cfg);
    if (cfg.command == "compare") return run_compare(cfg);
    throw ConfigError("unknown command: " + cfg.command);
}

}  // namespace wh::cli
