#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"
#include "whkernel/errors.hpp"
#include "whkernel/run.hpp"

namespace {

using wh::cli::RunConfig;

void emit_error(const char* kind, const std::string& msg) {
    nlohmann::json j = {{"error", kind}, {"message", msg}};
    std::cerr << j.dump() << "\n";
}

// Registers the full flag set on a subcommand; flags mirror the JSON config
// one-to-one. `tracked` maps config keys to options so that a JSON override
// of an explicitly given flag can be reported.
void add_options(CLI::App* sub, RunConfig& cfg, std::string& dist_inline,
                 std::map<std::string, std::vector<CLI::Option*>>& tracked) {
    tracked["lambda"].push_back(sub->add_option("--lambda", cfg.lambda, "arrival/claim rate"));
    tracked["omega"].push_back(sub->add_option("--omega", cfg.omega, "constant clearing/bankruptcy rate"));
    tracked["c"].push_back(sub->add_option("--c", cfg.c, "premium rate"));
    tracked["a"].push_back(sub->add_option("--a", cfg.a, "slope of the linear rate"));
    tracked["mu"].push_back(sub->add_option("--mu", cfg.mu, "exponential service/claim rate"));
    tracked["x0"].push_back(sub->add_option("--x0", cfg.x0, "initial surplus"));
    tracked["dist"].push_back(sub->add_option("--dist", dist_inline, "distribution spec as inline JSON"));
    tracked["omega_kind"].push_back(sub->add_option("--omega-kind", cfg.omega_kind, "constant | linear"));
    tracked["compare_model"].push_back(sub->add_option("--model", cfg.compare_model, "queue-const | linear"));
    tracked["l1_threshold"].push_back(sub->add_option("--l1-threshold", cfg.l1_threshold, "comparison verdict bound"));
    tracked["grid"].push_back(sub->add_option("--grid-min", cfg.grid.min, "table grid start"));
    sub->add_option("--grid-max", cfg.grid.max, "table grid end");
    sub->add_option("--grid-step", cfg.grid.step, "table grid step");
    tracked["sim"].push_back(sub->add_option("--seed", cfg.simcfg.seed, "master seed"));
    sub->add_option("--replications", cfg.simcfg.replications, "independent replications");
    sub->add_option("--time-total", cfg.simcfg.time_total, "simulated time per replication");
    sub->add_option("--burn-in", cfg.simcfg.burn_in, "warm-up time discarded");
    sub->add_option("--bin-width", cfg.simcfg.bin_width, "histogram bin width");
    sub->add_option("--x-max-neg", cfg.simcfg.x_max_neg, "histogram reach below 0");
    sub->add_option("--x-max-pos", cfg.simcfg.x_max_pos, "histogram reach above 0");
    sub->add_option("--paths", cfg.simcfg.paths, "surplus paths");
    sub->add_option("--threshold-m", cfg.simcfg.threshold_m,
                    "survival threshold (0 = Lundberg bound)");
    sub->add_option("--eps-tail", cfg.simcfg.eps_tail, "threshold truncation budget");
    sub->add_option("--threads", cfg.simcfg.threads, "worker cap (0 = hardware)");
    tracked["outputs"].push_back(sub->add_option("--summary", cfg.out.summary, "summary JSON path"));
    sub->add_option("--table", cfg.out.table, "joint CSV table path");
    sub->add_option("--table-minus", cfg.out.table_minus, "inventory/negative-side CSV path");
    sub->add_option("--table-plus", cfg.out.table_plus, "workload/positive-side CSV path");
    sub->add_option("--histogram", cfg.out.histogram, "simulated histogram CSV path");
    sub->add_option("--verdict", cfg.out.verdict, "comparison verdict JSON path");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state workload/inventory and bankruptcy solver"};
    app.require_subcommand(0, 1);

    RunConfig cfg;
    std::string dist_inline, config_path;
    bool dump = false;
    std::map<std::string, std::vector<CLI::Option*>> tracked;

    app.add_option("--config", config_path, "run configuration JSON (wins over flags)");
    app.add_flag("--dump-config", dump, "print the effective config and exit");

    const char* commands[] = {"solve-queue-const", "solve-ins-const", "solve-linear",
                              "simulate-queue",    "simulate-ins",    "compare"};
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->fallthrough();  // --config / --dump-config live on the parent
        add_options(sub, cfg, dist_inline, tracked);
        sub->callback([&cfg, name]() { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return wh::cli::kExitConfig;
    }

    try {
        if (!dist_inline.empty()) {
            cfg.dist_json = nlohmann::json::parse(dist_inline);
            cfg.has_dist = true;
        }
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw wh::ConfigError("cannot read config file: " + config_path);
            nlohmann::json j = nlohmann::json::parse(is);
            const auto applied = cfg.apply_json(j);
            for (const auto& key : applied) {
                const auto it = tracked.find(key);
                if (it == tracked.end()) continue;
                for (const CLI::Option* opt : it->second)
                    if (opt->count() > 0) {
                        std::cerr << "warning: config file overrides " << opt->get_name()
                                  << "\n";
                        break;
                    }
            }
        }
        if (cfg.command.empty() && !dump)
            throw wh::ConfigError("a command is required (see --help)");
        if (dump) {
            std::cout << cfg.to_json().dump(2) << "\n";
            return wh::cli::kExitOk;
        }
        return wh::cli::run(cfg);
    } catch (const wh::ConfigError& e) {
        emit_error("config", e.what());
        return wh::cli::kExitConfig;
    } catch (const wh::NumericalError& e) {
        emit_error("numerical", e.what());
        return wh::cli::kExitNumerical;
    } catch (const nlohmann::json::exception& e) {
        emit_error("config", e.what());
        return wh::cli::kExitConfig;
    } catch (const std::exception& e) {
        emit_error("numerical", e.what());
        return wh::cli::kExitNumerical;
    }
}
