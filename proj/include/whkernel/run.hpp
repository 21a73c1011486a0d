#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "whkernel/simulate.hpp"

namespace wh::cli {

// Exit codes shared by the CLI and its tests.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitVerdict = 4;

struct GridSpec {
    double min = 0.0;
    double max = 5.0;
    double step = 0.05;
};

struct OutputSpec {
    std::string summary;
    std::string table;        // linear solve: x, v_minus, v_plus
    std::string table_minus;  // constant solve: x, value
    std::string table_plus;
    std::string histogram;  // simulate: bin_left, bin_right, density, stderr
    std::string verdict;    // compare: {l1_distance, max_z_score, pass}
};

struct RunConfig {
    std::string command;
    double lambda = 1.0;
    double omega = 2.0;
    double c = 1.0;
    double a = 1.0;
    double mu = 2.0;
    double x0 = 0.0;
    bool has_dist = false;
    nlohmann::json dist_json;
    std::string omega_kind = "constant";  // simulate/compare: constant | linear
    std::string compare_model = "queue-const";
    GridSpec grid;
    sim::SimConfig simcfg;
    OutputSpec out;
    double l1_threshold = 0.03;

    nlohmann::json to_json() const;
    // Applies every field present in j on top of *this; returns the names of
    // the applied fields (the CLI warns when they collide with flags).
    std::vector<std::string> apply_json(const nlohmann::json& j);
    void validate() const;
};

// Executes the config; returns an exit code (0 or kExitVerdict). Throws
// ConfigError / NumericalError for the other failure classes.
int run(const RunConfig& cfg);

}  // namespace wh::cli
