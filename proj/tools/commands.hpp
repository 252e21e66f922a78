#pragma once

#include "lplab/model.hpp"
#include "lplab/population.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lplab::cli {

// Exit codes
inline constexpr int kOk = 0, kConfigError = 1, kUsageError = 2, kVerifyFailed = 3;

// Shared model options: a run config, a params file, or explicit values.
struct ModelOptions {
    std::string config;
    std::string params_file;
    std::optional<double> phi1, phi2, gamma, sigma;
};

struct SimulateOptions {
    ModelOptions model;
    std::string qvar_params;
    long long T = 10000;
    int burn_in = 1000;
    std::uint64_t seed = 1;
    std::string out = "path.csv";
};

struct IrfOptions {
    ModelOptions model;
    std::vector<double> s{-2.0, 0.0, 2.0};
    std::vector<double> delta{1.0};
    std::vector<std::string> specs{"Linear", "AsymLP", "LagLP", "Feas", "Infeas"};
    std::vector<double> z;  // conditioning values for LagLP/Feas (y) and Infeas (s)
    int H = 10;
    std::string out;
};

struct DistanceOptions {
    std::string config;
    std::string out_dir;
    std::vector<std::uint64_t> seeds;  // overrides the config
    bool estimated = false;
};

struct LossOptions {
    ModelOptions model;
    std::vector<std::string> specs{"Linear", "AsymLP", "LagLP", "Feas"};
    std::string kind = "shock";
    std::vector<double> points;
    int H = 10;
    std::size_t xi_draws = 100000;
    std::uint64_t seed = 1;
    std::string out = "loss.csv";
};

struct EstimateOptions {
    std::string data;
    std::string design;
    std::string out_dir = ".";
};

struct EmpiricalOptions {
    std::string config;
    std::string data;
    std::string out_dir = ".";
};

struct VerifyOptions {
    std::size_t draws = 200000;
    std::uint64_t seed = 1;
};

// Each command returns an exit code and prints a one-line summary.
int run_simulate(const SimulateOptions& o, const std::string& argv_echo);
int run_true_irf(const IrfOptions& o, const std::string& argv_echo);
int run_pop_irf(const IrfOptions& o, const std::string& argv_echo);
int run_distance(const DistanceOptions& o, const std::string& argv_echo);
int run_analytic_loss(const LossOptions& o, const std::string& argv_echo);
int run_estimate(const EstimateOptions& o, const std::string& argv_echo);
int run_empirical_cmd(const EmpiricalOptions& o, const std::string& argv_echo);
int run_verify(const VerifyOptions& o);

QarParams resolve_params(const ModelOptions& m);
std::string provenance(const std::string& argv_echo, const std::string& extra = "");

}  // namespace lplab::cli
