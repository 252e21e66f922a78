#pragma once

#include "lplab/model.hpp"
#include "lplab/population.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lplab {

// Simulation experiment settings shared by the command-line recipes and the
// acceptance harness.
//
//   {"params": {...} | "params_file": "qar.json", "T": 10000, "burn_in": 1000,
//    "seeds": [1, 2] | "seed": 1, "H": 10, "specs": ["Linear", ...],
//    "bins": {"count": 12, "s_edges": [...], "u_edges": [...]},
//    "grid": {"s": [...], "delta": [...]}, "output_dir": "out"}
//
// params_file and output_dir are resolved against the config's directory.
struct RunConfig {
    QarParams params;
    long long T = 10000;
    int burn_in = 1000;
    std::vector<std::uint64_t> seeds{1};
    int H = 10;
    std::vector<SpecKind> specs{SpecKind::Linear, SpecKind::AsymLP, SpecKind::LagLP, SpecKind::Feas};
    int bin_count = 12;
    std::vector<double> s_edges, u_edges;  // empty: equal-probability bins
    std::vector<double> s_grid{-2.0, 0.0, 2.0};
    std::vector<double> delta_grid{1.0};
    std::string output_dir = ".";

    std::string to_json() const;
};

RunConfig run_config_from_json(const std::string& text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

}  // namespace lplab
