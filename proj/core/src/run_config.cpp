#include "lplab/run_config.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace lplab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw Error("run config: field '" + field + "' " + what);
}

std::vector<double> numbers(const json& j, const std::string& field) {
    if (!j.is_array()) bad(field, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) bad(field, "must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

long long integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) bad(field, "must be an integer");
    return j.get<long long>();
}

std::string resolve(const std::string& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? p : (fs::path(base) / path).lexically_normal().string();
}

void check_edges(const std::vector<double>& e, const std::string& field) {
    if (e.empty()) return;
    if (e.size() < 2) bad(field, "needs at least two edges");
    for (std::size_t k = 1; k < e.size(); ++k)
        if (!(e[k] > e[k - 1])) bad(field, "must be strictly increasing");
}

}  // namespace

RunConfig run_config_from_json(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("run config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error("run config: top level must be an object");

    RunConfig c;
    if (j.contains("params") && j.contains("params_file"))
        throw Error("run config: give either 'params' or 'params_file', not both");
    if (j.contains("params")) {
        try {
            c.params = qar_params_from_json(j.at("params").dump());
        } catch (const Error& e) {
            bad("params", std::string("is invalid: ") + e.what());
        }
    } else if (j.contains("params_file")) {
        const std::string p = resolve(base_dir, j.at("params_file").get<std::string>());
        if (!fs::exists(p)) bad("params_file", "points to a missing file '" + p + "'");
        c.params = load_qar_params(p);
    } else {
        throw Error("run config: missing field 'params' (or 'params_file')");
    }

    if (j.contains("T")) c.T = integer(j.at("T"), "T");
    if (c.T < 2) bad("T", "must be at least 2");
    if (j.contains("burn_in")) c.burn_in = static_cast<int>(integer(j.at("burn_in"), "burn_in"));
    if (c.burn_in < 0) bad("burn_in", "must be non-negative");
    if (j.contains("seeds")) {
        if (!j.at("seeds").is_array()) bad("seeds", "must be an array of integers");
        c.seeds.clear();
        for (const auto& s : j.at("seeds")) {
            if (!s.is_number_unsigned()) bad("seeds", "must hold non-negative integers");
            c.seeds.push_back(s.get<std::uint64_t>());
        }
        if (c.seeds.empty()) bad("seeds", "must not be empty");
    } else if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) bad("seed", "must be a non-negative integer");
        c.seeds = {j.at("seed").get<std::uint64_t>()};
    }
    if (j.contains("H")) c.H = static_cast<int>(integer(j.at("H"), "H"));
    if (c.H < 0) bad("H", "must be non-negative");
    if (j.contains("specs")) {
        c.specs.clear();
        if (!j.at("specs").is_array()) bad("specs", "must be an array of names");
        for (const auto& s : j.at("specs")) {
            if (!s.is_string()) bad("specs", "must be an array of names");
            try {
                c.specs.push_back(parse_spec(s.get<std::string>()));
            } catch (const Error& e) {
                bad("specs", e.what());
            }
        }
    }
    if (j.contains("bins")) {
        const json& b = j.at("bins");
        if (!b.is_object()) bad("bins", "must be an object");
        if (b.contains("count")) c.bin_count = static_cast<int>(integer(b.at("count"), "bins.count"));
        if (c.bin_count < 1) bad("bins.count", "must be positive");
        if (b.contains("s_edges")) c.s_edges = numbers(b.at("s_edges"), "bins.s_edges");
        if (b.contains("u_edges")) c.u_edges = numbers(b.at("u_edges"), "bins.u_edges");
        check_edges(c.s_edges, "bins.s_edges");
        check_edges(c.u_edges, "bins.u_edges");
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (g.contains("s")) c.s_grid = numbers(g.at("s"), "grid.s");
        if (g.contains("delta")) c.delta_grid = numbers(g.at("delta"), "grid.delta");
    }
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("run config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const fs::path parent = fs::path(path).parent_path();
    return run_config_from_json(ss.str(), parent.empty() ? "." : parent.string());
}

std::string RunConfig::to_json() const {
    json j;
    j["params"] = json::parse(qar_params_to_json(params));
    j["T"] = T;
    j["burn_in"] = burn_in;
    j["seeds"] = seeds;
    j["H"] = H;
    j["specs"] = json::array();
    for (SpecKind k : specs) j["specs"].push_back(to_string(k));
    j["bins"] = {{"count", bin_count}};
    if (!s_edges.empty()) j["bins"]["s_edges"] = s_edges;
    if (!u_edges.empty()) j["bins"]["u_edges"] = u_edges;
    j["grid"] = {{"s", s_grid}, {"delta", delta_grid}};
    j["output_dir"] = output_dir;
    return j.dump(2);
}

}  // namespace lplab
