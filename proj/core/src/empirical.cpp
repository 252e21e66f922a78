#include "lplab/empirical.hpp"

#include "lplab/csv.hpp"
#include "lplab/estimate.hpp"

#include <Eigen/Sparse>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace lplab {

using nlohmann::json;

YearMonth YearMonth::parse(const std::string& text) {
    int y = 0, m = 0;
    if (text.size() != 7 || text[4] != '-') throw Error("date '" + text + "' is not YYYY-MM");
    auto r1 = std::from_chars(text.data(), text.data() + 4, y);
    auto r2 = std::from_chars(text.data() + 5, text.data() + 7, m);
    if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != text.data() + 4 ||
        r2.ptr != text.data() + 7 || m < 1 || m > 12)
        throw Error("date '" + text + "' is not YYYY-MM");
    return {y, m};
}

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

Transform parse_transform(const std::string& name) {
    if (name == "level") return Transform::Level;
    if (name == "log") return Transform::Log;
    if (name == "log-cycle") return Transform::LogCycle;
    throw Error("unknown transform '" + name + "' (expected level, log or log-cycle)");
}

std::string to_string(Transform t) {
    switch (t) {
        case Transform::Level: return "level";
        case Transform::Log: return "log";
        case Transform::LogCycle: return "log-cycle";
    }
    return "?";
}

LoadedData load_csv(const std::string& path, const std::map<std::string, std::string>& roles,
                    std::optional<YearMonth> start, std::optional<YearMonth> end) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string line;
    std::vector<std::string> header;
    long long row = 0;
    while (header.empty() && std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        header = split_csv_line(line);
    }
    if (header.empty()) throw Error(path + ": missing header row");
    if (header[0] != "date") throw Error(path + ": first column must be 'date'");

    std::map<std::string, std::size_t> pos;
    for (const auto& [name, role] : roles) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw Error(path + ": declared " + role + " column '" + name + "' not found");
        pos[name] = static_cast<std::size_t>(it - header.begin());
    }

    LoadedData out;
    std::map<std::string, std::vector<double>> vals;
    std::optional<YearMonth> prev;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw Error(path + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                        " fields, expected " + std::to_string(header.size()));
        YearMonth date;
        try {
            date = YearMonth::parse(cells[0]);
        } catch (const Error& e) {
            throw Error(path + ": row " + std::to_string(row) + ": " + e.what());
        }
        if (prev) {
            if (date.index() == prev->index())
                throw Error(path + ": row " + std::to_string(row) + ": duplicate date " + date.str());
            if (date.index() < prev->index())
                throw Error(path + ": row " + std::to_string(row) + ": date " + date.str() +
                            " is out of order");
            if (date.index() != prev->index() + 1)
                throw Error(path + ": row " + std::to_string(row) + ": gap, missing month " +
                            YearMonth::from_index(prev->index() + 1).str());
        }
        prev = date;
        if (start && date < *start) {
            ++out.dropped_before;
            continue;
        }
        if (end && date > *end) {
            ++out.dropped_after;
            continue;
        }
        out.dates.push_back(date);
        for (const auto& [name, idx] : pos) {
            const std::string& c = cells[idx];
            double v = 0.0;
            auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (c.empty() || ec != std::errc() || p != c.data() + c.size() || !std::isfinite(v))
                throw Error(path + ": row " + std::to_string(row) + ": column '" + name +
                            "' has unparsable or missing value '" + c + "'");
            vals[name].push_back(v);
        }
    }
    if (out.dates.empty()) throw Error(path + ": no rows inside the sample window");
    for (const auto& [name, v] : vals) {
        MonthlySeries s;
        s.name = name;
        s.dates = out.dates;
        s.values = Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
        out.series[name] = std::move(s);
    }
    return out;
}

TrendCycle hp_filter(const VectorXd& x, double lambda) {
    const Eigen::Index n = x.size();
    if (n < 4) throw Error("HP filter: series needs at least 4 observations");
    if (!(lambda > 0.0)) throw Error("HP filter: lambda must be positive");

    // A = I + lambda D'D, symmetric pentadiagonal.
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::SparseMatrix<double> d(n - 2, n);
    for (Eigen::Index r = 0; r < n - 2; ++r) {
        trip.emplace_back(r, r, 1.0);
        trip.emplace_back(r, r + 1, -2.0);
        trip.emplace_back(r, r + 2, 1.0);
    }
    d.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseMatrix<double> eye(n, n);
    eye.setIdentity();
    const Eigen::SparseMatrix<double> a = eye + lambda * Eigen::SparseMatrix<double>(d.transpose() * d);

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt(a);
    if (ldlt.info() != Eigen::Success) throw Error("HP filter: factorization failed");
    TrendCycle tc;
    tc.trend = ldlt.solve(x);
    // One refinement step keeps large-lambda solves accurate.
    tc.trend += ldlt.solve(VectorXd(x - a * tc.trend));
    tc.cycle = x - tc.trend;
    tc.lambda = lambda;
    return tc;
}

namespace {

std::vector<std::string> strings(const json& j, const char* key, bool required) {
    if (!j.contains(key)) {
        if (required) throw Error(std::string("empirical config: missing field '") + key + "'");
        return {};
    }
    if (!j.at(key).is_array()) throw Error(std::string("empirical config: '") + key + "' must be an array");
    std::vector<std::string> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_string()) throw Error(std::string("empirical config: '") + key + "' must hold strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

VectorXd transformed(const MonthlySeries& s, Transform t, double lambda) {
    if (t == Transform::Level) return s.values;
    if ((s.values.array() <= 0.0).any())
        throw Error("series '" + s.name + "' must be positive for a log transform");
    const VectorXd lg = s.values.array().log().matrix();
    if (t == Transform::Log) return 100.0 * lg;
    return hp_filter(lg, lambda).cycle;
}

}  // namespace

EmpiricalConfig EmpiricalConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("empirical config: invalid JSON: ") + e.what());
    }
    EmpiricalConfig c;
    try {
        if (!j.contains("shock") || !j.at("shock").is_string())
            throw Error("empirical config: missing field 'shock'");
        c.shock = j.at("shock").get<std::string>();
        c.outcomes = strings(j, "outcomes", true);
        if (c.outcomes.empty()) throw Error("empirical config: 'outcomes' is empty");
        c.controls = strings(j, "controls", false);
        c.contemporaneous = strings(j, "contemporaneous", false);
        c.states = strings(j, "states", false);
        if (j.contains("lags")) {
            const json& l = j.at("lags");
            c.control_lags = l.value("controls", c.control_lags);
            c.shock_lags = l.value("shock", c.shock_lags);
        }
        c.horizons = j.value("horizons", c.horizons);
        c.level = j.value("level", c.level);
        c.hp_lambda = j.value("hp_lambda", c.hp_lambda);
        c.bandwidth = j.value("bandwidth", c.bandwidth);
        if (j.contains("shock_scale")) c.shock_scale = j.at("shock_scale").get<std::vector<double>>();
        if (j.contains("eval_states"))
            for (const auto& e : j.at("eval_states"))
                c.eval_states.push_back({e.at("label").get<std::string>(),
                                         e.at("values").get<std::vector<double>>()});
        if (j.contains("transforms"))
            for (const auto& [k, v] : j.at("transforms").items())
                c.transforms[k] = parse_transform(v.get<std::string>());
        if (j.contains("sample")) {
            const json& s = j.at("sample");
            if (s.contains("start")) c.start = YearMonth::parse(s.at("start").get<std::string>());
            if (s.contains("end")) c.end = YearMonth::parse(s.at("end").get<std::string>());
        }
    } catch (const json::exception& e) {
        throw Error(std::string("empirical config: ") + e.what());
    }
    if (c.horizons < 0) throw Error("empirical config: 'horizons' must be non-negative");
    if (c.control_lags < 0 || c.shock_lags < 0) throw Error("empirical config: lags must be non-negative");
    if (!(c.level > 0.0 && c.level < 1.0)) throw Error("empirical config: 'level' must be in (0, 1)");
    for (double k : c.shock_scale)
        if (k == 0.0) throw Error("empirical config: shock_scale values must be nonzero");
    for (const auto& e : c.eval_states)
        if (e.values.size() != c.states.size())
            throw Error("empirical config: eval state '" + e.label + "' has " +
                        std::to_string(e.values.size()) + " values for " +
                        std::to_string(c.states.size()) + " states");
    return c;
}

std::string EmpiricalConfig::to_json() const {
    json j;
    j["shock"] = shock;
    j["outcomes"] = outcomes;
    j["controls"] = controls;
    j["contemporaneous"] = contemporaneous;
    j["states"] = states;
    j["lags"] = {{"controls", control_lags}, {"shock", shock_lags}};
    j["horizons"] = horizons;
    j["level"] = level;
    j["hp_lambda"] = hp_lambda;
    j["bandwidth"] = bandwidth;
    j["shock_scale"] = shock_scale;
    j["eval_states"] = json::array();
    for (const auto& e : eval_states) j["eval_states"].push_back({{"label", e.label}, {"values", e.values}});
    j["transforms"] = json::object();
    for (const auto& [k, t] : transforms) j["transforms"][k] = lplab::to_string(t);
    if (start || end) {
        j["sample"] = json::object();
        if (start) j["sample"]["start"] = start->str();
        if (end) j["sample"]["end"] = end->str();
    }
    return j.dump(2);
}

std::map<std::string, std::string> column_roles(const EmpiricalConfig& cfg) {
    std::map<std::string, std::string> roles;
    roles[cfg.shock] = "shock";
    for (const auto& s : cfg.outcomes) roles.emplace(s, "outcome");
    for (const auto& s : cfg.controls) roles.emplace(s, "control");
    for (const auto& s : cfg.contemporaneous) roles.emplace(s, "contemporaneous");
    for (const auto& s : cfg.states) roles.emplace(s, "state");
    return roles;
}

namespace {

struct EmpiricalInputs {
    const EmpiricalConfig& cfg;
    const LoadedData& data;

    const MonthlySeries& series(const std::string& name) const {
        auto it = data.series.find(name);
        if (it == data.series.end()) throw Error("empirical: series '" + name + "' not loaded");
        return it->second;
    }
    VectorXd column(const std::string& name) const {
        auto it = cfg.transforms.find(name);
        const Transform t = it == cfg.transforms.end() ? Transform::Level : it->second;
        return transformed(series(name), t, cfg.hp_lambda);
    }
    MatrixXd stack(const std::vector<std::string>& names) const {
        MatrixXd m(static_cast<Eigen::Index>(data.dates.size()), static_cast<Eigen::Index>(names.size()));
        for (std::size_t c = 0; c < names.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = column(names[c]);
        return m;
    }
};

bool outcome_is_control(const EmpiricalConfig& cfg, const std::string& outcome) {
    return std::find(cfg.controls.begin(), cfg.controls.end(), outcome) != cfg.controls.end();
}

}  // namespace

LpData empirical_lp_data(const EmpiricalConfig& cfg, const LoadedData& data, const std::string& outcome) {
    const EmpiricalInputs in{cfg, data};
    if (cfg.states.empty()) throw Error("empirical: at least one state variable is required");
    LpData d;
    d.outcome = in.column(outcome);
    d.shock = in.series(cfg.shock).values;
    d.outcome_name = outcome;
    d.shock_name = cfg.shock;
    d.proxies.resize(d.shock.size(), static_cast<Eigen::Index>(cfg.states.size()));
    for (std::size_t c = 0; c < cfg.states.size(); ++c) {
        d.proxies.col(static_cast<Eigen::Index>(c)) =
            transformed(in.series(cfg.states[c]), Transform::LogCycle, cfg.hp_lambda);
        d.proxy_names.push_back(cfg.states[c] + "_cycle");
    }
    d.lagged_controls = in.stack(cfg.controls);
    d.control_names = cfg.controls;
    // The outcome never controls for itself at date t.
    for (const auto& c : cfg.contemporaneous)
        if (c != outcome) d.contemporaneous_names.push_back(c);
    d.contemporaneous = in.stack(d.contemporaneous_names);
    for (auto& nm : d.contemporaneous_names) nm += "_t";
    return d;
}

DesignSpec empirical_design(const EmpiricalConfig& cfg, const std::string& outcome, SpecKind spec, int h) {
    DesignSpec d;
    d.spec = spec;
    d.h = h;
    d.control_lags = cfg.control_lags;
    d.shock_lags = cfg.shock_lags;
    d.lag_outcome = !outcome_is_control(cfg, outcome);
    d.bandwidth = cfg.bandwidth;
    return d;
}

double shock_sd(const EmpiricalConfig& cfg, const LoadedData& data) {
    const VectorXd shock = EmpiricalInputs{cfg, data}.series(cfg.shock).values;
    const double n = static_cast<double>(shock.size());
    if (n < 2) throw Error("empirical: shock series needs at least two observations");
    const double sd = std::sqrt((shock.array() - shock.mean()).square().sum() / (n - 1.0));
    if (!(sd > 0.0)) throw Error("empirical: shock series has zero variance");
    return sd;
}

EmpiricalResult run_empirical(const EmpiricalConfig& cfg, const LoadedData& data) {
    EmpiricalResult res;
    res.shock_sd = shock_sd(cfg, data);
    if (cfg.horizons >= static_cast<int>(data.dates.size()))
        throw Error("empirical: horizon exceeds the data length");

    for (const auto& outcome : cfg.outcomes) {
        const LpData d = empirical_lp_data(cfg, data, outcome);
        std::vector<EmpiricalRow>& rows = res.tables[outcome];
        for (int h = 0; h <= cfg.horizons; ++h) {
            const RegressionFit fl = fit_lp(empirical_design(cfg, outcome, SpecKind::Linear, h), d);
            const RegressionFit ff = fit_lp(empirical_design(cfg, outcome, SpecKind::Feas, h), d);

            auto emit = [&](const RegressionFit& f, const std::string& label, const VectorXd& z) {
                for (double k : cfg.shock_scale) {
                    const IrfEstimate e = irf_ci(f, z, k * res.shock_sd, cfg.level);
                    double lo = e.conf_low / k, hi = e.conf_high / k;
                    if (lo > hi) std::swap(lo, hi);
                    rows.push_back({h, label, k, e.value / k, lo, hi});
                }
            };
            emit(fl, "Linear", VectorXd());
            for (const auto& st : cfg.eval_states)
                emit(ff, st.label,
                     Eigen::Map<const VectorXd>(st.values.data(), static_cast<Eigen::Index>(st.values.size())));
        }
    }
    return res;
}

}  // namespace lplab
