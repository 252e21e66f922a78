#pragma once

#include "lplab/estimate.hpp"
#include "lplab/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lplab {

struct YearMonth {
    int year = 0;
    int month = 1;  // 1..12

    int index() const { return year * 12 + (month - 1); }
    static YearMonth from_index(int i) { return {i / 12, i % 12 + 1}; }
    static YearMonth parse(const std::string& text);  // YYYY-MM
    std::string str() const;
    auto operator<=>(const YearMonth&) const = default;
};

enum class Transform { Level, Log, LogCycle };

Transform parse_transform(const std::string& name);
std::string to_string(Transform t);

struct MonthlySeries {
    std::string name;
    std::vector<YearMonth> dates;
    VectorXd values;
    Transform transform = Transform::Level;
};

struct LoadedData {
    std::map<std::string, MonthlySeries> series;
    std::vector<YearMonth> dates;
    std::size_t dropped_before = 0;  // rows before the window start
    std::size_t dropped_after = 0;   // rows after the window end
};

// roles: column name -> role label (shock, outcome, control, state, ...).
// Only the named columns are parsed. Dates must be consecutive months.
LoadedData load_csv(const std::string& path, const std::map<std::string, std::string>& roles,
                    std::optional<YearMonth> start = std::nullopt,
                    std::optional<YearMonth> end = std::nullopt);

struct TrendCycle {
    VectorXd trend;
    VectorXd cycle;
    double lambda;
};

// Solves (I + lambda D'D) trend = x with D the second-difference operator.
TrendCycle hp_filter(const VectorXd& x, double lambda);

struct EvalState {
    std::string label;
    std::vector<double> values;
};

struct EmpiricalConfig {
    std::string shock;
    std::vector<std::string> outcomes;
    std::vector<std::string> controls;         // entered with lags
    std::vector<std::string> contemporaneous;  // entered at date t, except for the outcome itself
    std::vector<std::string> states;           // HP cycle of log series, lagged once
    int control_lags = 2;
    int shock_lags = 2;
    int horizons = 48;
    double level = 0.90;
    double hp_lambda = 14400.0;
    std::vector<double> shock_scale{-1.0, 1.0, 2.0};
    std::vector<EvalState> eval_states;
    std::map<std::string, Transform> transforms;  // default Level
    std::optional<YearMonth> start, end;
    int bandwidth = -1;

    static EmpiricalConfig from_json(const std::string& text);
    std::string to_json() const;
};

struct EmpiricalRow {
    int h;
    std::string label;  // "Linear" or an evaluation-state label
    double k;
    double value;  // IRF(z, k sigma_shock) / k
    double lo, hi;
};

struct EmpiricalResult {
    double shock_sd;
    std::map<std::string, std::vector<EmpiricalRow>> tables;  // by outcome
};

std::map<std::string, std::string> column_roles(const EmpiricalConfig& cfg);

// Regression inputs for one outcome: transformed outcome, raw shock, HP cycles
// of the log state series (named "<state>_cycle"), lagged and date-t controls.
LpData empirical_lp_data(const EmpiricalConfig& cfg, const LoadedData& data, const std::string& outcome);
DesignSpec empirical_design(const EmpiricalConfig& cfg, const std::string& outcome, SpecKind spec, int h);
double shock_sd(const EmpiricalConfig& cfg, const LoadedData& data);  // sample sd, n - 1
EmpiricalResult run_empirical(const EmpiricalConfig& cfg, const LoadedData& data);

}  // namespace lplab
