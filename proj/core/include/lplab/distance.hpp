#pragma once

#include "lplab/model.hpp"
#include "lplab/population.hpp"
#include "lplab/simulate.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace lplab {

enum class BinAxis { State, Shock };  // s_{t-1} or u_t

struct DistanceBin {
    double lo, hi;
    std::size_t count;
    std::optional<double> distance;  // empty bins carry no value
};

struct DistanceReport {
    SpecKind spec;
    double overall;
    std::vector<DistanceBin> s_bins, u_bins;
    int H;
    QarParams params;
    std::uint64_t seed;
};

// Sum over h = 0..H of (CAR_h(s, u) - IRF_spec(z, u; h))^2.
double per_obs_delta(const QarParams& p, double s, double u, const Conditioning& z, SpecKind spec,
                     int H);

// IRF coefficients per horizon: population values, or OLS estimates on the
// path for robustness studies.
std::vector<PopulationIrf> population_irfs(SpecKind spec, const QarParams& p, int H);
std::vector<PopulationIrf> estimated_irfs(SpecKind spec, const SimulatedPath& path, int H);

// Per-observation Delta over t = 1..T-1 using (s_{t-1}, y_{t-1}, u_t).
VectorXd path_deltas(const SimulatedPath& path, const QarParams& p,
                     const std::vector<PopulationIrf>& irfs);

double unconditional_distance(const SimulatedPath& path, SpecKind spec, const QarParams& p, int H);
double unconditional_distance(const SimulatedPath& path, const QarParams& p,
                              const std::vector<PopulationIrf>& irfs);

// edges: strictly increasing, at least two. Observations are assigned to the
// bin lo <= x < hi; the last bin also takes x == hi.
std::vector<DistanceBin> binned_distance(const SimulatedPath& path, SpecKind spec,
                                         const QarParams& p, int H, BinAxis axis,
                                         const std::vector<double>& edges);
std::vector<DistanceBin> binned_distance(const SimulatedPath& path, const QarParams& p,
                                         const std::vector<PopulationIrf>& irfs, BinAxis axis,
                                         const std::vector<double>& edges);

// Sample-quantile edges for nbins equal-probability bins, with infinite outer
// edges so the bins partition the real line.
std::vector<double> equal_probability_edges(const VectorXd& values, int nbins);
VectorXd axis_values(const SimulatedPath& path, BinAxis axis);  // aligned with path_deltas

DistanceReport distance_report(const SimulatedPath& path, SpecKind spec, const QarParams& p,
                               int H, int nbins = 12);

// Closed-form conditional MSEs at horizon h given u_t = delta or s_{t-1} = s.
// LagLP and Feas need Xi(s) for the state-conditional form.
double analytic_loss_u(SpecKind spec, const QarParams& p, int h, double delta);
double analytic_loss_s(SpecKind spec, const QarParams& p, int h, double s,
                       std::optional<double> xi = std::nullopt);

// E[(s - lambda (y - mu_y))^2 | s_{t-1} = s] by the conditional sampler.
McEstimate xi_estimate(const QarParams& p, double s, std::size_t n_draws, std::uint64_t seed);

enum class LossKind { Shock, State };

struct AnalyticLoss {
    SpecKind spec;
    int h;
    LossKind kind;
    std::vector<std::pair<double, double>> grid;  // (point, value)
};

AnalyticLoss analytic_loss_curve(SpecKind spec, const QarParams& p, int h, LossKind kind,
                                 const std::vector<double>& points,
                                 const std::function<double(double)>& xi = {});

}  // namespace lplab
