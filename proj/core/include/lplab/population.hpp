#pragma once

#include "lplab/model.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace lplab {

enum class SpecKind { Linear, AsymLP, LagLP, Mixed, Feas, Infeas, InfeasCond1, InfeasCond2 };

std::string to_string(SpecKind k);
SpecKind parse_spec(const std::string& name);

// Coefficient names per spec:
//   Linear  beta
//   AsymLP  beta_plus, beta_minus
//   LagLP   beta0, beta1
//   Feas    theta1, theta2, theta3
//   Infeas  kappa1, kappa2, kappa3
struct PopulationIrf {
    SpecKind spec;
    int h;
    std::map<std::string, double> coefficients;

    double at(const std::string& name) const;
};

// What the spec's IRF conditions on.
struct NoState {};
struct SignState {
    bool positive;
};
struct ProxyState {
    double y;
};
struct LatentState {
    double s;
};
using Conditioning = std::variant<NoState, SignState, ProxyState, LatentState>;

double car(const QarParams& p, double s, double delta, int h);
double cmr(const QarParams& p, double s, int h);
double girf(const QarParams& p, double s, double delta, int h);
double girf_offset(const QarParams& p, int h);  // car - girf

PopulationIrf pop_irf(SpecKind spec, const QarParams& p, int h);

// AsymLP accepts NoState (sign taken from delta) or an explicit SignState.
double irf_value(const PopulationIrf& irf, const Conditioning& z, double delta);
double irf_value(SpecKind spec, const QarParams& p, const Conditioning& z, double delta, int h);

// Cov(1{u_t >= u}, u_t) / Var(u_t) for u_t ~ N(0,1), i.e. the normal density.
double kp_weight(double u);

// QVAR conditional average response to delta_i in structural shock i
// (0-based); returns the full n-vector of outcome responses.
VectorXd qvar_car(const QvarParams& p, const VectorXd& s, double delta_i, int i, int h);
double qvar_linear_pop_irf(const QvarParams& p, int i, int j, int h);

// Infeasible LP population coefficients for outcome j, shock i: the response
// is kappa1 delta + kappa2' s delta + kappa3 delta^2.
struct QvarInfeasIrf {
    double kappa1;
    VectorXd kappa2;
    double kappa3;

    double value(const VectorXd& s, double delta) const { return (kappa1 + kappa2.dot(s)) * delta + kappa3 * delta * delta; }
};
QvarInfeasIrf qvar_infeas_pop_irf(const QvarParams& p, int i, int j, int h);

struct IndicatorRegion {
    std::function<bool(const VectorXd&)> contains;
    std::size_t n_draws = 1000000;
    std::uint64_t seed = 1;
};
struct SliceRegion {
    std::vector<int> index;  // 0-based components of s held fixed
    VectorXd c0;
};
using StateRegion = std::variant<IndicatorRegion, SliceRegion>;

struct CcarResult {
    VectorXd value;
    VectorXd mc_se;       // zero for slices
    double probability;   // estimated region probability; 0 for slices
};

CcarResult ccar(const QvarParams& p, const StateRegion& region, double delta_i, int i, int h);

// E[s | s_I = c0] under the stationary Gaussian state distribution.
VectorXd conditional_state_mean(const QvarParams& p, const std::vector<int>& index,
                                const VectorXd& c0);

}  // namespace lplab
