#pragma once

#include "lplab/model.hpp"
#include "lplab/population.hpp"
#include "lplab/simulate.hpp"

#include <string>
#include <vector>

namespace lplab {

// Column roles for an LP regression. Every series is indexed by date t and
// must have the same length. Proxies, latent states and the region indicator
// enter the design lagged one period; lagged_controls enter with lags
// 1..control_lags; contemporaneous columns enter at date t.
struct LpData {
    VectorXd outcome;
    VectorXd shock;
    MatrixXd proxies;
    MatrixXd latent;
    VectorXd region;  // 1{s_t in A}
    MatrixXd lagged_controls;
    MatrixXd contemporaneous;
    std::string outcome_name = "y";
    std::string shock_name = "u";
    std::vector<std::string> proxy_names, latent_names, control_names, contemporaneous_names;

    Eigen::Index size() const { return outcome.size(); }
};

LpData lp_data(const SimulatedPath& path);
// Outcome j, shock i (0-based); all outcomes are proxies, all states latent.
LpData lp_data(const QvarPath& path, int shock_index, int outcome_index);

struct DesignSpec {
    SpecKind spec = SpecKind::Linear;
    int h = 0;
    int shock_index = 0;    // QVAR paths only
    int outcome_index = 0;  // QVAR paths only
    int control_lags = 0;   // lags of the outcome, the shock and lagged_controls
    int shock_lags = -1;    // -1: same as control_lags
    bool lag_outcome = true;
    bool include_constant = true;      // forced on for AsymLP and Mixed (regime constants)
    std::vector<int> state_proxy;      // proxy (or latent) columns used; empty = all
    VectorXd proxy_center;             // subtracted from the selected state columns
    std::vector<std::string> restrict; // coefficients fixed at zero (columns dropped)
    int bandwidth = -1;                // -1: floor(0.75 T_h^(1/3))
};

// Positions of the IRF-relevant coefficients within the design.
struct IrfSlots {
    int u = -1;
    std::vector<int> zu;
    int u2 = -1;
    int pos_u = -1, neg_u = -1;
    std::vector<int> pos_zu, neg_zu;
    int region_u = -1;
};

// Column order per spec ([c] = constant when include_constant, W = controls):
//   Linear       [c] u W
//   AsymLP       S S*u (1-S) (1-S)*u S*W (1-S)*W          S = 1{u_t > 0}
//   LagLP        [c] u z*u z W
//   Mixed        S S*u S*z*u S*z (1-S) (1-S)*u (1-S)*z*u (1-S)*z S*W (1-S)*W
//   Feas         [c] u z*u u^2 W
//   Infeas       [c] u s*u u^2 W
//   InfeasCond1  [c] A*u u^2 W                           A = 1{s_{t-1} in region}
//   InfeasCond2  [c] u s_I*u u^2 W
// W = outcome lags, shock lags, lagged controls, contemporaneous controls.
// LagLP and Mixed drop any W column that repeats a z level column.
struct Design {
    MatrixXd X;
    VectorXd y;
    std::vector<std::string> names;
    std::vector<Eigen::Index> dates;  // date t of each row
    SpecKind spec = SpecKind::Linear;
    int h = 0;
    int n_states = 0;
    IrfSlots slots;
};

Design build_design(const DesignSpec& spec, const LpData& data);
Design build_design(const DesignSpec& spec, const SimulatedPath& path);
Design build_design(const DesignSpec& spec, const QvarPath& path);

struct RegressionFit {
    std::vector<std::string> names;
    VectorXd coefficients;
    VectorXd residuals;
    MatrixXd gram;      // X'X / T_h
    MatrixXd hac_lrv;   // long-run variance of x_t e_t
    MatrixXd vcov_hac;  // Q^-1 Omega Q^-1 / T_h
    MatrixXd vcov_ehw;
    Eigen::Index T_h = 0;
    int bandwidth = 0;
    std::vector<bool> restricted;
    SpecKind spec = SpecKind::Linear;
    int h = 0;
    int n_states = 0;
    IrfSlots slots;

    double coef(const std::string& name) const;
    int index(const std::string& name) const;
    VectorXd se_hac() const;
    VectorXd se_ehw() const;
};

// Least squares via Householder QR. Rejects designs whose column-equilibrated
// Gram matrix has condition number above cond_limit, naming the columns in
// the near-null direction.
RegressionFit ols(const MatrixXd& X, const VectorXd& y,
                  const std::vector<std::string>& names = {}, double cond_limit = 1e12);

int default_bandwidth(Eigen::Index T_h);
double bartlett_weight(int m, int bandwidth);

// Omega = Gamma_0 + sum_{m=1}^{b-1} (1 - m/b)(Gamma_m + Gamma_m').
MatrixXd hac_lrv(const MatrixXd& scores, int bandwidth);
MatrixXd ehw_vcov(const MatrixXd& X, const VectorXd& residuals);

// OLS plus HAC and EHW covariances; honours DesignSpec::restrict.
RegressionFit fit_lp(const Design& design, const DesignSpec& spec);
RegressionFit fit_lp(const DesignSpec& spec, const LpData& data);

struct IrfEstimate {
    double value;
    double std_error;
    double conf_low;
    double conf_high;
    double level;
    VectorXd gradient;
};

// z is expressed in regressor units (after proxy_center). AsymLP and Mixed
// take the regime from the sign of delta; InfeasCond1 ignores z.
VectorXd irf_gradient(const RegressionFit& fit, const VectorXd& z, double delta);
IrfEstimate irf_ci(const RegressionFit& fit, const VectorXd& z, double delta, double level = 0.90);

// Lag-1 autocovariance of the quadratic-shock score u_{i,t}^2 e_{t+h} from a
// Feas regression on a simulated QVAR path, with a HAC standard error.
McEstimate score_lag1_autocov(const QvarParams& p, int h, int i, int j, Eigen::Index T,
                              std::uint64_t seed, int burn_in = kDefaultBurnIn);

// Counterexample parameterization: Gamma = 0, Phi1 = a e1 e2', Phi2 loads b on
// s2^2 in the first equation, Sigma = [[1, rho], [rho, 1]].
QvarParams ehw_counterexample(double a, double rho, double b);

double normal_quantile(double p);

}  // namespace lplab
