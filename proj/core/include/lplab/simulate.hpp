#pragma once

#include "lplab/model.hpp"
#include "lplab/rng.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace lplab {

inline constexpr int kDefaultBurnIn = 1000;

// Recorded QAR path. s and u are aligned with y; index 0 is the first step
// after burn-in, so s(t-1) is the lagged state for t >= 1.
struct SimulatedPath {
    VectorXd y, s, u;
    int burn_in = 0;
    std::uint64_t seed = 0;
    QarParams params;

    Eigen::Index size() const { return y.size(); }
};

// QVAR path: T x n matrices, one row per date.
struct QvarPath {
    MatrixXd y, s, u;
    int burn_in = 0;
    std::uint64_t seed = 0;

    Eigen::Index size() const { return y.rows(); }
};

struct McEstimate {
    double estimate;
    double mc_se;
};

SimulatedPath simulate_qar(const QarParams& p, Eigen::Index T, int burn_in, std::uint64_t seed);
QvarPath simulate_qvar(const QvarParams& p, Eigen::Index T, int burn_in, std::uint64_t seed);

// Averages draw(rng) over n_draws. Draws are split into fixed blocks, each on
// its own stream, and merged in block order.
McEstimate mc_average(std::size_t n_draws, std::uint64_t seed, std::string_view purpose,
                      const std::function<double(Rng&)>& draw);

// Paired-path CAR: same nuisance shocks, u_t versus u_t + delta, from
// s_{t-1} = s and y_{t-1} = 0.
McEstimate car_oracle(const QarParams& p, double s, double delta, int h, std::size_t n_draws,
                      std::uint64_t seed);

// Paired-path QVAR CAR for outcome j after perturbing structural shock i
// (both 0-based) by delta_i.
McEstimate qvar_car_oracle(const QvarParams& p, const VectorXd& s, double delta_i, int i, int j,
                           int h, std::size_t n_draws, std::uint64_t seed);

// Smallest J with |phi1|^(2J) < 1e-12; 1 when phi1 = 0.
int default_trunc_j(const QarParams& p);

// Draws y_{t-1} given s_{t-1} = s. The last trunc_j shocks are drawn
// unconditionally, projected onto the constraint sigma * sum_j phi1^j u_j = s
// and then pushed through the model from a zero pre-history.
struct ConditionalDraws {
    VectorXd y;  // draws of y_{t-1}
    VectorXd s;  // reconstructed s_{t-1}, equal to the conditioning value up to rounding
};

ConditionalDraws conditional_state_sampler(const QarParams& p, double s, std::size_t n_draws,
                                           int trunc_j, std::uint64_t seed);

}  // namespace lplab
