#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace lplab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Raised for invalid parameters, malformed inputs and numerical failures that
// the caller should report as a configuration or data error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// y_t = phi1 y_{t-1} + phi2 s_{t-1}^2 + (1 + gamma s_{t-1}) sigma u_t
// s_t = phi1 s_{t-1} + sigma u_t
struct QarParams {
    double phi1 = 0.0;
    double phi2 = 0.0;
    double gamma = 0.0;
    double sigma = 1.0;

    void validate() const;
};

struct QarMoments {
    double mean_y;
    double var_y;
    double var_s;
    double cov_sy;
    double var_s_given_y;
    double proxy_slope;
};

struct HorizonCoeffs {
    int h;
    double baseline;  // sigma phi1^h
    double a_h;       // loading on s_{t-1} delta
    double q_h;       // loading on delta^2
};

QarMoments qar_moments(const QarParams& p);
HorizonCoeffs horizon_coeffs(const QarParams& p, int h);

// Threshold constant of the sign-interacted LP and the fourth-moment term
// E[(u^2 - m|u|)^2] for u ~ N(0,1).
double asym_m();
double nu_m();

// Column-major stacking of the lower triangle.
VectorXd vech(const MatrixXd& m, double sym_tol = 1e-10);
MatrixXd unvech(const VectorXd& v);
inline int vech_size(int n) { return n * (n + 1) / 2; }

// y_t = Phi1 y_{t-1} + Phi2 vech(s_{t-1} s_{t-1}') + (1 + Gamma s_{t-1}) .* eta_t
// s_t = Phi1 s_{t-1} + eta_t,   eta_t = Sigma_tr u_t
class QvarParams {
public:
    QvarParams(MatrixXd phi1, MatrixXd phi2, MatrixXd gamma, MatrixXd sigma);

    int n() const { return static_cast<int>(phi1_.rows()); }
    const MatrixXd& phi1() const { return phi1_; }
    const MatrixXd& phi2() const { return phi2_; }
    const MatrixXd& gamma() const { return gamma_; }
    const MatrixXd& sigma() const { return sigma_; }
    const MatrixXd& sigma_tr() const { return sigma_tr_; }

private:
    MatrixXd phi1_, phi2_, gamma_, sigma_, sigma_tr_;
};

double spectral_radius(const MatrixXd& a);

// Solves V = Phi1 V Phi1' + Sigma by doubling.
MatrixXd stationary_state_variance(const QvarParams& p, double tol = 1e-10,
                                   int max_iter = 200);

// JSON documents: {phi1, phi2, gamma, sigma} and {n, Phi1, Phi2, Gamma, Sigma}
// with matrices as row-major nested arrays.
QarParams qar_params_from_json(const std::string& text);
std::string qar_params_to_json(const QarParams& p);
QvarParams qvar_params_from_json(const std::string& text);
std::string qvar_params_to_json(const QvarParams& p);
QarParams load_qar_params(const std::string& path);
QvarParams load_qvar_params(const std::string& path);

}  // namespace lplab
