#include "lplab/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace lplab {

void QarParams::validate() const {
    if (!std::isfinite(phi1) || !std::isfinite(phi2) || !std::isfinite(gamma) ||
        !std::isfinite(sigma))
        throw Error("QAR parameters must be finite");
    if (std::abs(phi1) >= 1.0) throw Error("QAR parameter phi1 must satisfy |phi1| < 1");
    if (sigma <= 0.0) throw Error("QAR parameter sigma must be positive");
}

QarMoments qar_moments(const QarParams& p) {
    p.validate();
    const double f1 = p.phi1, f2 = p.phi2, g = p.gamma;
    const double s2 = p.sigma * p.sigma;
    const double v = s2 / (1.0 - f1 * f1);

    QarMoments m{};
    m.var_s = v;
    m.mean_y = f2 * s2 / ((1.0 - f1) * (1.0 - f1 * f1));

    // Var(s^2) = 2v^2 for a zero-mean Gaussian state; Cov(y, s^2) solves its
    // own AR(1)-type recursion with root phi1^3.
    const double cov_y_s2 = (2.0 * f1 * f1 * f2 * v * v + 2.0 * g * f1 * s2 * v) /
                            (1.0 - f1 * f1 * f1);
    m.var_y = (2.0 * f2 * f2 * v * v + s2 * (1.0 + g * g * v) +
               2.0 * f1 * f2 * cov_y_s2) /
              (1.0 - f1 * f1);

    m.cov_sy = v;
    m.proxy_slope = m.cov_sy / m.var_y;
    m.var_s_given_y = std::max(0.0, m.var_s - m.cov_sy * m.cov_sy / m.var_y);
    return m;
}

HorizonCoeffs horizon_coeffs(const QarParams& p, int h) {
    p.validate();
    if (h < 0) throw Error("horizon must be non-negative");
    const double f1 = p.phi1;
    const double fh = std::pow(f1, h);
    // (1 - phi1^h)/(1 - phi1) written as a finite geometric sum to stay exact
    // at phi1 = 0.
    double geo = 0.0;
    for (int k = 0; k < h; ++k) geo += std::pow(f1, k);

    HorizonCoeffs c{};
    c.h = h;
    c.baseline = p.sigma * fh;
    c.a_h = p.sigma * fh * (p.gamma + 2.0 * p.phi2 * geo);
    c.q_h = (h == 0) ? 0.0 : p.phi2 * p.sigma * p.sigma * std::pow(f1, h - 1) * geo;
    return c;
}

double asym_m() {
    const double c = std::sqrt(2.0 / std::numbers::pi);
    return c / (1.0 - 2.0 / std::numbers::pi);
}

double nu_m() {
    const double m = asym_m();
    return 3.0 - 4.0 * m * std::sqrt(2.0 / std::numbers::pi) + m * m;
}

VectorXd vech(const MatrixXd& m, double sym_tol) {
    if (m.rows() != m.cols()) throw Error("vech: matrix must be square");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > sym_tol)
        throw Error("vech: matrix is not symmetric");
    const int n = static_cast<int>(m.rows());
    VectorXd out(vech_size(n));
    int k = 0;
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) out(k++) = m(i, j);
    return out;
}

MatrixXd unvech(const VectorXd& v) {
    const double disc = std::sqrt(1.0 + 8.0 * static_cast<double>(v.size()));
    const int n = static_cast<int>(std::lround((disc - 1.0) / 2.0));
    if (vech_size(n) != v.size()) throw Error("unvech: length is not n(n+1)/2");
    MatrixXd m(n, n);
    int k = 0;
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) {
            m(i, j) = v(k);
            m(j, i) = v(k);
            ++k;
        }
    return m;
}

double spectral_radius(const MatrixXd& a) {
    if (a.size() == 0) return 0.0;
    Eigen::EigenSolver<MatrixXd> es(a, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

QvarParams::QvarParams(MatrixXd phi1, MatrixXd phi2, MatrixXd gamma, MatrixXd sigma)
    : phi1_(std::move(phi1)), phi2_(std::move(phi2)), gamma_(std::move(gamma)),
      sigma_(std::move(sigma)) {
    const auto n = phi1_.rows();
    if (n < 1 || phi1_.cols() != n) throw Error("QVAR: Phi1 must be n x n with n >= 1");
    if (phi2_.rows() != n || phi2_.cols() != vech_size(static_cast<int>(n)))
        throw Error("QVAR: Phi2 must be n x n(n+1)/2");
    if (gamma_.rows() != n || gamma_.cols() != n) throw Error("QVAR: Gamma must be n x n");
    if (sigma_.rows() != n || sigma_.cols() != n) throw Error("QVAR: Sigma must be n x n");
    if (!phi1_.allFinite() || !phi2_.allFinite() || !gamma_.allFinite() || !sigma_.allFinite())
        throw Error("QVAR: parameters must be finite");
    if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw Error("QVAR: Sigma must be symmetric");
    if (spectral_radius(phi1_) >= 1.0)
        throw Error("QVAR: spectral radius of Phi1 must be below 1");

    Eigen::LLT<MatrixXd> llt(sigma_);
    if (llt.info() != Eigen::Success) throw Error("QVAR: Sigma is not positive definite");
    sigma_tr_ = llt.matrixL();
    if ((sigma_tr_ * sigma_tr_.transpose() - sigma_).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, sigma_.cwiseAbs().maxCoeff()))
        throw Error("QVAR: Cholesky factor does not reproduce Sigma");
}

MatrixXd stationary_state_variance(const QvarParams& p, double tol, int max_iter) {
    const MatrixXd& phi = p.phi1();
    MatrixXd a = phi;
    MatrixXd v = p.sigma();
    double resid = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        resid = (v - phi * v * phi.transpose() - p.sigma()).cwiseAbs().rowwise().sum().maxCoeff();
        if (resid <= tol) {
            return 0.5 * (v + v.transpose());
        }
        v = a * v * a.transpose() + v;
        a = a * a;
    }
    std::ostringstream msg;
    msg << "Lyapunov solver did not converge in " << max_iter << " iterations (residual "
        << resid << ")";
    throw Error(msg.str());
}

}  // namespace lplab
