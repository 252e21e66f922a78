#include "lplab/estimate.hpp"

#include <boost/math/distributions/normal.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lplab {

namespace {

bool uses_states(SpecKind k) {
    switch (k) {
        case SpecKind::LagLP:
        case SpecKind::Mixed:
        case SpecKind::Feas:
        case SpecKind::Infeas:
        case SpecKind::InfeasCond1:
        case SpecKind::InfeasCond2:
            return true;
        default:
            return false;
    }
}

bool uses_latent(SpecKind k) { return k == SpecKind::Infeas || k == SpecKind::InfeasCond2; }

bool regime_split(SpecKind k) { return k == SpecKind::AsymLP || k == SpecKind::Mixed; }

struct Columns {
    std::vector<VectorXd> cols;
    std::vector<std::string> names;

    int add(std::string name, VectorXd col) {
        names.push_back(std::move(name));
        cols.push_back(std::move(col));
        return static_cast<int>(cols.size()) - 1;
    }
};

std::string lag_name(int lag, const std::string& base) {
    return "L" + std::to_string(lag) + "." + base;
}

}  // namespace

LpData lp_data(const SimulatedPath& path) {
    LpData d;
    d.outcome = path.y;
    d.shock = path.u;
    d.proxies = path.y;
    d.latent = path.s;
    d.proxy_names = {"y"};
    d.latent_names = {"s"};
    return d;
}

LpData lp_data(const QvarPath& path, int shock_index, int outcome_index) {
    const auto n = path.y.cols();
    if (shock_index < 0 || shock_index >= n || outcome_index < 0 || outcome_index >= n)
        throw Error("QVAR design: shock or outcome index out of range");
    LpData d;
    d.outcome = path.y.col(outcome_index);
    d.shock = path.u.col(shock_index);
    d.proxies = path.y;
    d.latent = path.s;
    d.outcome_name = "y" + std::to_string(outcome_index + 1);
    d.shock_name = "u" + std::to_string(shock_index + 1);
    for (Eigen::Index c = 0; c < n; ++c) {
        d.proxy_names.push_back("y" + std::to_string(c + 1));
        d.latent_names.push_back("s" + std::to_string(c + 1));
    }
    return d;
}

Design build_design(const DesignSpec& spec, const LpData& data) {
    const Eigen::Index T = data.outcome.size();
    if (data.shock.size() != T) throw Error("design: shock and outcome lengths differ");
    auto check_rows = [&](const MatrixXd& m, const char* what) {
        if (m.size() > 0 && m.rows() != T)
            throw Error(std::string("design: ") + what + " length differs from outcome");
    };
    check_rows(data.proxies, "proxy");
    check_rows(data.latent, "latent state");
    check_rows(data.lagged_controls, "control");
    check_rows(data.contemporaneous, "contemporaneous control");
    if (data.region.size() > 0 && data.region.size() != T)
        throw Error("design: region indicator length differs from outcome");
    if (spec.h < 0) throw Error("design: horizon must be non-negative");
    if (spec.control_lags < 0) throw Error("design: control_lags must be non-negative");

    const SpecKind kind = spec.spec;
    const int shock_lags = spec.shock_lags < 0 ? spec.control_lags : spec.shock_lags;

    // State columns z_{t-1}
    MatrixXd states;
    std::vector<std::string> state_names;
    if (uses_states(kind) && kind != SpecKind::InfeasCond1) {
        const MatrixXd& src = uses_latent(kind) ? data.latent : data.proxies;
        const auto& src_names = uses_latent(kind) ? data.latent_names : data.proxy_names;
        if (src.cols() == 0)
            throw Error(std::string("design: ") + to_string(kind) + " needs a " +
                        (uses_latent(kind) ? "latent state" : "state-proxy") + " column");
        std::vector<int> sel = spec.state_proxy;
        if (sel.empty())
            for (int c = 0; c < src.cols(); ++c) sel.push_back(c);
        states.resize(T, static_cast<Eigen::Index>(sel.size()));
        for (std::size_t k = 0; k < sel.size(); ++k) {
            if (sel[k] < 0 || sel[k] >= src.cols())
                throw Error("design: state column " + std::to_string(sel[k]) + " does not exist");
            states.col(static_cast<Eigen::Index>(k)) = src.col(sel[k]);
            state_names.push_back(static_cast<std::size_t>(sel[k]) < src_names.size()
                                      ? src_names[sel[k]]
                                      : "z" + std::to_string(sel[k] + 1));
        }
        if (spec.proxy_center.size() > 0) {
            if (spec.proxy_center.size() != states.cols())
                throw Error("design: proxy_center has the wrong dimension");
            states.rowwise() -= spec.proxy_center.transpose();
        }
    }
    if (kind == SpecKind::InfeasCond1 && data.region.size() == 0)
        throw Error("design: InfeasCond1 needs a region indicator");

    int start = uses_states(kind) ? 1 : 0;
    const bool outcome_lags = spec.lag_outcome && spec.control_lags > 0;
    if (outcome_lags || data.lagged_controls.cols() > 0) start = std::max(start, spec.control_lags);
    start = std::max(start, shock_lags);
    const Eigen::Index end = T - 1 - spec.h;  // last usable date
    const Eigen::Index n = end - start + 1;
    if (n <= 0) throw Error("design: insufficient data for horizon and lags");

    auto slice = [&](const VectorXd& v, int lag) -> VectorXd { return v.segment(start - lag, n); };
    const VectorXd u = slice(data.shock, 0);
    const VectorXd ones = VectorXd::Ones(n);

    // Controls W
    Columns w;
    for (int l = 1; l <= spec.control_lags && spec.lag_outcome; ++l)
        w.add(lag_name(l, data.outcome_name), slice(data.outcome, l));
    for (int l = 1; l <= shock_lags; ++l) w.add(lag_name(l, data.shock_name), slice(data.shock, l));
    for (Eigen::Index c = 0; c < data.lagged_controls.cols(); ++c) {
        const std::string nm = static_cast<std::size_t>(c) < data.control_names.size()
                                   ? data.control_names[c]
                                   : "x" + std::to_string(c + 1);
        for (int l = 1; l <= spec.control_lags; ++l)
            w.add(lag_name(l, nm), slice(data.lagged_controls.col(c), l));
    }
    for (Eigen::Index c = 0; c < data.contemporaneous.cols(); ++c) {
        const std::string nm = static_cast<std::size_t>(c) < data.contemporaneous_names.size()
                                   ? data.contemporaneous_names[c]
                                   : "c" + std::to_string(c + 1);
        w.add(nm, slice(data.contemporaneous.col(c), 0));
    }

    Design d;
    d.spec = kind;
    d.h = spec.h;
    d.n_states = static_cast<int>(states.cols());
    Columns cols;
    std::vector<VectorXd> z;  // lagged state columns aligned with rows
    for (Eigen::Index k = 0; k < states.cols(); ++k) z.push_back(slice(states.col(k), 1));
    auto zname = [&](std::size_t k) { return lag_name(1, state_names[k]); };

    // LagLP and Mixed already carry z_{t-1} in levels; a control lag of the
    // same series would duplicate it.
    if (kind == SpecKind::LagLP || kind == SpecKind::Mixed) {
        Columns kept;
        for (std::size_t c = 0; c < w.cols.size(); ++c) {
            bool dup = false;
            for (std::size_t k = 0; k < z.size(); ++k) dup = dup || w.names[c] == zname(k);
            if (!dup) kept.add(w.names[c], w.cols[c]);
        }
        w = std::move(kept);
    }

    if (regime_split(kind)) {
        const VectorXd pos = (u.array() > 0.0).cast<double>().matrix();
        const VectorXd neg = ones - pos;
        for (int r = 0; r < 2; ++r) {
            const VectorXd& ind = r == 0 ? pos : neg;
            const std::string tag = r == 0 ? "S" : "(1-S)";
            cols.add(r == 0 ? "S" : "1-S", ind);
            const int iu = cols.add(tag + "*u", ind.cwiseProduct(u));
            (r == 0 ? d.slots.pos_u : d.slots.neg_u) = iu;
            if (kind == SpecKind::Mixed) {
                for (std::size_t k = 0; k < z.size(); ++k) {
                    const int izu = cols.add(tag + "*u*" + zname(k),
                                             ind.cwiseProduct(u).cwiseProduct(z[k]));
                    (r == 0 ? d.slots.pos_zu : d.slots.neg_zu).push_back(izu);
                }
                for (std::size_t k = 0; k < z.size(); ++k)
                    cols.add(tag + "*" + zname(k), ind.cwiseProduct(z[k]));
            }
        }
        for (int r = 0; r < 2; ++r) {
            const VectorXd& ind = r == 0 ? pos : neg;
            const std::string tag = r == 0 ? "S" : "(1-S)";
            for (std::size_t c = 0; c < w.cols.size(); ++c)
                cols.add(tag + "*" + w.names[c], ind.cwiseProduct(w.cols[c]));
        }
    } else {
        if (spec.include_constant) cols.add("const", ones);
        switch (kind) {
            case SpecKind::Linear:
                d.slots.u = cols.add("u", u);
                break;
            case SpecKind::LagLP:
                d.slots.u = cols.add("u", u);
                for (std::size_t k = 0; k < z.size(); ++k)
                    d.slots.zu.push_back(cols.add("u*" + zname(k), u.cwiseProduct(z[k])));
                for (std::size_t k = 0; k < z.size(); ++k) cols.add(zname(k), z[k]);
                break;
            case SpecKind::Feas:
            case SpecKind::Infeas:
            case SpecKind::InfeasCond2:
                d.slots.u = cols.add("u", u);
                for (std::size_t k = 0; k < z.size(); ++k)
                    d.slots.zu.push_back(cols.add("u*" + zname(k), u.cwiseProduct(z[k])));
                d.slots.u2 = cols.add("u^2", u.cwiseProduct(u));
                break;
            case SpecKind::InfeasCond1:
                d.slots.region_u = cols.add("A*u", slice(data.region, 1).cwiseProduct(u));
                d.slots.u2 = cols.add("u^2", u.cwiseProduct(u));
                break;
            default:
                break;
        }
        for (std::size_t c = 0; c < w.cols.size(); ++c) cols.add(w.names[c], w.cols[c]);
    }

    const auto k = static_cast<Eigen::Index>(cols.cols.size());
    if (n <= k) throw Error("design: fewer observations than regressors");
    d.X.resize(n, k);
    for (Eigen::Index c = 0; c < k; ++c) d.X.col(c) = cols.cols[c];
    d.names = std::move(cols.names);
    d.y = data.outcome.segment(start + spec.h, n);
    d.dates.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) d.dates[r] = start + r;
    return d;
}

Design build_design(const DesignSpec& spec, const SimulatedPath& path) {
    return build_design(spec, lp_data(path));
}

Design build_design(const DesignSpec& spec, const QvarPath& path) {
    return build_design(spec, lp_data(path, spec.shock_index, spec.outcome_index));
}

double RegressionFit::coef(const std::string& name) const { return coefficients(index(name)); }

int RegressionFit::index(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error("no coefficient named '" + name + "'");
    return static_cast<int>(it - names.begin());
}

VectorXd RegressionFit::se_hac() const { return vcov_hac.diagonal().cwiseMax(0.0).cwiseSqrt(); }
VectorXd RegressionFit::se_ehw() const { return vcov_ehw.diagonal().cwiseMax(0.0).cwiseSqrt(); }

RegressionFit ols(const MatrixXd& X, const VectorXd& y, const std::vector<std::string>& names,
                  double cond_limit) {
    const Eigen::Index n = X.rows(), k = X.cols();
    if (y.size() != n) throw Error("ols: X and y have different row counts");
    if (k == 0) throw Error("ols: design has no columns");
    if (n <= k) throw Error("ols: fewer observations than regressors");
    auto col_name = [&](Eigen::Index c) {
        return static_cast<std::size_t>(c) < names.size() ? names[c] : "x" + std::to_string(c + 1);
    };

    const MatrixXd gram = X.transpose() * X;
    VectorXd scale(k);
    for (Eigen::Index c = 0; c < k; ++c) {
        if (!(gram(c, c) > 0.0)) throw Error("ols: rank deficient, column '" + col_name(c) + "' is zero");
        scale(c) = 1.0 / std::sqrt(gram(c, c));
    }
    const MatrixXd corr = scale.asDiagonal() * gram * scale.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(corr);
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(k - 1);
    if (!(lo > 0.0) || hi / lo > cond_limit) {
        const VectorXd v = es.eigenvectors().col(0).cwiseAbs();
        std::ostringstream msg;
        msg << "ols: rank deficient design (condition number "
            << (lo > 0.0 ? hi / lo : INFINITY) << "), collinear columns:";
        for (Eigen::Index c = 0; c < k; ++c)
            if (v(c) > 0.1 * v.maxCoeff()) msg << " '" << col_name(c) << "'";
        throw Error(msg.str());
    }

    RegressionFit fit;
    fit.names = names;
    if (fit.names.size() != static_cast<std::size_t>(k)) {
        fit.names.clear();
        for (Eigen::Index c = 0; c < k; ++c) fit.names.push_back(col_name(c));
    }
    fit.coefficients = X.householderQr().solve(y);
    fit.residuals = y - X * fit.coefficients;
    fit.gram = gram / static_cast<double>(n);
    fit.T_h = n;
    fit.restricted.assign(static_cast<std::size_t>(k), false);
    return fit;
}

int default_bandwidth(Eigen::Index T_h) {
    return static_cast<int>(std::floor(0.75 * std::cbrt(static_cast<double>(T_h))));
}

double bartlett_weight(int m, int bandwidth) {
    if (bandwidth <= 0 || m >= bandwidth) return 0.0;
    return 1.0 - static_cast<double>(m) / bandwidth;
}

MatrixXd hac_lrv(const MatrixXd& scores, int bandwidth) {
    const Eigen::Index T = scores.rows();
    if (bandwidth < 0) throw Error("hac: bandwidth must be non-negative");
    if (bandwidth >= T) throw Error("hac: bandwidth must be smaller than the sample size");
    const double inv_t = 1.0 / static_cast<double>(T);
    MatrixXd omega = scores.transpose() * scores * inv_t;
    for (int m = 1; m < bandwidth; ++m) {
        const MatrixXd g =
            scores.bottomRows(T - m).transpose() * scores.topRows(T - m) * inv_t;
        omega += bartlett_weight(m, bandwidth) * (g + g.transpose());
    }
    return 0.5 * (omega + omega.transpose());
}

MatrixXd ehw_vcov(const MatrixXd& X, const VectorXd& residuals) {
    const double T = static_cast<double>(X.rows());
    const MatrixXd scores = X.array().colwise() * residuals.array();
    const MatrixXd q = X.transpose() * X / T;
    const MatrixXd qinv = q.ldlt().solve(MatrixXd::Identity(q.rows(), q.cols()));
    const MatrixXd v = qinv * (scores.transpose() * scores / T) * qinv / T;
    return 0.5 * (v + v.transpose());
}

RegressionFit fit_lp(const Design& design, const DesignSpec& spec) {
    const auto k = static_cast<Eigen::Index>(design.names.size());
    std::vector<bool> dropped(static_cast<std::size_t>(k), false);
    for (const auto& name : spec.restrict) {
        auto it = std::find(design.names.begin(), design.names.end(), name);
        if (it == design.names.end()) throw Error("restrict: no coefficient named '" + name + "'");
        dropped[static_cast<std::size_t>(it - design.names.begin())] = true;
    }
    std::vector<Eigen::Index> keep;
    std::vector<std::string> keep_names;
    for (Eigen::Index c = 0; c < k; ++c)
        if (!dropped[static_cast<std::size_t>(c)]) {
            keep.push_back(c);
            keep_names.push_back(design.names[c]);
        }
    const MatrixXd X = keep.size() == static_cast<std::size_t>(k) ? design.X : design.X(Eigen::all, keep);

    RegressionFit r = ols(X, design.y, keep_names);
    const double T = static_cast<double>(r.T_h);
    r.bandwidth = spec.bandwidth < 0 ? default_bandwidth(r.T_h) : spec.bandwidth;
    const MatrixXd scores = X.array().colwise() * r.residuals.array();
    r.hac_lrv = hac_lrv(scores, r.bandwidth);
    const MatrixXd qinv = r.gram.ldlt().solve(MatrixXd::Identity(r.gram.rows(), r.gram.cols()));
    MatrixXd vh = qinv * r.hac_lrv * qinv / T;
    MatrixXd ve = qinv * (scores.transpose() * scores / T) * qinv / T;

    // Re-embed into the full column layout with zero rows for restrictions.
    RegressionFit full;
    full.names = design.names;
    full.coefficients = VectorXd::Zero(k);
    full.gram = MatrixXd::Zero(k, k);
    full.hac_lrv = MatrixXd::Zero(k, k);
    full.vcov_hac = MatrixXd::Zero(k, k);
    full.vcov_ehw = MatrixXd::Zero(k, k);
    const auto nk = static_cast<Eigen::Index>(keep.size());
    for (Eigen::Index a = 0; a < nk; ++a) {
        full.coefficients(keep[a]) = r.coefficients(a);
        for (Eigen::Index b = 0; b < nk; ++b) {
            full.gram(keep[a], keep[b]) = r.gram(a, b);
            full.hac_lrv(keep[a], keep[b]) = r.hac_lrv(a, b);
            full.vcov_hac(keep[a], keep[b]) = 0.5 * (vh(a, b) + vh(b, a));
            full.vcov_ehw(keep[a], keep[b]) = 0.5 * (ve(a, b) + ve(b, a));
        }
    }
    full.residuals = std::move(r.residuals);
    full.T_h = r.T_h;
    full.bandwidth = r.bandwidth;
    full.restricted = dropped;
    full.spec = design.spec;
    full.h = design.h;
    full.n_states = design.n_states;
    full.slots = design.slots;
    return full;
}

RegressionFit fit_lp(const DesignSpec& spec, const LpData& data) {
    return fit_lp(build_design(spec, data), spec);
}

VectorXd irf_gradient(const RegressionFit& fit, const VectorXd& z, double delta) {
    VectorXd g = VectorXd::Zero(fit.coefficients.size());
    const IrfSlots& s = fit.slots;
    auto need_z = [&] {
        if (z.size() != fit.n_states)
            throw Error("irf: state vector has dimension " + std::to_string(z.size()) +
                        ", expected " + std::to_string(fit.n_states));
    };
    switch (fit.spec) {
        case SpecKind::Linear:
            g(s.u) = delta;
            break;
        case SpecKind::AsymLP:
            g(delta > 0.0 ? s.pos_u : s.neg_u) = delta;
            break;
        case SpecKind::Mixed: {
            need_z();
            const bool pos = delta > 0.0;
            g(pos ? s.pos_u : s.neg_u) = delta;
            const auto& zu = pos ? s.pos_zu : s.neg_zu;
            for (std::size_t k = 0; k < zu.size(); ++k) g(zu[k]) = z(static_cast<Eigen::Index>(k)) * delta;
            break;
        }
        case SpecKind::LagLP:
        case SpecKind::Feas:
        case SpecKind::Infeas:
        case SpecKind::InfeasCond2:
            need_z();
            g(s.u) = delta;
            for (std::size_t k = 0; k < s.zu.size(); ++k) g(s.zu[k]) = z(static_cast<Eigen::Index>(k)) * delta;
            if (s.u2 >= 0) g(s.u2) = delta * delta;
            break;
        case SpecKind::InfeasCond1:
            g(s.region_u) = delta;
            g(s.u2) = delta * delta;
            break;
    }
    return g;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error("normal quantile needs p in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

IrfEstimate irf_ci(const RegressionFit& fit, const VectorXd& z, double delta, double level) {
    if (!(level > 0.0 && level < 1.0)) throw Error("irf: confidence level must be in (0, 1)");
    IrfEstimate e{};
    e.gradient = irf_gradient(fit, z, delta);
    e.value = e.gradient.dot(fit.coefficients);
    e.std_error = std::sqrt(std::max(0.0, e.gradient.dot(fit.vcov_hac * e.gradient)));
    const double q = normal_quantile(0.5 + 0.5 * level);
    e.conf_low = e.value - q * e.std_error;
    e.conf_high = e.value + q * e.std_error;
    e.level = level;
    return e;
}

QvarParams ehw_counterexample(double a, double rho, double b) {
    MatrixXd phi1 = MatrixXd::Zero(2, 2);
    phi1(0, 1) = a;
    MatrixXd phi2 = MatrixXd::Zero(2, 3);
    phi2(0, 2) = b;  // vech(s s') = (s1^2, s1 s2, s2^2)
    MatrixXd sigma(2, 2);
    sigma << 1.0, rho, rho, 1.0;
    return QvarParams(phi1, phi2, MatrixXd::Zero(2, 2), sigma);
}

McEstimate score_lag1_autocov(const QvarParams& p, int h, int i, int j, Eigen::Index T,
                              std::uint64_t seed, int burn_in) {
    const QvarPath path = simulate_qvar(p, T, burn_in, seed);
    DesignSpec spec;
    spec.spec = SpecKind::Feas;
    spec.h = h;
    spec.shock_index = i;
    spec.outcome_index = j;
    const Design d = build_design(spec, path);
    const RegressionFit fit = fit_lp(d, spec);

    VectorXd psi = d.X.col(d.slots.u2).cwiseProduct(fit.residuals);
    psi.array() -= psi.mean();
    const Eigen::Index n = psi.size();
    const VectorXd prod = psi.tail(n - 1).cwiseProduct(psi.head(n - 1));
    const double est = prod.sum() / static_cast<double>(n);

    MatrixXd centred = prod.array() - prod.mean();
    const double lrv = hac_lrv(centred, default_bandwidth(centred.rows()))(0, 0);
    return {est, std::sqrt(std::max(0.0, lrv) / static_cast<double>(centred.rows()))};
}

}  // namespace lplab
