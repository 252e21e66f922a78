#include "lplab/distance.hpp"

#include "lplab/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lplab {

namespace {

void check_distance_spec(SpecKind spec) {
    switch (spec) {
        case SpecKind::Linear:
        case SpecKind::AsymLP:
        case SpecKind::LagLP:
        case SpecKind::Feas:
        case SpecKind::Infeas:
            return;
        default:
            throw Error("distance: " + to_string(spec) + " has no population IRF to compare");
    }
}

void check_loss_spec(SpecKind spec) {
    switch (spec) {
        case SpecKind::Linear:
        case SpecKind::AsymLP:
        case SpecKind::LagLP:
        case SpecKind::Feas:
            return;
        default:
            throw Error("analytic loss: not available for " + to_string(spec));
    }
}

// Conditioning for observation t given (s_{t-1}, y_{t-1}, u_t).
Conditioning conditioning_for(SpecKind spec, double s_lag, double y_lag, double u) {
    switch (spec) {
        case SpecKind::AsymLP:
            return SignState{u > 0.0};
        case SpecKind::LagLP:
        case SpecKind::Feas:
            return ProxyState{y_lag};
        case SpecKind::Infeas:
            return LatentState{s_lag};
        default:
            return NoState{};
    }
}

}  // namespace

double per_obs_delta(const QarParams& p, double s, double u, const Conditioning& z, SpecKind spec,
                     int H) {
    check_distance_spec(spec);
    if (H < 0) throw Error("distance: H must be non-negative");
    double acc = 0.0;
    for (int h = 0; h <= H; ++h) {
        const double d = car(p, s, u, h) - irf_value(spec, p, z, u, h);
        acc += d * d;
    }
    return acc;
}

std::vector<PopulationIrf> population_irfs(SpecKind spec, const QarParams& p, int H) {
    check_distance_spec(spec);
    if (H < 0) throw Error("distance: H must be non-negative");
    std::vector<PopulationIrf> out;
    for (int h = 0; h <= H; ++h) out.push_back(pop_irf(spec, p, h));
    return out;
}

std::vector<PopulationIrf> estimated_irfs(SpecKind spec, const SimulatedPath& path, int H) {
    check_distance_spec(spec);
    std::vector<PopulationIrf> out;
    for (int h = 0; h <= H; ++h) {
        DesignSpec ds;
        ds.spec = spec;
        ds.h = h;
        ds.bandwidth = 0;
        const RegressionFit f = fit_lp(ds, lp_data(path));
        PopulationIrf irf{spec, h, {}};
        switch (spec) {
            case SpecKind::Linear:
                irf.coefficients["beta"] = f.coef("u");
                break;
            case SpecKind::AsymLP:
                irf.coefficients["beta_plus"] = f.coef("S*u");
                irf.coefficients["beta_minus"] = f.coef("(1-S)*u");
                break;
            case SpecKind::LagLP:
                irf.coefficients["beta0"] = f.coef("u");
                irf.coefficients["beta1"] = f.coef("u*L1.y");
                break;
            case SpecKind::Feas:
                irf.coefficients["theta1"] = f.coef("u");
                irf.coefficients["theta2"] = f.coef("u*L1.y");
                irf.coefficients["theta3"] = f.coef("u^2");
                break;
            case SpecKind::Infeas:
                irf.coefficients["kappa1"] = f.coef("u");
                irf.coefficients["kappa2"] = f.coef("u*L1.s");
                irf.coefficients["kappa3"] = f.coef("u^2");
                break;
            default:
                break;
        }
        out.push_back(std::move(irf));
    }
    return out;
}

VectorXd path_deltas(const SimulatedPath& path, const QarParams& p,
                     const std::vector<PopulationIrf>& irfs) {
    if (irfs.empty()) throw Error("distance: no IRF horizons supplied");
    const Eigen::Index T = path.size();
    if (T < 2) throw Error("distance: path needs at least two observations");
    const SpecKind spec = irfs.front().spec;
    const int H = static_cast<int>(irfs.size()) - 1;
    std::vector<HorizonCoeffs> hc;
    for (int h = 0; h <= H; ++h) hc.push_back(horizon_coeffs(p, h));

    VectorXd out(T - 1);
    for (Eigen::Index t = 1; t < T; ++t) {
        const double s = path.s(t - 1), y = path.y(t - 1), u = path.u(t);
        const Conditioning z = conditioning_for(spec, s, y, u);
        double acc = 0.0;
        for (int h = 0; h <= H; ++h) {
            const HorizonCoeffs& c = hc[h];
            const double truth = c.baseline * u + c.a_h * s * u + c.q_h * u * u;
            const double d = truth - irf_value(irfs[h], z, u);
            acc += d * d;
        }
        out(t - 1) = acc;
    }
    return out;
}

double unconditional_distance(const SimulatedPath& path, const QarParams& p,
                              const std::vector<PopulationIrf>& irfs) {
    return std::sqrt(path_deltas(path, p, irfs).mean());
}

double unconditional_distance(const SimulatedPath& path, SpecKind spec, const QarParams& p, int H) {
    return unconditional_distance(path, p, population_irfs(spec, p, H));
}

VectorXd axis_values(const SimulatedPath& path, BinAxis axis) {
    const Eigen::Index T = path.size();
    return axis == BinAxis::State ? VectorXd(path.s.head(T - 1)) : VectorXd(path.u.tail(T - 1));
}

std::vector<DistanceBin> binned_distance(const SimulatedPath& path, const QarParams& p,
                                         const std::vector<PopulationIrf>& irfs, BinAxis axis,
                                         const std::vector<double>& edges) {
    if (edges.size() < 2) throw Error("binned distance: need at least two edges");
    for (std::size_t k = 1; k < edges.size(); ++k)
        if (!(edges[k] > edges[k - 1])) throw Error("binned distance: edges must be strictly increasing");

    const VectorXd deltas = path_deltas(path, p, irfs);
    const VectorXd x = axis_values(path, axis);
    const std::size_t nb = edges.size() - 1;
    std::vector<double> sum(nb, 0.0);
    std::vector<std::size_t> count(nb, 0);
    for (Eigen::Index t = 0; t < x.size(); ++t) {
        const double v = x(t);
        if (v < edges.front() || v > edges.back()) continue;
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        std::size_t b = static_cast<std::size_t>(it - edges.begin());
        b = b == 0 ? 0 : b - 1;
        if (b >= nb) b = nb - 1;
        sum[b] += deltas(t);
        ++count[b];
    }
    std::vector<DistanceBin> out;
    for (std::size_t b = 0; b < nb; ++b) {
        DistanceBin bin{edges[b], edges[b + 1], count[b], std::nullopt};
        if (count[b] > 0) bin.distance = std::sqrt(sum[b] / static_cast<double>(count[b]));
        out.push_back(bin);
    }
    return out;
}

std::vector<DistanceBin> binned_distance(const SimulatedPath& path, SpecKind spec,
                                         const QarParams& p, int H, BinAxis axis,
                                         const std::vector<double>& edges) {
    return binned_distance(path, p, population_irfs(spec, p, H), axis, edges);
}

std::vector<double> equal_probability_edges(const VectorXd& values, int nbins) {
    if (nbins < 1) throw Error("bins: need at least one bin");
    if (values.size() < nbins) throw Error("bins: fewer observations than bins");
    std::vector<double> v(values.data(), values.data() + values.size());
    std::sort(v.begin(), v.end());
    std::vector<double> edges{-std::numeric_limits<double>::infinity()};
    for (int k = 1; k < nbins; ++k) {
        const double pos = static_cast<double>(k) / nbins * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(lo);
        const double q = lo + 1 < v.size() ? v[lo] + frac * (v[lo + 1] - v[lo]) : v[lo];
        if (q > edges.back()) edges.push_back(q);
    }
    edges.push_back(std::numeric_limits<double>::infinity());
    return edges;
}

DistanceReport distance_report(const SimulatedPath& path, SpecKind spec, const QarParams& p,
                               int H, int nbins) {
    const auto irfs = population_irfs(spec, p, H);
    DistanceReport r;
    r.spec = spec;
    r.overall = unconditional_distance(path, p, irfs);
    r.s_bins = binned_distance(path, p, irfs, BinAxis::State,
                               equal_probability_edges(axis_values(path, BinAxis::State), nbins));
    r.u_bins = binned_distance(path, p, irfs, BinAxis::Shock,
                               equal_probability_edges(axis_values(path, BinAxis::Shock), nbins));
    r.H = H;
    r.params = p;
    r.seed = path.seed;
    return r;
}

double analytic_loss_u(SpecKind spec, const QarParams& p, int h, double delta) {
    check_loss_spec(spec);
    const HorizonCoeffs c = horizon_coeffs(p, h);
    const QarMoments m = qar_moments(p);
    const double a2d2 = c.a_h * c.a_h * delta * delta;
    const double q2 = c.q_h * c.q_h;
    const double d2 = delta * delta;
    switch (spec) {
        case SpecKind::Linear:
            return a2d2 * m.var_s + q2 * d2 * d2;
        case SpecKind::AsymLP: {
            const double r = d2 - asym_m() * std::abs(delta);
            return a2d2 * m.var_s + q2 * r * r;
        }
        case SpecKind::LagLP:
            return a2d2 * m.var_s_given_y + q2 * d2 * d2;
        default:
            return a2d2 * m.var_s_given_y;
    }
}

double analytic_loss_s(SpecKind spec, const QarParams& p, int h, double s, std::optional<double> xi) {
    check_loss_spec(spec);
    const HorizonCoeffs c = horizon_coeffs(p, h);
    const double a2 = c.a_h * c.a_h, q2 = c.q_h * c.q_h;
    switch (spec) {
        case SpecKind::Linear:
            return a2 * s * s + 3.0 * q2;
        case SpecKind::AsymLP:
            return a2 * s * s + nu_m() * q2;
        default:
            if (!xi) throw Error("analytic loss: " + to_string(spec) + " needs Xi(s)");
            return spec == SpecKind::LagLP ? a2 * *xi + 3.0 * q2 : a2 * *xi;
    }
}

McEstimate xi_estimate(const QarParams& p, double s, std::size_t n_draws, std::uint64_t seed) {
    const QarMoments m = qar_moments(p);
    const ConditionalDraws draws = conditional_state_sampler(p, s, n_draws, default_trunc_j(p), seed);
    const VectorXd err = (s - m.proxy_slope * (draws.y.array() - m.mean_y)).square().matrix();
    const double n = static_cast<double>(err.size());
    const double mean = err.mean();
    const double var = n > 1.0 ? (err.array() - mean).square().sum() / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

AnalyticLoss analytic_loss_curve(SpecKind spec, const QarParams& p, int h, LossKind kind,
                                 const std::vector<double>& points,
                                 const std::function<double(double)>& xi) {
    AnalyticLoss out{spec, h, kind, {}};
    for (double x : points) {
        double v;
        if (kind == LossKind::Shock) {
            v = analytic_loss_u(spec, p, h, x);
        } else if (spec == SpecKind::LagLP || spec == SpecKind::Feas) {
            if (!xi) throw Error("analytic loss: " + to_string(spec) + " needs a Xi(s) estimator");
            v = analytic_loss_s(spec, p, h, x, xi(x));
        } else {
            v = analytic_loss_s(spec, p, h, x);
        }
        out.grid.emplace_back(x, v);
    }
    return out;
}

}  // namespace lplab
