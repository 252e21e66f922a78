#include "lplab/population.hpp"

#include "lplab/rng.hpp"

#include <cmath>
#include <numbers>

namespace lplab {

namespace {

const std::vector<std::pair<SpecKind, std::string>>& spec_names() {
    static const std::vector<std::pair<SpecKind, std::string>> names = {
        {SpecKind::Linear, "Linear"},         {SpecKind::AsymLP, "AsymLP"},
        {SpecKind::LagLP, "LagLP"},           {SpecKind::Mixed, "Mixed"},
        {SpecKind::Feas, "Feas"},             {SpecKind::Infeas, "Infeas"},
        {SpecKind::InfeasCond1, "InfeasCond1"}, {SpecKind::InfeasCond2, "InfeasCond2"}};
    return names;
}

template <class... Ts>
struct Overload : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

[[noreturn]] void mismatch(SpecKind spec, const char* expected) {
    throw Error("conditioning mismatch: " + to_string(spec) + " expects " + expected);
}

VectorXd vech_unchecked(const MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    VectorXd out(vech_size(n));
    int k = 0;
    for (int c = 0; c < n; ++c)
        for (int r = c; r < n; ++r) out(k++) = m(r, c);
    return out;
}

}  // namespace

std::string to_string(SpecKind k) {
    for (const auto& [kind, name] : spec_names())
        if (kind == k) return name;
    return "?";
}

SpecKind parse_spec(const std::string& name) {
    for (const auto& [kind, label] : spec_names())
        if (label == name) return kind;
    if (name == "Infeas-Cond1") return SpecKind::InfeasCond1;
    if (name == "Infeas-Cond2") return SpecKind::InfeasCond2;
    throw Error("unknown specification '" + name + "'");
}

double PopulationIrf::at(const std::string& name) const {
    auto it = coefficients.find(name);
    if (it == coefficients.end())
        throw Error(to_string(spec) + " has no coefficient '" + name + "'");
    return it->second;
}

double car(const QarParams& p, double s, double delta, int h) {
    const HorizonCoeffs c = horizon_coeffs(p, h);
    return c.baseline * delta + c.a_h * s * delta + c.q_h * delta * delta;
}

double cmr(const QarParams& p, double s, int h) {
    const HorizonCoeffs c = horizon_coeffs(p, h);
    return c.baseline + c.a_h * s;
}

double girf_offset(const QarParams& p, int h) {
    // phi2 phi1^(h-1) (1 - phi1^h)/(1 - phi1) sigma^2, zero at impact
    return horizon_coeffs(p, h).q_h;
}

double girf(const QarParams& p, double s, double delta, int h) {
    return car(p, s, delta, h) - girf_offset(p, h);
}

PopulationIrf pop_irf(SpecKind spec, const QarParams& p, int h) {
    const HorizonCoeffs c = horizon_coeffs(p, h);
    PopulationIrf out{spec, h, {}};
    switch (spec) {
        case SpecKind::Linear:
            out.coefficients["beta"] = c.baseline;
            break;
        case SpecKind::AsymLP: {
            const double m = asym_m();
            out.coefficients["beta_plus"] = c.baseline + m * c.q_h;
            out.coefficients["beta_minus"] = c.baseline - m * c.q_h;
            break;
        }
        case SpecKind::LagLP:
        case SpecKind::Feas: {
            const QarMoments mom = qar_moments(p);
            const double beta1 = c.a_h * mom.var_s / mom.var_y;
            const double beta0 = c.baseline - beta1 * mom.mean_y;
            if (spec == SpecKind::LagLP) {
                out.coefficients["beta0"] = beta0;
                out.coefficients["beta1"] = beta1;
            } else {
                out.coefficients["theta1"] = beta0;
                out.coefficients["theta2"] = beta1;
                out.coefficients["theta3"] = c.q_h;
            }
            break;
        }
        case SpecKind::Infeas:
            out.coefficients["kappa1"] = c.baseline;
            out.coefficients["kappa2"] = c.a_h;
            out.coefficients["kappa3"] = c.q_h;
            break;
        case SpecKind::Mixed:
            throw Error("Mixed has no population IRF formula; it can only be estimated");
        case SpecKind::InfeasCond1:
        case SpecKind::InfeasCond2:
            throw Error(to_string(spec) + " population IRFs are QVAR objects; use ccar");
    }
    return out;
}

double irf_value(const PopulationIrf& irf, const Conditioning& z, double delta) {
    switch (irf.spec) {
        case SpecKind::Linear:
            if (!std::holds_alternative<NoState>(z)) mismatch(irf.spec, "no conditioning");
            return irf.at("beta") * delta;
        case SpecKind::AsymLP: {
            bool positive = delta > 0.0;
            if (const auto* sign = std::get_if<SignState>(&z))
                positive = sign->positive;
            else if (!std::holds_alternative<NoState>(z))
                mismatch(irf.spec, "a sign state");
            return (positive ? irf.at("beta_plus") : irf.at("beta_minus")) * delta;
        }
        case SpecKind::LagLP: {
            const auto* y = std::get_if<ProxyState>(&z);
            if (!y) mismatch(irf.spec, "the lagged outcome");
            return (irf.at("beta0") + irf.at("beta1") * y->y) * delta;
        }
        case SpecKind::Feas: {
            const auto* y = std::get_if<ProxyState>(&z);
            if (!y) mismatch(irf.spec, "the lagged outcome");
            return (irf.at("theta1") + irf.at("theta2") * y->y) * delta +
                   irf.at("theta3") * delta * delta;
        }
        case SpecKind::Infeas: {
            const auto* s = std::get_if<LatentState>(&z);
            if (!s) mismatch(irf.spec, "the latent state");
            return (irf.at("kappa1") + irf.at("kappa2") * s->s) * delta +
                   irf.at("kappa3") * delta * delta;
        }
        default:
            throw Error(to_string(irf.spec) + " has no QAR population IRF evaluator");
    }
}

double irf_value(SpecKind spec, const QarParams& p, const Conditioning& z, double delta, int h) {
    return irf_value(pop_irf(spec, p, h), z, delta);
}

double kp_weight(double u) {
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

VectorXd qvar_car(const QvarParams& p, const VectorXd& s, double delta_i, int i, int h) {
    const int n = p.n();
    if (s.size() != n) throw Error("qvar_car: state has wrong dimension");
    if (i < 0 || i >= n) throw Error("qvar_car: shock index out of range");
    if (h < 0) throw Error("qvar_car: horizon must be non-negative");

    const VectorXd d = p.sigma_tr().col(i) * delta_i;
    const VectorXd impact = (VectorXd::Ones(n) + p.gamma() * s).cwiseProduct(d);
    if (h == 0) return impact;

    // powers[k] = Phi1^k
    std::vector<MatrixXd> powers(h + 1);
    powers[0] = MatrixXd::Identity(n, n);
    for (int k = 1; k <= h; ++k) powers[k] = p.phi1() * powers[k - 1];

    VectorXd out = powers[h] * impact;
    for (int k = 1; k <= h; ++k) {
        const VectorXd mean_k = powers[k] * s;      // E[s_{t+k-1} | s_{t-1}]
        const VectorXd shift_k = powers[k - 1] * d;  // response of s_{t+k-1}
        const MatrixXd outer = mean_k * shift_k.transpose() + shift_k * mean_k.transpose() +
                               shift_k * shift_k.transpose();
        out += powers[h - k] * (p.phi2() * vech_unchecked(outer));
    }
    return out;
}

double qvar_linear_pop_irf(const QvarParams& p, int i, int j, int h) {
    const int n = p.n();
    if (i < 0 || i >= n || j < 0 || j >= n) throw Error("index out of range");
    if (h < 0) throw Error("horizon must be non-negative");
    MatrixXd m = p.sigma_tr();
    for (int k = 0; k < h; ++k) m = p.phi1() * m;
    return m(j, i);
}

QvarInfeasIrf qvar_infeas_pop_irf(const QvarParams& p, int i, int j, int h) {
    const int n = p.n();
    if (i < 0 || i >= n || j < 0 || j >= n) throw Error("index out of range");
    if (h < 0) throw Error("horizon must be non-negative");
    std::vector<MatrixXd> powers(h + 1);
    powers[0] = MatrixXd::Identity(n, n);
    for (int k = 1; k <= h; ++k) powers[k] = p.phi1() * powers[k - 1];
    const VectorXd b = p.sigma_tr().col(i);

    QvarInfeasIrf out{(powers[h] * b)(j), VectorXd::Zero(n), 0.0};
    // kappa2 column c: response to s = e_c, linear in s
    for (int c = 0; c < n; ++c) {
        VectorXd acc = powers[h] * b.cwiseProduct(p.gamma().col(c));
        for (int k = 1; k <= h; ++k) {
            const VectorXd m = powers[k].col(c);
            const VectorXd sh = powers[k - 1] * b;
            acc += powers[h - k] * (p.phi2() * vech_unchecked(m * sh.transpose() + sh * m.transpose()));
        }
        out.kappa2(c) = acc(j);
    }
    for (int k = 1; k <= h; ++k) {
        const VectorXd sh = powers[k - 1] * b;
        out.kappa3 += (powers[h - k] * (p.phi2() * vech_unchecked(sh * sh.transpose())))(j);
    }
    return out;
}

VectorXd conditional_state_mean(const QvarParams& p, const std::vector<int>& index,
                                const VectorXd& c0) {
    const int n = p.n();
    if (static_cast<Eigen::Index>(index.size()) != c0.size() || index.empty())
        throw Error("slice: index set and values must be non-empty and of equal length");
    for (int k : index)
        if (k < 0 || k >= n) throw Error("slice: index out of range");
    const MatrixXd v = stationary_state_variance(p);
    const auto m = static_cast<Eigen::Index>(index.size());
    MatrixXd v_all_i(n, m), v_ii(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        v_all_i.col(a) = v.col(index[a]);
        for (Eigen::Index b = 0; b < m; ++b) v_ii(a, b) = v(index[a], index[b]);
    }
    return v_all_i * v_ii.ldlt().solve(c0);
}

CcarResult ccar(const QvarParams& p, const StateRegion& region, double delta_i, int i, int h) {
    const int n = p.n();
    if (const auto* slice = std::get_if<SliceRegion>(&region)) {
        const VectorXd mean = conditional_state_mean(p, slice->index, slice->c0);
        return {qvar_car(p, mean, delta_i, i, h), VectorXd::Zero(n), 0.0};
    }

    const auto& ind = std::get<IndicatorRegion>(region);
    if (!ind.contains) throw Error("ccar: indicator region has no predicate");
    if (ind.n_draws < 1) throw Error("ccar: need at least one draw");
    const MatrixXd v = stationary_state_variance(p);
    Eigen::LLT<MatrixXd> llt(v);
    if (llt.info() != Eigen::Success) throw Error("ccar: stationary state variance not PD");
    const MatrixXd chol = llt.matrixL();

    Rng rng(ind.seed, 0, "ccar-states");
    VectorXd z(n), s(n);
    VectorXd sum = VectorXd::Zero(n), sum_sq = VectorXd::Zero(n);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < ind.n_draws; ++k) {
        rng.fill_normal(z.data(), static_cast<std::size_t>(n));
        s = chol * z;
        if (!ind.contains(s)) continue;
        const VectorXd r = qvar_car(p, s, delta_i, i, h);
        sum += r;
        sum_sq += r.cwiseProduct(r);
        ++hits;
    }
    const double prob = static_cast<double>(hits) / static_cast<double>(ind.n_draws);
    if (prob < 1e-4)
        throw Error("ccar: region probability " + std::to_string(prob) +
                    " is below 1e-4; Monte Carlo average unreliable");
    const double nh = static_cast<double>(hits);
    const VectorXd mean = sum / nh;
    VectorXd var = (sum_sq / nh - mean.cwiseProduct(mean)).cwiseMax(0.0);
    if (hits > 1) var *= nh / (nh - 1.0);
    return {mean, (var / nh).cwiseSqrt(), prob};
}

}  // namespace lplab
