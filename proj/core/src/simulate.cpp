#include "lplab/simulate.hpp"

#include "lplab/parallel.hpp"

#include <cmath>
#include <vector>

namespace lplab {

namespace {

constexpr std::size_t kMcBlocks = 64;

// One QAR step; the operation order is shared with the n = 1 QVAR step so the
// two simulators agree bit for bit.
inline void qar_step(const QarParams& p, double& y, double& s, double u) {
    const double eta = p.sigma * u;
    const double y_new = p.phi1 * y + p.phi2 * (s * s) + (1.0 + p.gamma * s) * eta;
    s = p.phi1 * s + eta;
    y = y_new;
}

struct QvarStepper {
    const QvarParams& p;
    VectorXd eta, quad, y_new;

    explicit QvarStepper(const QvarParams& params)
        : p(params), eta(params.n()), quad(vech_size(params.n())), y_new(params.n()) {}

    void step(VectorXd& y, VectorXd& s, const double* u) {
        const int n = p.n();
        const MatrixXd& tr = p.sigma_tr();
        for (int r = 0; r < n; ++r) {
            double acc = 0.0;
            for (int c = 0; c <= r; ++c) acc += tr(r, c) * u[c];
            eta(r) = acc;
        }
        int k = 0;
        for (int c = 0; c < n; ++c)
            for (int r = c; r < n; ++r) quad(k++) = s(r) * s(c);
        for (int r = 0; r < n; ++r) {
            double acc = 0.0;
            for (int c = 0; c < n; ++c) acc += p.phi1()(r, c) * y(c);
            for (int l = 0; l < quad.size(); ++l) acc += p.phi2()(r, l) * quad(l);
            double scale = 0.0;
            for (int c = 0; c < n; ++c) scale += p.gamma()(r, c) * s(c);
            acc += (1.0 + scale) * eta(r);
            y_new(r) = acc;
        }
        VectorXd s_new(n);
        for (int r = 0; r < n; ++r) {
            double acc = 0.0;
            for (int c = 0; c < n; ++c) acc += p.phi1()(r, c) * s(c);
            s_new(r) = acc + eta(r);
        }
        s = s_new;
        y = y_new;
    }
};

}  // namespace

SimulatedPath simulate_qar(const QarParams& p, Eigen::Index T, int burn_in, std::uint64_t seed) {
    p.validate();
    if (T < 1) throw Error("simulate: T must be at least 1");
    if (burn_in < 0) throw Error("simulate: burn_in must be non-negative");

    SimulatedPath path;
    path.y.resize(T);
    path.s.resize(T);
    path.u.resize(T);
    path.burn_in = burn_in;
    path.seed = seed;
    path.params = p;

    Rng rng(seed, 0, "path");
    double y = 0.0, s = 0.0;
    for (int t = 0; t < burn_in; ++t) qar_step(p, y, s, rng.normal());
    for (Eigen::Index t = 0; t < T; ++t) {
        const double u = rng.normal();
        qar_step(p, y, s, u);
        path.y(t) = y;
        path.s(t) = s;
        path.u(t) = u;
    }
    return path;
}

QvarPath simulate_qvar(const QvarParams& p, Eigen::Index T, int burn_in, std::uint64_t seed) {
    if (T < 1) throw Error("simulate: T must be at least 1");
    if (burn_in < 0) throw Error("simulate: burn_in must be non-negative");
    const int n = p.n();

    QvarPath path;
    path.y.resize(T, n);
    path.s.resize(T, n);
    path.u.resize(T, n);
    path.burn_in = burn_in;
    path.seed = seed;

    Rng rng(seed, 0, "path");
    QvarStepper stepper(p);
    VectorXd y = VectorXd::Zero(n), s = VectorXd::Zero(n);
    std::vector<double> u(n);
    for (int t = 0; t < burn_in; ++t) {
        rng.fill_normal(u.data(), u.size());
        stepper.step(y, s, u.data());
    }
    for (Eigen::Index t = 0; t < T; ++t) {
        rng.fill_normal(u.data(), u.size());
        stepper.step(y, s, u.data());
        path.y.row(t) = y.transpose();
        path.s.row(t) = s.transpose();
        for (int c = 0; c < n; ++c) path.u(t, c) = u[c];
    }
    return path;
}

McEstimate mc_average(std::size_t n_draws, std::uint64_t seed, std::string_view purpose,
                      const std::function<double(Rng&)>& draw) {
    if (n_draws < 1) throw Error("Monte Carlo average needs at least one draw");
    const std::size_t blocks = std::min(kMcBlocks, n_draws);
    std::vector<double> mean(blocks, 0.0), m2(blocks, 0.0);
    std::vector<std::size_t> count(blocks, 0);

    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t nb = n_draws / blocks + (b < n_draws % blocks ? 1 : 0);
        Rng rng(seed, b, purpose);
        double mu = 0.0, ss = 0.0;
        for (std::size_t k = 0; k < nb; ++k) {
            const double x = draw(rng);
            const double d = x - mu;
            mu += d / static_cast<double>(k + 1);
            ss += d * (x - mu);
        }
        mean[b] = mu;
        m2[b] = ss;
        count[b] = nb;
    });

    double mu = 0.0, ss = 0.0;
    double n = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        const double nb = static_cast<double>(count[b]);
        if (nb == 0.0) continue;
        const double d = mean[b] - mu;
        const double tot = n + nb;
        mu += d * nb / tot;
        ss += m2[b] + d * d * n * nb / tot;
        n = tot;
    }
    const double var = n > 1.0 ? ss / (n - 1.0) : 0.0;
    return {mu, std::sqrt(var / n)};
}

McEstimate car_oracle(const QarParams& p, double s, double delta, int h, std::size_t n_draws,
                      std::uint64_t seed) {
    p.validate();
    if (h < 0) throw Error("car_oracle: horizon must be non-negative");
    return mc_average(n_draws, seed, "car-oracle", [&](Rng& rng) {
        double ya = 0.0, sa = s, yb = 0.0, sb = s;
        const double u0 = rng.normal();
        qar_step(p, ya, sa, u0);
        qar_step(p, yb, sb, u0 + delta);
        for (int k = 1; k <= h; ++k) {
            const double u = rng.normal();
            qar_step(p, ya, sa, u);
            qar_step(p, yb, sb, u);
        }
        return yb - ya;
    });
}

McEstimate qvar_car_oracle(const QvarParams& p, const VectorXd& s, double delta_i, int i, int j,
                           int h, std::size_t n_draws, std::uint64_t seed) {
    const int n = p.n();
    if (s.size() != n) throw Error("qvar_car_oracle: state has wrong dimension");
    if (i < 0 || i >= n || j < 0 || j >= n) throw Error("qvar_car_oracle: index out of range");
    if (h < 0) throw Error("qvar_car_oracle: horizon must be non-negative");
    return mc_average(n_draws, seed, "qvar-car-oracle", [&](Rng& rng) {
        QvarStepper a(p), b(p);
        VectorXd ya = VectorXd::Zero(n), yb = VectorXd::Zero(n), sa = s, sb = s;
        std::vector<double> u(n), ub(n);
        rng.fill_normal(u.data(), u.size());
        ub = u;
        ub[i] += delta_i;
        a.step(ya, sa, u.data());
        b.step(yb, sb, ub.data());
        for (int k = 1; k <= h; ++k) {
            rng.fill_normal(u.data(), u.size());
            a.step(ya, sa, u.data());
            b.step(yb, sb, u.data());
        }
        return yb(j) - ya(j);
    });
}

int default_trunc_j(const QarParams& p) {
    const double a = std::abs(p.phi1);
    if (a == 0.0) return 1;
    return std::max(1, static_cast<int>(std::ceil(std::log(1e-12) / (2.0 * std::log(a)))));
}

ConditionalDraws conditional_state_sampler(const QarParams& p, double s, std::size_t n_draws,
                                           int trunc_j, std::uint64_t seed) {
    p.validate();
    if (trunc_j < 1) throw Error("conditional sampler: trunc_J must be at least 1");
    const double a = std::abs(p.phi1);
    if (a > 0.0 && std::pow(a, 2.0 * trunc_j) > 1e-12)
        throw Error("conditional sampler: trunc_J too small, need |phi1|^(2 J) < 1e-12 (default " +
                    std::to_string(default_trunc_j(p)) + ")");

    // c_j = phi1^j weights u_{t-1-j} in s_{t-1} / sigma.
    VectorXd c(trunc_j);
    c(0) = 1.0;
    for (int j = 1; j < trunc_j; ++j) c(j) = c(j - 1) * p.phi1;
    const double cc = c.squaredNorm();
    const double target = s / p.sigma;

    ConditionalDraws out;
    out.y.resize(static_cast<Eigen::Index>(n_draws));
    out.s.resize(static_cast<Eigen::Index>(n_draws));
    const std::size_t blocks = std::max<std::size_t>(1, std::min(kMcBlocks, n_draws));
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t lo = b * n_draws / blocks, hi = (b + 1) * n_draws / blocks;
        Rng rng(seed, b, "conditional-state");
        VectorXd u(trunc_j);
        for (std::size_t k = lo; k < hi; ++k) {
            rng.fill_normal(u.data(), static_cast<std::size_t>(trunc_j));
            u += c * ((target - c.dot(u)) / cc);
            double y = 0.0, st = 0.0;
            for (int j = trunc_j - 1; j >= 0; --j) qar_step(p, y, st, u(j));
            out.y(static_cast<Eigen::Index>(k)) = y;
            out.s(static_cast<Eigen::Index>(k)) = st;
        }
    });
    return out;
}

}  // namespace lplab
