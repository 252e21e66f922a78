// Oracle suite behind `lplab verify`. Lighter than the acceptance harness:
// fewer draws, wider MC bands (4 SE) so a user-chosen seed rarely trips it.

#include "commands.hpp"

#include "lplab/distance.hpp"
#include "lplab/parallel.hpp"
#include "lplab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace lplab::cli {

namespace {

constexpr double kSigmas = 4.0;

struct Tally {
    int run = 0, failed = 0;

    void check(bool ok, const std::string& what) {
        ++run;
        failed += !ok;
        std::printf("  %s %s\n", ok ? "PASS" : "FAIL", what.c_str());
    }
};

std::string fmt(double a, double b, double se) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.6f vs %.6f (se %.2g)", a, b, se);
    return buf;
}

}  // namespace

int run_verify(const VerifyOptions& o) {
    const QarParams p{0.5, 0.2, 0.1, 1.0};
    Tally t;

    std::printf("car_oracle grid (n=%zu):\n", o.draws);
    struct Point {
        double s, d;
        int h;
    };
    std::vector<Point> grid;
    for (double s : {-2.0, 0.0, 2.0})
        for (double d : {-1.0, 1.0, 2.0})
            for (int h : {0, 1, 5}) grid.push_back({s, d, h});
    std::vector<McEstimate> est(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) {
        est[k] = car_oracle(p, grid[k].s, grid[k].d, grid[k].h, o.draws, o.seed + k);
    });
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double truth = car(p, grid[k].s, grid[k].d, grid[k].h);
        // h = 0 points are deterministic; their SE is rounding noise
        const double tol = std::max(kSigmas * est[k].mc_se, 1e-12 * (1 + std::abs(truth)));
        char label[64];
        std::snprintf(label, sizeof label, "s=%g delta=%g h=%d: ", grid[k].s, grid[k].d, grid[k].h);
        t.check(std::abs(est[k].estimate - truth) <= tol, label + fmt(est[k].estimate, truth, est[k].mc_se));
    }

    std::printf("moments (T=1e6):\n");
    const QarMoments mom = qar_moments(p);
    const SimulatedPath path = simulate_qar(p, 1000000, kDefaultBurnIn, o.seed);
    const int B = 200;
    const Eigen::Index L = path.size() / B;
    VectorXd bm(B), bv(B);
    for (int b = 0; b < B; ++b) {
        const VectorXd seg = path.y.segment(b * L, L);
        bm(b) = seg.mean();
        bv(b) = (seg.array() - mom.mean_y).square().mean();
    }
    auto se = [&](const VectorXd& v) { return std::sqrt((v.array() - v.mean()).square().sum() / (B - 1) / B); };
    t.check(std::abs(bm.mean() - mom.mean_y) <= kSigmas * se(bm), "mean_y " + fmt(bm.mean(), mom.mean_y, se(bm)));
    t.check(std::abs(bv.mean() - mom.var_y) <= kSigmas * se(bv), "var_y " + fmt(bv.mean(), mom.var_y, se(bv)));

    std::printf("exact identities:\n");
    double infeas = 0.0;
    for (int h = 0; h <= 10; ++h)
        for (double s : {-2.0, -0.5, 0.0, 1.0, 3.0})
            for (double d : {-2.0, 0.5, 1.0})
                infeas = std::max(infeas, std::abs(irf_value(SpecKind::Infeas, p, LatentState{s}, d, h) - car(p, s, d, h)));
    t.check(infeas <= 1e-14, "Infeas IRF equals CAR");
    bool rank = true;
    double gap = 0.0;
    const double m = asym_m();
    for (int h = 0; h <= 10; ++h) {
        const HorizonCoeffs c = horizon_coeffs(p, h);
        for (int i = -3; i <= 3; ++i) {
            const double d = i;
            const double lin = analytic_loss_u(SpecKind::Linear, p, h, d);
            const double asym = analytic_loss_u(SpecKind::AsymLP, p, h, d);
            const double lag = analytic_loss_u(SpecKind::LagLP, p, h, d);
            const double feas = analytic_loss_u(SpecKind::Feas, p, h, d);
            rank = rank && feas <= lag && lag <= lin && feas <= asym;
            gap = std::max(gap, std::abs(lin - lag - c.a_h * c.a_h * d * d * mom.cov_sy * mom.cov_sy / mom.var_y));
            gap = std::max(gap, std::abs(lin - asym - c.q_h * c.q_h * (2 * m * std::abs(d) * d * d - m * m * d * d)));
        }
    }
    t.check(rank, "conditional-MSE ranking on the shock grid");
    t.check(gap <= 1e-12, "gap identities");
    bool threshold = true;
    for (int k = -300; k <= 300; ++k) {
        const double d = 0.01 * k;
        if (d == 0.0) continue;
        threshold = threshold && (analytic_loss_u(SpecKind::AsymLP, p, 2, d) <= analytic_loss_u(SpecKind::Linear, p, 2, d)) ==
                                     (std::abs(d) >= m / 2);
    }
    t.check(threshold, "AsymLP beats Linear iff |delta| >= m/2");

    std::printf("ranking of simulated distances:\n");
    const double lin = unconditional_distance(path, SpecKind::Linear, p, 10);
    const double asym = unconditional_distance(path, SpecKind::AsymLP, p, 10);
    const double lag = unconditional_distance(path, SpecKind::LagLP, p, 10);
    const double feas = unconditional_distance(path, SpecKind::Feas, p, 10);
    char buf[160];
    std::snprintf(buf, sizeof buf, "Feas %.4f <= LagLP %.4f <= Linear %.4f, Feas <= AsymLP %.4f", feas, lag, lin, asym);
    t.check(feas <= lag && lag <= lin && feas <= asym, buf);

    std::printf("verify: %d checks, %d failed (seed=%llu draws=%zu)\n", t.run, t.failed,
                static_cast<unsigned long long>(o.seed), o.draws);
    return t.failed ? kVerifyFailed : kOk;
}

}  // namespace lplab::cli
