#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

using namespace lplab::cli;

namespace {

void add_model_options(CLI::App* sub, ModelOptions& m) {
    sub->add_option("--config", m.config, "Run config (JSON); supplies the model parameters");
    sub->add_option("--params", m.params_file, "QAR parameter file (JSON)");
    sub->add_option("--phi1", m.phi1);
    sub->add_option("--phi2", m.phi2);
    sub->add_option("--gamma", m.gamma);
    sub->add_option("--sigma", m.sigma);
}

void add_irf_options(CLI::App* sub, IrfOptions& o) {
    add_model_options(sub, o.model);
    sub->add_option("--s", o.s, "Lagged latent states")->delimiter(',');
    sub->add_option("--delta", o.delta, "Shock sizes")->delimiter(',');
    sub->add_option("--H", o.H, "Maximum horizon")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", o.out, "Output CSV");
}

std::string echo(int argc, char** argv) {
    std::string s = "lplab";
    for (int i = 1; i < argc; ++i) s += std::string(" ") + argv[i];
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local projections under quadratic autoregressive dynamics", "lplab"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* s_sim = app.add_subcommand("simulate", "Simulate a QAR (or QVAR) path");
    add_model_options(s_sim, sim.model);
    s_sim->add_option("--qvar", sim.qvar_params, "QVAR parameter file; simulates a QVAR instead");
    s_sim->add_option("--T", sim.T, "Recorded length")->check(CLI::PositiveNumber);
    s_sim->add_option("--burn-in", sim.burn_in)->check(CLI::NonNegativeNumber);
    s_sim->add_option("--seed", sim.seed);
    s_sim->add_option("--out", sim.out, "Output CSV");

    IrfOptions true_irf;
    true_irf.out = "true_irf.csv";
    auto* s_true = app.add_subcommand("true-irf", "Conditional average responses CAR_h(s, delta)");
    add_irf_options(s_true, true_irf);

    IrfOptions pop;
    pop.out = "pop_irf.csv";
    auto* s_pop = app.add_subcommand("pop-irf", "Population IRFs of the LP specifications");
    add_irf_options(s_pop, pop);
    s_pop->add_option("--specs", pop.specs)->delimiter(',');
    s_pop->add_option("--z", pop.z, "Conditioning values (y for LagLP/Feas, s for Infeas)")->delimiter(',');

    DistanceOptions dist;
    auto* s_dist = app.add_subcommand("distance", "Simulated unconditional and binned distances");
    s_dist->add_option("--config", dist.config)->required();
    s_dist->add_option("--out", dist.out_dir, "Output directory (default: the config's output_dir)");
    s_dist->add_option("--seeds", dist.seeds, "Override the config's seeds")->delimiter(',');
    s_dist->add_flag("--estimated", dist.estimated, "Use OLS coefficients from each path");

    LossOptions loss;
    auto* s_loss = app.add_subcommand("analytic-loss", "Closed-form conditional MSE curves");
    add_model_options(s_loss, loss.model);
    s_loss->add_option("--specs", loss.specs)->delimiter(',');
    s_loss->add_option("--kind", loss.kind, "shock or state")->check(CLI::IsMember({"shock", "state"}));
    s_loss->add_option("--points", loss.points, "Evaluation points")->delimiter(',');
    s_loss->add_option("--H", loss.H)->check(CLI::NonNegativeNumber);
    s_loss->add_option("--xi-draws", loss.xi_draws, "Conditional-sampler draws per state point");
    s_loss->add_option("--seed", loss.seed);
    s_loss->add_option("--out", loss.out);

    EstimateOptions est;
    auto* s_est = app.add_subcommand("estimate", "Fit an LP specification to a CSV");
    s_est->add_option("--data", est.data, "Numeric CSV with a header row")->required();
    s_est->add_option("--design", est.design, "Design file (JSON)")->required();
    s_est->add_option("--out", est.out_dir, "Output directory");

    EmpiricalOptions emp;
    auto* s_emp = app.add_subcommand("empirical", "Monetary-policy style empirical pipeline");
    s_emp->add_option("--config", emp.config)->required();
    s_emp->add_option("--data", emp.data, "Monthly CSV with a date column")->required();
    s_emp->add_option("--out", emp.out_dir, "Output directory");

    VerifyOptions ver;
    auto* s_ver = app.add_subcommand("verify", "Run the oracle suite; exit 3 on any failure");
    s_ver->add_option("--draws", ver.draws, "Monte Carlo draws per oracle point");
    s_ver->add_option("--seed", ver.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    }

    const std::string argv_echo = echo(argc, argv);
    try {
        if (*s_sim) return run_simulate(sim, argv_echo);
        if (*s_true) return run_true_irf(true_irf, argv_echo);
        if (*s_pop) return run_pop_irf(pop, argv_echo);
        if (*s_dist) return run_distance(dist, argv_echo);
        if (*s_loss) return run_analytic_loss(loss, argv_echo);
        if (*s_est) return run_estimate(est, argv_echo);
        if (*s_emp) return run_empirical_cmd(emp, argv_echo);
        if (*s_ver) return run_verify(ver);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kUsageError;
}
