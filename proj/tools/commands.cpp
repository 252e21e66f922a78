#include "commands.hpp"

#include "lplab/csv.hpp"
#include "lplab/distance.hpp"
#include "lplab/empirical.hpp"
#include "lplab/estimate.hpp"
#include "lplab/parallel.hpp"
#include "lplab/run_config.hpp"
#include "lplab/simulate.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lplab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string compact(const std::string& json_text) { return json::parse(json_text).dump(); }

void ensure_parent(const std::string& file) {
    const fs::path parent = fs::path(file).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
    return s;
}

std::string seed_text(const std::vector<std::uint64_t>& seeds) {
    if (seeds.size() == 1) return std::to_string(seeds[0]);
    bool run = true;
    for (std::size_t i = 1; i < seeds.size(); ++i) run = run && seeds[i] == seeds[i - 1] + 1;
    if (run) return std::to_string(seeds.front()) + ".." + std::to_string(seeds.back());
    std::string s;
    for (std::size_t i = 0; i < seeds.size(); ++i) s += (i ? "," : "") + std::to_string(seeds[i]);
    return s;
}

std::vector<double> default_points(double lo, double hi, double step) {
    std::vector<double> v;
    const int n = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= n; ++i) v.push_back(lo + i * step);
    return v;
}

std::string read_text(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw Error(what + ": cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string provenance(const std::string& argv_echo, const std::string& extra) {
    std::string p = "lplab " LPLAB_VERSION " | " + argv_echo;
    if (!extra.empty()) p += " | " + extra;
    return p;
}

QarParams resolve_params(const ModelOptions& m) {
    if (!m.config.empty() && !m.params_file.empty())
        throw Error("give either --config or --params, not both");
    QarParams p;
    if (!m.config.empty())
        p = load_run_config(m.config).params;
    else if (!m.params_file.empty())
        p = load_qar_params(m.params_file);
    if (m.phi1) p.phi1 = *m.phi1;
    if (m.phi2) p.phi2 = *m.phi2;
    if (m.gamma) p.gamma = *m.gamma;
    if (m.sigma) p.sigma = *m.sigma;
    p.validate();
    return p;
}

int run_simulate(const SimulateOptions& o, const std::string& argv_echo) {
    ensure_parent(o.out);
    if (!o.qvar_params.empty()) {
        const QvarParams p = load_qvar_params(o.qvar_params);
        const QvarPath path = simulate_qvar(p, o.T, o.burn_in, o.seed);
        write_path_csv(path, o.out,
                       provenance(argv_echo, "qvar=" + compact(qvar_params_to_json(p)) +
                                                 " T=" + std::to_string(o.T) + " burn_in=" +
                                                 std::to_string(o.burn_in) + " seed=" + std::to_string(o.seed)));
    } else {
        const QarParams p = resolve_params(o.model);
        const SimulatedPath path = simulate_qar(p, o.T, o.burn_in, o.seed);
        write_path_csv(path, o.out,
                       provenance(argv_echo, "params=" + compact(qar_params_to_json(p)) +
                                                 " T=" + std::to_string(o.T) + " burn_in=" +
                                                 std::to_string(o.burn_in) + " seed=" + std::to_string(o.seed)));
    }
    std::printf("simulate: seed=%llu T=%lld burn_in=%d -> %s\n", static_cast<unsigned long long>(o.seed), o.T,
                o.burn_in, o.out.c_str());
    return kOk;
}

int run_true_irf(const IrfOptions& o, const std::string& argv_echo) {
    const QarParams p = resolve_params(o.model);
    ensure_parent(o.out);
    CsvWriter w(o.out, provenance(argv_echo, "params=" + compact(qar_params_to_json(p))),
                {"h", "spec", "conditioning", "delta", "value"});
    for (double s : o.s)
        for (double d : o.delta)
            for (int h = 0; h <= o.H; ++h)
                w.cell(h).cell("True").cell("s=" + format_number(s)).cell(d).cell(car(p, s, d, h)).end_row();
    std::printf("true-irf: H=%d, %zu states x %zu shocks -> %s\n", o.H, o.s.size(), o.delta.size(), o.out.c_str());
    return kOk;
}

int run_pop_irf(const IrfOptions& o, const std::string& argv_echo) {
    const QarParams p = resolve_params(o.model);
    std::vector<SpecKind> specs;
    for (const auto& name : o.specs) specs.push_back(parse_spec(name));
    const double mean_y = qar_moments(p).mean_y;
    ensure_parent(o.out);
    CsvWriter w(o.out, provenance(argv_echo, "params=" + compact(qar_params_to_json(p))),
                {"h", "spec", "conditioning", "delta", "value"});
    for (SpecKind k : specs) {
        std::vector<std::pair<std::string, Conditioning>> conds;
        switch (k) {
            case SpecKind::Linear:
                conds.push_back({"none", NoState{}});
                break;
            case SpecKind::AsymLP:
                conds.push_back({"sign(delta)", NoState{}});
                break;
            case SpecKind::LagLP:
            case SpecKind::Feas:
                for (double y : o.z.empty() ? std::vector<double>{mean_y} : o.z)
                    conds.push_back({"y=" + format_number(y), ProxyState{y}});
                break;
            case SpecKind::Infeas:
                for (double s : o.z.empty() ? o.s : o.z) conds.push_back({"s=" + format_number(s), LatentState{s}});
                break;
            default:
                pop_irf(k, p, 0);  // throws with the reason
        }
        for (int h = 0; h <= o.H; ++h) {
            const PopulationIrf irf = pop_irf(k, p, h);
            for (const auto& [label, z] : conds)
                for (double d : o.delta)
                    w.cell(h).cell(to_string(k)).cell(label).cell(d).cell(irf_value(irf, z, d)).end_row();
        }
    }
    std::printf("pop-irf: H=%d specs=%s -> %s\n", o.H, join(o.specs).c_str(), o.out.c_str());
    return kOk;
}

int run_distance(const DistanceOptions& o, const std::string& argv_echo) {
    RunConfig cfg = load_run_config(o.config);
    if (!o.seeds.empty()) cfg.seeds = o.seeds;
    const std::string dir = o.out_dir.empty() ? cfg.output_dir : o.out_dir;
    fs::create_directories(dir);

    const std::size_t ns = cfg.seeds.size(), nk = cfg.specs.size();
    std::vector<double> overall(ns * nk);
    std::vector<std::vector<DistanceBin>> s_bins(nk), u_bins(nk);
    parallel_for(ns, [&](std::size_t i) {
        const SimulatedPath path = simulate_qar(cfg.params, cfg.T, cfg.burn_in, cfg.seeds[i]);
        for (std::size_t k = 0; k < nk; ++k) {
            const auto irfs = o.estimated ? estimated_irfs(cfg.specs[k], path, cfg.H)
                                          : population_irfs(cfg.specs[k], cfg.params, cfg.H);
            overall[i * nk + k] = unconditional_distance(path, cfg.params, irfs);
            if (i != 0) continue;
            auto edges = [&](const std::vector<double>& given, BinAxis axis) {
                return given.empty() ? equal_probability_edges(axis_values(path, axis), cfg.bin_count) : given;
            };
            s_bins[k] = binned_distance(path, cfg.params, irfs, BinAxis::State, edges(cfg.s_edges, BinAxis::State));
            u_bins[k] = binned_distance(path, cfg.params, irfs, BinAxis::Shock, edges(cfg.u_edges, BinAxis::Shock));
        }
    });

    const std::string prov = provenance(argv_echo, "config=" + compact(cfg.to_json()) +
                                                       (o.estimated ? " coefficients=estimated" : ""));
    const std::string f_overall = (fs::path(dir) / "overall.csv").string();
    const std::string f_seed = (fs::path(dir) / "overall_by_seed.csv").string();
    const std::string f_bins = (fs::path(dir) / "bins.csv").string();
    {
        CsvWriter w(f_overall, prov + " | D averaged over seeds", {"spec", "D"});
        for (std::size_t k = 0; k < nk; ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < ns; ++i) sum += overall[i * nk + k];
            w.cell(to_string(cfg.specs[k])).cell(sum / static_cast<double>(ns)).end_row();
        }
    }
    {
        CsvWriter w(f_seed, prov, {"seed", "spec", "D"});
        for (std::size_t i = 0; i < ns; ++i)
            for (std::size_t k = 0; k < nk; ++k)
                w.cell(static_cast<long long>(cfg.seeds[i])).cell(to_string(cfg.specs[k])).cell(overall[i * nk + k]).end_row();
    }
    {
        CsvWriter w(f_bins, prov + " | bins from seed " + std::to_string(cfg.seeds[0]),
                    {"spec", "axis", "lo", "hi", "count", "distance"});
        for (std::size_t k = 0; k < nk; ++k)
            for (const auto& [axis, bins] : {std::pair{"s", &s_bins[k]}, std::pair{"u", &u_bins[k]}})
                for (const DistanceBin& b : *bins)
                    w.cell(to_string(cfg.specs[k])).cell(axis).cell(b.lo).cell(b.hi).cell(b.count)
                        .cell(b.distance ? *b.distance : std::nan("")).end_row();
    }
    std::printf("distance: seeds=%s T=%lld H=%d -> %s, %s, %s\n", seed_text(cfg.seeds).c_str(), cfg.T, cfg.H,
                f_overall.c_str(), f_seed.c_str(), f_bins.c_str());
    return kOk;
}

int run_analytic_loss(const LossOptions& o, const std::string& argv_echo) {
    const QarParams p = resolve_params(o.model);
    const bool state = o.kind == "state";
    const std::vector<double> points =
        !o.points.empty() ? o.points : state ? default_points(-2.0, 2.0, 0.25) : default_points(-3.0, 3.0, 0.25);
    std::vector<SpecKind> specs;
    bool need_xi = false;
    for (const auto& name : o.specs) {
        specs.push_back(parse_spec(name));
        need_xi = need_xi || specs.back() == SpecKind::LagLP || specs.back() == SpecKind::Feas;
    }
    std::vector<double> xi(points.size(), 0.0);
    if (state && need_xi)
        parallel_for(points.size(), [&](std::size_t i) {
            xi[i] = xi_estimate(p, points[i], o.xi_draws, o.seed + i).estimate;
        });

    ensure_parent(o.out);
    std::string extra = "params=" + compact(qar_params_to_json(p));
    if (state && need_xi)
        extra += " xi_draws=" + std::to_string(o.xi_draws) + " seed=" + std::to_string(o.seed);
    CsvWriter w(o.out, provenance(argv_echo, extra), {"spec", "kind", "h", "point", "value"});
    for (SpecKind k : specs)
        for (int h = 0; h <= o.H; ++h)
            for (std::size_t i = 0; i < points.size(); ++i) {
                const double v = state ? analytic_loss_s(k, p, h, points[i], need_xi ? std::optional(xi[i]) : std::nullopt)
                                       : analytic_loss_u(k, p, h, points[i]);
                w.cell(to_string(k)).cell(o.kind).cell(h).cell(points[i]).cell(v).end_row();
            }
    std::printf("analytic-loss: kind=%s H=%d specs=%s%s -> %s\n", o.kind.c_str(), o.H, join(o.specs).c_str(),
                state && need_xi ? (" seed=" + std::to_string(o.seed)).c_str() : "", o.out.c_str());
    return kOk;
}

namespace {

struct EstimateDesign {
    std::string outcome, shock, region;
    std::vector<std::string> proxies, latent, controls, contemporaneous;
    DesignSpec spec;
    int horizons = 0;
    double level = 0.90;
    std::vector<VectorXd> z;
    std::vector<double> delta{1.0};
};

[[noreturn]] void design_error(const std::string& field, const std::string& what) {
    throw Error("design: field '" + field + "' " + what);
}

EstimateDesign parse_design(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("design: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error("design: top level must be an object");
    EstimateDesign d;
    auto str = [&](const char* key, bool required) {
        if (!j.contains(key)) {
            if (required) design_error(key, "is required");
            return std::string();
        }
        if (!j[key].is_string()) design_error(key, "must be a string");
        return j[key].get<std::string>();
    };
    auto names = [&](const char* key) {
        std::vector<std::string> v;
        if (!j.contains(key)) return v;
        if (!j[key].is_array()) design_error(key, "must be an array of column names");
        for (const auto& e : j[key]) {
            if (!e.is_string()) design_error(key, "must be an array of column names");
            v.push_back(e.get<std::string>());
        }
        return v;
    };
    auto integer = [&](const char* key, int fallback, int min) {
        if (!j.contains(key)) return fallback;
        if (!j[key].is_number_integer() || j[key].get<int>() < min)
            design_error(key, "must be an integer >= " + std::to_string(min));
        return j[key].get<int>();
    };
    auto numbers = [&](const json& a, const std::string& key) {
        if (!a.is_array()) design_error(key, "must be an array of numbers");
        std::vector<double> v;
        for (const auto& e : a) {
            if (!e.is_number()) design_error(key, "must be an array of numbers");
            v.push_back(e.get<double>());
        }
        return v;
    };

    d.outcome = str("outcome", true);
    d.shock = str("shock", true);
    d.region = str("region", false);
    d.proxies = names("proxies");
    d.latent = names("latent");
    d.controls = names("controls");
    d.contemporaneous = names("contemporaneous");
    try {
        d.spec.spec = parse_spec(str("spec", true));
    } catch (const Error& e) {
        design_error("spec", e.what());
    }
    d.horizons = integer("horizons", 0, 0);
    d.spec.control_lags = integer("control_lags", 0, 0);
    d.spec.shock_lags = integer("shock_lags", -1, -1);
    d.spec.bandwidth = integer("bandwidth", -1, -1);
    if (j.contains("lag_outcome")) {
        if (!j["lag_outcome"].is_boolean()) design_error("lag_outcome", "must be true or false");
        d.spec.lag_outcome = j["lag_outcome"].get<bool>();
    }
    if (j.contains("constant")) {
        if (!j["constant"].is_boolean()) design_error("constant", "must be true or false");
        d.spec.include_constant = j["constant"].get<bool>();
    }
    if (j.contains("proxy_center")) {
        const auto v = numbers(j["proxy_center"], "proxy_center");
        d.spec.proxy_center = Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    d.spec.restrict = names("restrict");
    if (j.contains("level")) {
        if (!j["level"].is_number() || j["level"].get<double>() <= 0 || j["level"].get<double>() >= 1)
            design_error("level", "must be in (0, 1)");
        d.level = j["level"].get<double>();
    }
    if (j.contains("delta")) d.delta = numbers(j["delta"], "delta");
    if (j.contains("z")) {
        if (!j["z"].is_array()) design_error("z", "must be an array of state vectors");
        for (const auto& e : j["z"]) {
            const auto v = numbers(e, "z");
            d.z.push_back(Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
        }
    }
    return d;
}

MatrixXd columns(const NumericTable& t, const std::vector<std::string>& names) {
    MatrixXd m(t.values.rows(), static_cast<Eigen::Index>(names.size()));
    for (std::size_t c = 0; c < names.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = t.values.col(t.column(names[c]));
    return m;
}

std::string z_text(const VectorXd& z) {
    std::string s;
    for (Eigen::Index i = 0; i < z.size(); ++i) s += (i ? ";" : "") + format_number(z(i));
    return s;
}

}  // namespace

int run_estimate(const EstimateOptions& o, const std::string& argv_echo) {
    const EstimateDesign d = parse_design(read_text(o.design, "design"));
    const NumericTable t = read_numeric_csv(o.data);
    LpData data;
    data.outcome = t.values.col(t.column(d.outcome));
    data.shock = t.values.col(t.column(d.shock));
    data.outcome_name = d.outcome;
    data.proxies = columns(t, d.proxies);
    data.proxy_names = d.proxies;
    data.latent = columns(t, d.latent);
    data.latent_names = d.latent;
    data.lagged_controls = columns(t, d.controls);
    data.control_names = d.controls;
    data.contemporaneous = columns(t, d.contemporaneous);
    for (const auto& c : d.contemporaneous) data.contemporaneous_names.push_back(c + "_t");
    if (!d.region.empty()) data.region = t.values.col(t.column(d.region));

    std::vector<RegressionFit> fits(static_cast<std::size_t>(d.horizons) + 1);
    parallel_for(fits.size(), [&](std::size_t h) {
        DesignSpec spec = d.spec;
        spec.h = static_cast<int>(h);
        fits[h] = fit_lp(spec, data);
    });

    fs::create_directories(o.out_dir);
    json echo_design = json::parse(read_text(o.design, "design"));
    const std::string prov = provenance(argv_echo, "design=" + echo_design.dump());
    const std::string f_coef = (fs::path(o.out_dir) / "coefficients.csv").string();
    const std::string f_irf = (fs::path(o.out_dir) / "irf.csv").string();
    {
        CsvWriter w(f_coef, prov, {"h", "coef_name", "estimate", "se_hac", "se_ehw"});
        for (const RegressionFit& f : fits) {
            const VectorXd hac = f.se_hac(), ehw = f.se_ehw();
            for (std::size_t c = 0; c < f.names.size(); ++c) {
                const auto i = static_cast<Eigen::Index>(c);
                w.cell(f.h).cell(f.names[c]).cell(f.coefficients(i)).cell(hac(i)).cell(ehw(i)).end_row();
            }
        }
    }
    {
        CsvWriter w(f_irf, prov + " | level=" + format_number(d.level), {"h", "z", "delta", "value", "lo", "hi"});
        for (const RegressionFit& f : fits) {
            const std::vector<VectorXd> zs = d.z.empty() ? std::vector<VectorXd>{VectorXd::Zero(f.n_states)} : d.z;
            for (const VectorXd& z : zs)
                for (double delta : d.delta) {
                    const IrfEstimate e = irf_ci(f, z, delta, d.level);
                    w.cell(f.h).cell(z_text(z)).cell(delta).cell(e.value).cell(e.conf_low).cell(e.conf_high).end_row();
                }
        }
    }
    std::printf("estimate: spec=%s H=%d T=%lld -> %s, %s\n", to_string(d.spec.spec).c_str(), d.horizons,
                static_cast<long long>(t.values.rows()), f_coef.c_str(), f_irf.c_str());
    return kOk;
}

int run_empirical_cmd(const EmpiricalOptions& o, const std::string& argv_echo) {
    const EmpiricalConfig cfg = EmpiricalConfig::from_json(read_text(o.config, "empirical config"));
    const LoadedData data = load_csv(o.data, column_roles(cfg), cfg.start, cfg.end);
    const EmpiricalResult r = run_empirical(cfg, data);
    fs::create_directories(o.out_dir);
    const std::string prov = provenance(argv_echo, "config=" + compact(cfg.to_json()) + " shock_sd=" +
                                                       format_number(r.shock_sd));
    std::vector<std::string> files;
    for (const auto& [outcome, rows] : r.tables) {
        const std::string f = (fs::path(o.out_dir) / ("irf_" + outcome + ".csv")).string();
        CsvWriter w(f, prov, {"h", "label", "k", "value", "lo", "hi"});
        for (const EmpiricalRow& row : rows)
            w.cell(row.h).cell(row.label).cell(row.k).cell(row.value).cell(row.lo).cell(row.hi).end_row();
        files.push_back(f);
    }
    std::printf("empirical: %zu months %s..%s shock_sd=%s -> %s\n", data.dates.size(),
                data.dates.front().str().c_str(), data.dates.back().str().c_str(), format_number(r.shock_sd).c_str(),
                join(files).c_str());
    return kOk;
}

}  // namespace lplab::cli
