#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <type_traits>

#include "CLI11.hpp"
#include "tzone/honeymoon.hpp"
#include "tzone/mc.hpp"
#include "tzone/spectral.hpp"
#include "tzone/stationary.hpp"
#include "tzone/transient.hpp"

namespace tzone::cli {

using nlohmann::json;

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CSV with a single header line; doubles carry 17 significant digits.
class Csv {
public:
    explicit Csv(std::initializer_list<const char*> header) {
        bool first = true;
        for (const char* h : header) {
            if (!first) text_ += ',';
            text_ += h;
            first = false;
        }
        text_ += '\n';
    }

    template <class... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((append(cells, first)), ...);
        text_ += '\n';
    }

    [[nodiscard]] const std::string& str() const { return text_; }

private:
    template <class T>
    void append(const T& v, bool& first) {
        if (!first) text_ += ',';
        first = false;
        if constexpr (std::is_same_v<T, bool>) {
            text_ += v ? "true" : "false";
        } else if constexpr (std::is_floating_point_v<T>) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(v));
            text_ += buf;
        } else if constexpr (std::is_integral_v<T>) {
            text_ += std::to_string(v);
        } else {
            text_ += std::string_view(v);
        }
    }

    std::string text_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json report(const std::string& command, const Scenario& sc, json result) {
    return {{"command", command}, {"scenario", to_json(sc)}, {"result", std::move(result)}};
}

std::vector<double> band_grid(const GridSpec& g, const ModelParams& p, std::size_t n) {
    return g.resolve(-p.f_bar, p.f_bar, n);
}

std::size_t transient_K(const Scenario& sc) { return sc.transient.K.value_or(sc.spectral.K); }

std::string cmd_spectrum(const Scenario& sc, Format fmt) {
    const Spectrum s = build_spectrum(sc.model, sc.spectral.K);
    const std::string regime(to_string(s.regime));
    if (fmt == Format::csv) {
        Csv csv{"k", "omega", "u", "bracket_lo", "bracket_hi", "regime"};
        for (std::size_t k = 0; k < s.size(); ++k)
            csv.row(k + 1, s.eigenvalues[k], s.u[k], s.brackets[k].lo, s.brackets[k].hi, regime);
        return csv.str();
    }
    json rows = json::array();
    for (std::size_t k = 0; k < s.size(); ++k)
        rows.push_back({{"k", k + 1},
                        {"omega", s.eigenvalues[k]},
                        {"u", s.u[k]},
                        {"bracket_lo", s.brackets[k].lo},
                        {"bracket_hi", s.brackets[k].hi}});
    return dump(report("spectrum", sc,
                       {{"coupling", eigen_coupling(sc.model)},
                        {"regime", regime},
                        {"regime_threshold_beta", regime_threshold(sc.model)},
                        {"rows", rows}}));
}

std::string cmd_stationary(const Scenario& sc, Format fmt) {
    std::vector<double> betas = sc.stationary.betas;
    if (betas.empty()) betas.push_back(sc.model.beta);
    const std::vector<double> f = band_grid(sc.stationary.f_grid, sc.model, 201);
    Csv csv{"beta", "f", "x_s", "slope", "residual"};
    json curves = json::array();
    for (double beta : betas) {
        ModelParams p = sc.model;
        p.beta = beta;
        const StationarySolution sol = solve_smooth_pasting(p);
        std::vector<double> xs, slope, res;
        for (double x : f) {
            xs.push_back(sol.value(x));
            slope.push_back(sol.slope(x));
            res.push_back(sol.ode_residual(x));
            csv.row(beta, x, xs.back(), slope.back(), res.back());
        }
        curves.push_back(
            {{"beta", beta}, {"A", sol.A()}, {"B", sol.B()}, {"f", f}, {"x_s", xs}, {"slope", slope}, {"residual", res}});
    }
    if (fmt == Format::csv) return csv.str();
    return dump(report("stationary", sc, {{"curves", curves}}));
}

std::string cmd_transient(const Scenario& sc, Format fmt) {
    const ModelParams& p = sc.model;
    const TransientSolution ts = make_transient(p, transient_K(sc), sc.transient.mode, sc.sim.threads);
    const std::vector<double> t = sc.transient.t_grid.resolve(0.0, p.horizon_T, 31);
    const std::vector<double> f = band_grid(sc.transient.f_grid, p, 101);
    for (double ti : t)
        if (ti < 0.0 || ti > p.horizon_T) throw DomainError("transient.t_grid must lie in [0, T]");
    std::vector<double> values(t.size() * f.size());
    parallel_for(t.size(), sc.sim.threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < f.size(); ++j) values[i * f.size() + j] = eval_transient(ts, t[i], f[j]);
    });
    if (fmt == Format::csv) {
        Csv csv{"t", "f", "x"};
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = 0; j < f.size(); ++j) csv.row(t[i], f[j], values[i * f.size() + j]);
        return csv.str();
    }
    double terminal = 0.0;
    for (double x : f) terminal = std::max(terminal, std::abs(eval_transient(ts, p.horizon_T, x)));
    json rows = json::array();
    for (std::size_t i = 0; i < t.size(); ++i)
        rows.push_back(std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(i * f.size()),
                                           values.begin() + static_cast<std::ptrdiff_t>((i + 1) * f.size())));
    return dump(report("transient", sc,
                       {{"mode", to_string(ts.mode)},
                        {"K", ts.truncation_K},
                        {"eigenvalues", ts.spectrum.eigenvalues},
                        {"coeffs", ts.coeffs},
                        {"regime", to_string(ts.spectrum.regime)},
                        {"terminal_sup_abs", terminal},
                        {"t", t},
                        {"f", f},
                        {"x", rows}}));
}

std::string cmd_feasibility(const Scenario& sc, Format fmt) {
    const FeasibilityReport r = relaxation_time(build_spectrum(sc.model, 1));
    const double beta_e = regime_threshold(sc.model);
    if (fmt == Format::csv) {
        Csv csv{"omega1", "t_relax", "lower_bound", "upper_bound", "T", "feasible", "regime", "within_bounds",
                "regime_threshold_beta"};
        csv.row(r.omega1, r.t_relax, r.lower_bound, r.upper_bound, sc.model.horizon_T, r.feasible,
                to_string(r.regime), r.within_bounds, beta_e);
        return csv.str();
    }
    return dump(report("feasibility", sc,
                       {{"omega1", r.omega1},
                        {"t_relax", r.t_relax},
                        {"lower_bound", r.lower_bound},
                        {"upper_bound", r.upper_bound},
                        {"T", sc.model.horizon_T},
                        {"feasible", r.feasible},
                        {"regime", to_string(r.regime)},
                        {"within_bounds", r.within_bounds},
                        {"regime_threshold_beta", beta_e}}));
}

std::string cmd_regime_scan(const Scenario& sc, Format fmt) {
    const double beta_e = regime_threshold(sc.model);
    const std::vector<double> betas = sc.regime_scan.beta_grid.resolve(0.0, 3.0 * beta_e, 121);
    const std::vector<RegimeScanRow> rows = regime_scan(sc.model, betas);
    if (fmt == Format::csv) {
        Csv csv{"beta", "omega1", "t_relax", "regime"};
        for (const auto& r : rows) csv.row(r.beta, r.omega1, r.t_relax, to_string(r.regime));
        return csv.str();
    }
    json out = json::array();
    for (const auto& r : rows)
        out.push_back(
            {{"beta", r.beta}, {"omega1", r.omega1}, {"t_relax", r.t_relax}, {"regime", to_string(r.regime)}});
    return dump(report("regime-scan", sc, {{"regime_threshold_beta", beta_e}, {"rows", out}}));
}

SimConfig sim_config(const Scenario& sc) {
    SimConfig cfg = sc.sim;
    cfg.params = sc.model;
    return cfg;
}

std::string cmd_simulate(const Scenario& sc, Format fmt) {
    const SimConfig cfg = sim_config(sc);
    const std::vector<std::string> warnings = validate(cfg);
    const TransientSolution ts = make_transient(cfg.params, sc.density.modes, sc.density.projection, cfg.threads);
    const PathEnsemble ens = simulate(cfg, ts);
    const std::vector<double> x = exchange_paths(ens, ts, cfg.threads);
    const std::size_t shown = std::min(sc.sample_paths, ens.n_paths);
    const std::size_t n_t = ens.steps();

    if (fmt == Format::csv) {
        Csv csv{"path", "step", "t", "f", "x"};
        for (std::size_t p = 0; p < shown; ++p)
            for (std::size_t i = 0; i < n_t; i += sc.sample_stride)
                csv.row(p, i, ens.times[i], ens.at(p, i), x[p * n_t + i]);
        return csv.str();
    }

    std::size_t events = 0;
    double overshoot = 0.0;
    for (const auto& path : ens.interventions)
        for (const auto& ev : path) {
            ++events;
            overshoot += ev.overshoot;
        }
    const std::vector<double>& values = sc.density.source == DensitySource::exchange_rate ? x : ens.fundamentals;
    const double fb = cfg.params.f_bar;
    const DensityEstimate d = sc.density.band_range ? estimate_density(values, sc.density.n_bins, -fb, fb)
                                                    : estimate_density(values, sc.density.n_bins);
    json paths = json::array();
    for (std::size_t p = 0; p < shown; ++p) {
        std::vector<double> fp, xp;
        for (std::size_t i = 0; i < n_t; i += sc.sample_stride) {
            fp.push_back(ens.at(p, i));
            xp.push_back(x[p * n_t + i]);
        }
        json entry = {{"path", p}, {"f", fp}, {"x", xp}};
        if (!ens.bernoulli_signs.empty()) entry["bernoulli_sign"] = ens.bernoulli_signs[p];
        paths.push_back(entry);
    }
    std::vector<double> times;
    for (std::size_t i = 0; i < n_t; i += sc.sample_stride) times.push_back(ens.times[i]);
    return dump(report("simulate", sc,
                       {{"n_paths", ens.n_paths},
                        {"steps", n_t},
                        {"dt", cfg.step()},
                        {"warnings", warnings},
                        {"interventions", events},
                        {"mean_overshoot", events ? overshoot / static_cast<double>(events) : 0.0},
                        {"density_source", to_string(sc.density.source)},
                        {"shape", to_string(classify_shape(d))},
                        {"times", times},
                        {"paths", paths}}));
}

std::string cmd_density(const Scenario& sc, Format fmt) {
    const SimConfig cfg = sim_config(sc);
    const std::vector<std::string> warnings = validate(cfg);
    const ScenarioDensity r = simulate_density(cfg, sc.density);
    const DensityEstimate& d = r.density;
    const std::string shape(to_string(r.shape));
    if (fmt == Format::csv) {
        Csv csv{"bin", "lo", "hi", "center", "density", "shape"};
        for (std::size_t i = 0; i < d.n_bins; ++i)
            csv.row(i, d.bin_edges[i], d.bin_edges[i + 1], d.centers[i], d.density[i], shape);
        return csv.str();
    }
    return dump(report("density", sc,
                       {{"source", to_string(sc.density.source)},
                        {"n_bins", d.n_bins},
                        {"count", d.count},
                        {"interventions", r.interventions},
                        {"warnings", warnings},
                        {"integral", d.integral()},
                        {"shape", shape},
                        {"bin_edges", d.bin_edges},
                        {"centers", d.centers},
                        {"density", d.density}}));
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string cmd_honeymoon(const Scenario& sc, Format fmt) {
    const ContactReport r = classify_honeymoon(sc.model, sc.honeymoon.F, sc.honeymoon.omega);
    if (fmt == Format::csv) {
        Csv csv{"w", "delta"};
        for (const auto& s : r.delta_profile) csv.row(s.w, s.delta);
        return csv.str();
    }
    json out = {{"W", optional_json(r.W)},
                {"a", optional_json(r.a)},
                {"Wc", optional_json(r.Wc)},
                {"applicable", r.applicable},
                {"status", to_string(r.status)},
                {"spectral_regime", to_string(r.spectral_regime)},
                {"note", r.note}};
    if (sc.model.beta == 0.0) out["gaussian_W"] = gaussian_contact(sc.honeymoon.F, sc.model);
    json profile = json::array();
    for (const auto& s : r.delta_profile) profile.push_back({s.w, s.delta});
    out["delta_profile"] = profile;
    return dump(report("honeymoon", sc, out));
}

std::string cmd_ou(const Scenario& sc, Format fmt) {
    const StationarySolution sol = ou_stationary(sc.ou.lambda, sc.ou.mu, sc.model, sc.ou.particular);
    const std::vector<double> f = band_grid(sc.ou.f_grid, sc.model, 201);
    Csv csv{"f", "x", "slope", "residual"};
    std::vector<double> xs, slope, res;
    for (double x : f) {
        xs.push_back(sol.value(x));
        slope.push_back(sol.slope(x));
        res.push_back(sol.ode_residual(x));
        csv.row(x, xs.back(), slope.back(), res.back());
    }
    if (fmt == Format::csv) return csv.str();
    const Spectrum s = ou_asymptotic_spectrum(sc.ou.lambda, sc.ou.mu, sc.model, sc.ou.K);
    return dump(report("ou", sc,
                       {{"A", sol.A()},
                        {"B", sol.B()},
                        {"f", f},
                        {"x", xs},
                        {"slope", slope},
                        {"residual", res},
                        {"asymptotic_offset", ou_asymptotic_offset(sc.ou.lambda, sc.ou.mu, sc.model)},
                        {"asymptotic_eigenvalues", s.eigenvalues},
                        {"relaxation_time", ou_relaxation_time(s)}}));
}

struct CommandInfo {
    const char* name;
    const char* help;
    std::string (*fn)(const Scenario&, Format);
};

const std::vector<CommandInfo>& commands() {
    static const std::vector<CommandInfo> table = {
        {"spectrum", "eigenvalues Omega_k with brackets and regime", cmd_spectrum},
        {"stationary", "stationary exchange rate X_S(f) with smooth pasting", cmd_stationary},
        {"transient", "exchange-rate surface X(t, f)", cmd_transient},
        {"feasibility", "relaxation time, band bounds and feasibility", cmd_feasibility},
        {"regime-scan", "first eigenvalue and relaxation time along a beta grid", cmd_regime_scan},
        {"simulate", "Monte Carlo paths of the fundamental and the exchange rate", cmd_simulate},
        {"density", "pooled density of simulated paths with shape classification", cmd_density},
        {"honeymoon", "smooth-fit contact point and Delta criterion", cmd_honeymoon},
        {"ou", "mean-reverting stationary solution and asymptotic spectrum", cmd_ou},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& c : commands()) v.emplace_back(c.name);
        return v;
    }();
    return names;
}

std::string run_command(const std::string& name, const Scenario& sc, Format format) {
    for (const auto& c : commands())
        if (name == c.name) return c.fn(sc, format);
    throw DomainError("unknown command '" + name + "'");
}

void write_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path + "'");
    }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Target-zone exchange-rate model with risky fundamentals"};
    app.require_subcommand(1);

    std::string config, out_path, format;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    for (const auto& c : commands()) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", config, "scenario JSON file")->required();
        sub->add_option("--out", out_path, "output file (default: outputs.path, else stdout)");
        sub->add_option("--seed", seed, "override sim.seed");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ok : validation_error;
    }

    CLI::App* chosen = app.get_subcommands().front();
    try {
        Scenario sc = load_scenario(config);
        if (chosen->count("--seed")) sc.sim.seed = seed;
        if (chosen->count("--threads")) sc.sim.threads = threads;
        if (!format.empty()) sc.outputs.format = format_from_string(format);
        if (!out_path.empty()) sc.outputs.path = out_path;
        const std::string text = run_command(chosen->get_name(), sc, sc.outputs.format);
        if (sc.outputs.path.empty())
            out << text;
        else
            write_atomic(sc.outputs.path, text);
        return ok;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return validation_error;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_error;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return io_error;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_error;
    }
}

}  // namespace tzone::cli
