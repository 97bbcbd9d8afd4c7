#include "scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace tzone::cli {

using nlohmann::json;

namespace {

// Reads typed fields from one JSON object and rejects keys nobody asked for.
class Section {
public:
    Section(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
        if (!obj_.is_object()) throw DomainError(where_ + " must be a JSON object");
    }

    [[nodiscard]] bool has(const std::string& key) {
        seen_.insert(key);
        return obj_.contains(key);
    }

    template <class T>
    void read(const std::string& key, T& out) {
        if (!has(key)) return;
        try {
            out = obj_.at(key).get<T>();
        } catch (const json::exception&) {
            throw DomainError(where_ + "." + key + " has the wrong type");
        }
    }

    void read_count(const std::string& key, std::size_t& out) {
        if (!has(key)) return;
        const json& v = obj_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw DomainError(where_ + "." + key + " must be a non-negative integer");
        out = v.get<std::size_t>();
    }

    const json* child(const std::string& key) {
        if (!has(key)) return nullptr;
        return &obj_.at(key);
    }

    [[nodiscard]] std::string path(const std::string& key) const { return where_ + "." + key; }

    void finish() const {
        for (const auto& item : obj_.items())
            if (!seen_.count(item.key())) throw DomainError("unknown key '" + where_ + "." + item.key() + "'");
    }

private:
    const json& obj_;
    std::string where_;
    std::set<std::string> seen_;
};

GridSpec read_grid(const json& v, const std::string& where) {
    GridSpec g;
    if (v.is_array()) {
        try {
            g.points = v.get<std::vector<double>>();
        } catch (const json::exception&) {
            throw DomainError(where + " must hold numbers");
        }
        if (g.points.empty()) throw DomainError(where + " is empty");
        return g;
    }
    Section s(v, where);
    if (s.has("lo")) {
        double x = 0.0;
        s.read("lo", x);
        g.lo = x;
    }
    if (s.has("hi")) {
        double x = 0.0;
        s.read("hi", x);
        g.hi = x;
    }
    if (s.has("n")) {
        std::size_t n = 0;
        s.read_count("n", n);
        g.n = n;
    }
    s.finish();
    return g;
}

json grid_json(const GridSpec& g) {
    if (!g.points.empty()) return g.points;
    json o = json::object();
    if (g.lo) o["lo"] = *g.lo;
    if (g.hi) o["hi"] = *g.hi;
    if (g.n) o["n"] = *g.n;
    return o;
}

template <class E, class Parse>
void read_enum(Section& s, const std::string& key, E& out, Parse parse) {
    std::string v;
    if (!s.has(key)) return;
    s.read(key, v);
    out = parse(v);
}

OuParticular ou_particular_from_string(std::string_view s) {
    if (s == "printed") return OuParticular::printed;
    if (s == "consistent") return OuParticular::consistent;
    throw DomainError("unknown OU particular term '" + std::string(s) + "'");
}

const char* to_string(OuParticular p) { return p == OuParticular::printed ? "printed" : "consistent"; }

}  // namespace

std::vector<double> GridSpec::resolve(double def_lo, double def_hi, std::size_t def_n) const {
    if (!points.empty()) return points;
    const Grid g(lo.value_or(def_lo), hi.value_or(def_hi), n.value_or(def_n));
    return g.points();
}

Format format_from_string(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw DomainError("unknown output format '" + s + "'");
}

const char* to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Scenario parse_scenario(const json& doc) {
    Scenario sc;
    Section top(doc, "scenario");
    top.read("name", sc.name);
    top.read("description", sc.description);

    if (const json* m = top.child("model")) {
        Section s(*m, "model");
        s.read("alpha", sc.model.alpha);
        s.read("beta", sc.model.beta);
        s.read("sigma", sc.model.sigma);
        s.read("f_bar", sc.model.f_bar);
        s.read("T", sc.model.horizon_T);
        s.read("r", sc.model.r_share);
        s.finish();
    }
    validate(sc.model);

    if (const json* m = top.child("spectral")) {
        Section s(*m, "spectral");
        s.read_count("K", sc.spectral.K);
        s.finish();
    }
    if (sc.spectral.K < 1) throw DomainError("spectral.K must be >= 1");

    if (const json* m = top.child("stationary")) {
        Section s(*m, "stationary");
        s.read("betas", sc.stationary.betas);
        if (const json* g = s.child("f_grid")) sc.stationary.f_grid = read_grid(*g, s.path("f_grid"));
        s.finish();
    }

    if (const json* m = top.child("transient")) {
        Section s(*m, "transient");
        read_enum(s, "mode", sc.transient.mode, projection_mode_from_string);
        if (s.has("K")) {
            std::size_t k = 0;
            s.read_count("K", k);
            if (k < 1) throw DomainError("transient.K must be >= 1");
            sc.transient.K = k;
        }
        if (const json* g = s.child("t_grid")) sc.transient.t_grid = read_grid(*g, s.path("t_grid"));
        if (const json* g = s.child("f_grid")) sc.transient.f_grid = read_grid(*g, s.path("f_grid"));
        s.finish();
    }

    if (const json* m = top.child("regime_scan")) {
        Section s(*m, "regime_scan");
        if (const json* g = s.child("beta_grid")) sc.regime_scan.beta_grid = read_grid(*g, s.path("beta_grid"));
        s.finish();
    }

    if (const json* m = top.child("sim")) {
        Section s(*m, "sim");
        s.read_count("n_paths", sc.sim.n_paths);
        s.read("dt", sc.sim.dt);
        read_enum(s, "drift_mode", sc.sim.drift_mode, drift_mode_from_string);
        read_enum(s, "intervention", sc.sim.intervention, intervention_from_string);
        read_enum(s, "trigger", sc.sim.trigger, trigger_from_string);
        s.read("kappa", sc.sim.kappa);
        s.read("seed", sc.sim.seed);
        if (s.has("threads")) {
            std::size_t t = 1;
            s.read_count("threads", t);
            sc.sim.threads = static_cast<unsigned>(t);
        }
        s.read_count("sample_paths", sc.sample_paths);
        s.read_count("sample_stride", sc.sample_stride);
        s.finish();
    }
    sc.sim.params = sc.model;
    if (sc.sample_stride < 1) throw DomainError("sim.sample_stride must be >= 1");

    if (const json* m = top.child("density")) {
        Section s(*m, "density");
        read_enum(s, "source", sc.density.source, density_source_from_string);
        s.read_count("n_bins", sc.density.n_bins);
        s.read("band_range", sc.density.band_range);
        s.read_count("modes", sc.density.modes);
        read_enum(s, "projection", sc.density.projection, projection_mode_from_string);
        s.finish();
    }
    if (sc.density.n_bins < 10) throw DomainError("density.n_bins must be >= 10");
    if (sc.density.modes < 1) throw DomainError("density.modes must be >= 1");

    if (const json* m = top.child("honeymoon")) {
        Section s(*m, "honeymoon");
        s.read("F", sc.honeymoon.F);
        s.read("omega", sc.honeymoon.omega);
        s.finish();
    }

    if (const json* m = top.child("ou")) {
        Section s(*m, "ou");
        s.read("lambda", sc.ou.lambda);
        s.read("mu", sc.ou.mu);
        read_enum(s, "particular", sc.ou.particular, ou_particular_from_string);
        s.read_count("K", sc.ou.K);
        if (const json* g = s.child("f_grid")) sc.ou.f_grid = read_grid(*g, s.path("f_grid"));
        s.finish();
    }

    if (const json* m = top.child("outputs")) {
        Section s(*m, "outputs");
        std::string fmt = "csv";
        s.read("format", fmt);
        sc.outputs.format = format_from_string(fmt);
        s.read("path", sc.outputs.path);
        s.finish();
    }
    top.finish();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open scenario file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DomainError("scenario file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_scenario(doc);
}

json to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["description"] = s.description;
    j["model"] = {{"alpha", s.model.alpha}, {"beta", s.model.beta},       {"sigma", s.model.sigma},
                  {"f_bar", s.model.f_bar}, {"T", s.model.horizon_T}, {"r", s.model.r_share}};
    j["spectral"] = {{"K", s.spectral.K}};
    j["stationary"] = {{"betas", s.stationary.betas}, {"f_grid", grid_json(s.stationary.f_grid)}};
    j["transient"] = {{"mode", to_string(s.transient.mode)},
                      {"t_grid", grid_json(s.transient.t_grid)},
                      {"f_grid", grid_json(s.transient.f_grid)}};
    if (s.transient.K) j["transient"]["K"] = *s.transient.K;
    j["regime_scan"] = {{"beta_grid", grid_json(s.regime_scan.beta_grid)}};
    j["sim"] = {{"n_paths", s.sim.n_paths},
                {"dt", s.sim.dt},
                {"drift_mode", to_string(s.sim.drift_mode)},
                {"intervention", to_string(s.sim.intervention)},
                {"trigger", to_string(s.sim.trigger)},
                {"kappa", s.sim.kappa},
                {"seed", s.sim.seed},
                {"sample_paths", s.sample_paths},
                {"sample_stride", s.sample_stride}};
    j["density"] = {{"source", to_string(s.density.source)},
                    {"n_bins", s.density.n_bins},
                    {"band_range", s.density.band_range},
                    {"modes", s.density.modes},
                    {"projection", to_string(s.density.projection)}};
    j["honeymoon"] = {{"F", s.honeymoon.F}, {"omega", s.honeymoon.omega}};
    j["ou"] = {{"lambda", s.ou.lambda},
               {"mu", s.ou.mu},
               {"particular", to_string(s.ou.particular)},
               {"K", s.ou.K},
               {"f_grid", grid_json(s.ou.f_grid)}};
    j["outputs"] = {{"format", to_string(s.outputs.format)}};
    return j;
}

}  // namespace tzone::cli
