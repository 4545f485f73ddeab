#include "rumor/io/config.hpp"

#include "rumor/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rumor::io {

using nlohmann::json;

std::optional<OutputFormat> parse_output_format(const std::string& s) noexcept
{
    if (s == "csv") return OutputFormat::Csv;
    if (s == "svg") return OutputFormat::Svg;
    if (s == "both") return OutputFormat::Both;
    return std::nullopt;
}

std::string to_string(OutputFormat f)
{
    switch (f) {
    case OutputFormat::Svg: return "svg";
    case OutputFormat::Both: return "both";
    case OutputFormat::Csv: break;
    }
    return "csv";
}

namespace {

std::string to_string(MergeMode m) { return m == MergeMode::Chunked ? "chunked" : "sequential"; }

/// Reads typed fields out of one JSON object, recording problems instead of throwing.
class BlockReader {
public:
    BlockReader(const json& doc, std::string path, std::vector<std::string>& errors)
        : path_(std::move(path)), errors_(errors)
    {
        if (doc.is_null()) return;
        if (!doc.is_object()) {
            errors_.push_back(path_ + ": must be an object");
            return;
        }
        obj_ = &doc;
    }

    bool has(const char* key) const { return obj_ && obj_->contains(key); }
    const json* raw(const char* key)
    {
        seen_.insert(key);
        return has(key) ? &(*obj_)[key] : nullptr;
    }

    void number(const char* key, double& out)
    {
        if (const json* v = raw(key)) {
            if (v->is_number()) out = v->get<double>();
            else errors_.push_back(field(key) + ": must be a number");
        }
    }

    void count(const char* key, std::size_t& out)
    {
        if (const json* v = raw(key)) {
            if (v->is_number_unsigned()) out = v->get<std::size_t>();
            else errors_.push_back(field(key) + ": must be a nonnegative integer");
        }
    }

    void seed(const char* key, std::uint64_t& out)
    {
        if (const json* v = raw(key)) {
            if (v->is_number_unsigned()) out = v->get<std::uint64_t>();
            else errors_.push_back(field(key) + ": must be a nonnegative integer");
        }
    }

    void flag(const char* key, bool& out)
    {
        if (const json* v = raw(key)) {
            if (v->is_boolean()) out = v->get<bool>();
            else errors_.push_back(field(key) + ": must be true or false");
        }
    }

    void text(const char* key, std::string& out)
    {
        if (const json* v = raw(key)) {
            if (v->is_string()) out = v->get<std::string>();
            else errors_.push_back(field(key) + ": must be a string");
        }
    }

    void numbers(const char* key, std::vector<double>& out)
    {
        if (const json* v = raw(key)) {
            if (!v->is_array()) {
                errors_.push_back(field(key) + ": must be an array of numbers");
                return;
            }
            std::vector<double> tmp;
            for (const auto& e : *v) {
                if (!e.is_number()) {
                    errors_.push_back(field(key) + ": must be an array of numbers");
                    return;
                }
                tmp.push_back(e.get<double>());
            }
            out = std::move(tmp);
        }
    }

    /// Reports keys that were never read.
    void finish()
    {
        if (!obj_) return;
        for (auto it = obj_->begin(); it != obj_->end(); ++it) {
            if (!seen_.count(it.key())) errors_.push_back(field(it.key().c_str()) + ": unknown key");
        }
    }

    std::string field(const char* key) const { return path_ + "." + key; }
    std::vector<std::string>& errors() { return errors_; }

private:
    const json* obj_ = nullptr;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
};

const json& child(const json& doc, const char* key)
{
    static const json null_value;
    return doc.is_object() && doc.contains(key) ? doc[key] : null_value;
}

void read_model(const json& doc, RunConfig& cfg, std::vector<std::string>& errors)
{
    BlockReader r(doc, "model", errors);
    auto& m = cfg.model;
    r.number("beta", m.beta);
    r.number("sigma_act", m.sigma_act);
    r.number("gamma", m.gamma);
    r.number("rho", m.rho);
    r.number("theta", m.theta);
    r.number("tau", m.tau);
    r.number("population", m.population);
    if (r.has("R0")) {
        if (r.has("beta")) errors.push_back("model.R0: give either beta or R0, not both");
        double r0 = 0.0;
        r.number("R0", r0);
        if (m.removal_rate() != 0.0 && m.population > 0.0) m = m.with_reproduction_number(r0);
    }
    if (const json* noise = r.raw("noise")) {
        if (noise->is_number()) {
            m.noise = NoiseIntensities::uniform(noise->get<double>());
        } else {
            BlockReader n(*noise, "model.noise", errors);
            n.number("S", m.noise.s);
            n.number("E", m.noise.e);
            n.number("I", m.noise.i);
            n.number("R", m.noise.r);
            n.number("Ig", m.noise.ig);
            n.number("F", m.noise.f);
            n.finish();
        }
    }
    r.finish();
}

void read_initial(const json& doc, RunConfig& cfg, std::vector<std::string>& errors)
{
    BlockReader r(doc, "initial", errors);
    const double n = cfg.model.population;
    bool explicit_state = false;
    if (r.has("state")) {
        std::vector<double> v;
        r.numbers("state", v);
        if (v.size() == kCompartments) {
            cfg.initial = StateVector(v[0], v[1], v[2], v[3], v[4], v[5]);
            explicit_state = true;
        } else if (!v.empty()) {
            errors.push_back("initial.state: must hold six values (S, E, I, R, Ig, F)");
        }
    }
    if (r.has("spreaders")) {
        if (explicit_state) errors.push_back("initial.spreaders: give either state or spreaders, not both");
        double spreaders = 0.0;
        r.number("spreaders", spreaders);
        cfg.initial = StateVector(n - spreaders, 0.0, spreaders, 0.0, 0.0, 0.0);
    } else if (!explicit_state) {
        cfg.initial = StateVector(n - 0.005, 0.0, 0.005, 0.0, 0.0, 0.0);
    }
    r.finish();
}

void read_integrator(const json& doc, RunConfig& cfg, std::vector<std::string>& errors)
{
    BlockReader r(doc, "integrator", errors);
    r.number("step_size", cfg.integrator.step_size);
    r.number("horizon", cfg.integrator.horizon);
    r.flag("projection", cfg.integrator.projection);
    r.count("record_stride", cfg.integrator.record_stride);
    r.finish();
}

void read_ensemble(const json& doc, RunConfig& cfg, std::vector<std::string>& errors)
{
    BlockReader r(doc, "ensemble", errors);
    auto& e = cfg.ensemble;
    r.count("runs", e.run_count);
    r.number("ci_level", e.ci_level);
    r.seed("seed", e.base_seed);
    r.count("workers", e.workers);
    r.count("reservoir_capacity", e.reservoir_capacity);
    r.flag("export_trajectories", e.retain_trajectories);
    std::string method = std::string(to_string(e.ci_method));
    r.text("ci_method", method);
    if (auto m = parse_ci_method(method)) e.ci_method = *m;
    else errors.push_back("ensemble.ci_method: must be \"quantile\" or \"normal\"");
    std::string merge = to_string(e.merge);
    r.text("merge", merge);
    if (merge == "sequential") e.merge = MergeMode::Sequential;
    else if (merge == "chunked") e.merge = MergeMode::Chunked;
    else errors.push_back("ensemble.merge: must be \"sequential\" or \"chunked\"");
    r.finish();
}

void read_stability(const json& doc, RunConfig& cfg, std::vector<std::string>& errors)
{
    BlockReader r(doc, "stability", errors);
    auto& s = cfg.stability;
    r.number("e0", s.e0);
    r.number("i0", s.i0);
    r.count("runs", s.runs);
    r.number("horizon", s.horizon);
    r.seed("seed", s.seed);
    r.number("equilibrium_tol", s.equilibrium_tol);
    r.count("growth_samples", s.growth_samples);
    r.count("lipschitz_samples", s.lipschitz_samples);
    r.numbers("radii", s.radii);
    r.finish();
}

void read_sweep(const json& doc, RunConfig& cfg, std::vector<std::string>& errors)
{
    BlockReader r(doc, "sweep", errors);
    auto& s = cfg.sweep;
    r.numbers("taus", s.taus);
    r.numbers("R0", s.r0s);
    r.count("runs", s.runs);
    r.seed("seed", s.seed);
    r.text("reference", s.reference);
    r.finish();
}

void read_output(const json& doc, RunConfig& cfg, std::vector<std::string>& errors)
{
    BlockReader r(doc, "output", errors);
    r.text("dir", cfg.output_dir);
    std::string format = to_string(cfg.format);
    r.text("format", format);
    if (auto f = parse_output_format(format)) cfg.format = *f;
    else errors.push_back("output.format: must be csv, svg or both");
    r.finish();
}

}  // namespace

HistoryFunction RunConfig::history() const { return HistoryFunction::constant(initial, model.population); }

SweepSpec RunConfig::sweep_spec() const
{
    SweepSpec spec;
    spec.taus = sweep.taus;
    spec.r0s = sweep.r0s;
    spec.base = model;
    spec.initial_spreaders = initial.i();
    spec.integrator = integrator;
    spec.ensemble = ensemble;
    spec.ensemble.run_count = sweep.runs;
    spec.ensemble.base_seed = sweep.seed;
    return spec;
}

std::vector<std::string> RunConfig::violations() const
{
    std::vector<std::string> out = model.violations();
    for (auto v : integrator.violations(model.tau)) out.push_back(std::move(v));
    for (auto v : ensemble.violations()) out.push_back(std::move(v));

    const std::string where = "initial.state";
    if (!initial.finite() || !initial.nonnegative()) out.push_back(where + ": components must be >= 0");
    if (std::abs(initial.total() - model.population) > HistoryFunction::kSumTolerance * model.population) {
        out.push_back(where + ": components must sum to model.population");
    }

    const auto& s = stability;
    if (!(s.e0 >= 0.0) || !(s.i0 >= 0.0)) out.emplace_back("stability.e0/i0: must be >= 0");
    if (s.e0 == 0.0 && s.i0 == 0.0) out.emplace_back("stability.e0/i0: must not both be 0");
    if (s.runs == 0) out.emplace_back("stability.runs: must be >= 1");
    IntegratorConfig linear = integrator;
    linear.horizon = s.horizon;
    for (auto v : linear.violations(model.tau, "stability")) {
        if (v.rfind("stability.horizon", 0) == 0 || v.rfind("stability.record_stride", 0) == 0) out.push_back(std::move(v));
    }
    if (!(s.equilibrium_tol > 0.0)) out.emplace_back("stability.equilibrium_tol: must be > 0");
    if (s.growth_samples == 0) out.emplace_back("stability.growth_samples: must be >= 1");
    if (s.lipschitz_samples == 0) out.emplace_back("stability.lipschitz_samples: must be >= 1");
    for (double radius : s.radii) {
        if (!(radius > 0.0)) {
            out.emplace_back("stability.radii: every radius must be > 0");
            break;
        }
    }

    if (sweep.runs == 0) out.emplace_back("sweep.runs: must be >= 1");
    SweepSpec spec = sweep_spec();
    spec.ensemble.run_count = std::max<std::size_t>(sweep.runs, 1);
    for (auto v : spec.violations()) {
        // Model and integrator problems are already reported under their own blocks.
        if (v.rfind("sweep.model", 0) == 0 || v.rfind("sweep.ensemble", 0) == 0 ||
            v.rfind("sweep.initial_spreaders", 0) == 0) {
            continue;
        }
        if (v.rfind("sweep.integrator", 0) == 0 &&
            std::find(out.begin(), out.end(), "integrator" + v.substr(16)) != out.end()) {
            continue;
        }
        out.push_back(std::move(v));
    }
    if (output_dir.empty()) out.emplace_back("output.dir: must not be empty");
    return out;
}

RunConfig parse_config(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    std::vector<std::string> errors;
    if (!doc.is_object()) throw ConfigError("config", "top level must be an object");

    RunConfig cfg;
    static const std::set<std::string> blocks = {"model", "initial", "integrator", "ensemble",
                                                 "stability", "sweep", "output"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!blocks.count(it.key())) errors.push_back(it.key() + ": unknown block");
    }
    read_model(child(doc, "model"), cfg, errors);
    read_initial(child(doc, "initial"), cfg, errors);
    read_integrator(child(doc, "integrator"), cfg, errors);
    read_ensemble(child(doc, "ensemble"), cfg, errors);
    read_stability(child(doc, "stability"), cfg, errors);
    read_sweep(child(doc, "sweep"), cfg, errors);
    read_output(child(doc, "output"), cfg, errors);

    for (auto v : cfg.violations()) errors.push_back(std::move(v));
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

std::string dump_config(const RunConfig& c)
{
    const auto& m = c.model;
    json doc;
    doc["model"] = {
        {"beta", m.beta},
        {"sigma_act", m.sigma_act},
        {"gamma", m.gamma},
        {"rho", m.rho},
        {"theta", m.theta},
        {"tau", m.tau},
        {"population", m.population},
        {"noise", {{"S", m.noise.s}, {"E", m.noise.e}, {"I", m.noise.i}, {"R", m.noise.r}, {"Ig", m.noise.ig}, {"F", m.noise.f}}},
    };
    doc["initial"] = {{"state", c.initial.values()}};
    doc["integrator"] = {
        {"step_size", c.integrator.step_size},
        {"horizon", c.integrator.horizon},
        {"projection", c.integrator.projection},
        {"record_stride", c.integrator.record_stride},
    };
    doc["ensemble"] = {
        {"runs", c.ensemble.run_count},
        {"ci_level", c.ensemble.ci_level},
        {"ci_method", std::string(to_string(c.ensemble.ci_method))},
        {"seed", c.ensemble.base_seed},
        {"workers", c.ensemble.workers},
        {"merge", to_string(c.ensemble.merge)},
        {"reservoir_capacity", c.ensemble.reservoir_capacity},
        {"export_trajectories", c.ensemble.retain_trajectories},
    };
    doc["stability"] = {
        {"e0", c.stability.e0},
        {"i0", c.stability.i0},
        {"runs", c.stability.runs},
        {"horizon", c.stability.horizon},
        {"seed", c.stability.seed},
        {"equilibrium_tol", c.stability.equilibrium_tol},
        {"growth_samples", c.stability.growth_samples},
        {"lipschitz_samples", c.stability.lipschitz_samples},
        {"radii", c.stability.radii},
    };
    doc["sweep"] = {
        {"taus", c.sweep.taus},
        {"R0", c.sweep.r0s},
        {"runs", c.sweep.runs},
        {"seed", c.sweep.seed},
        {"reference", c.sweep.reference},
    };
    doc["output"] = {{"dir", c.output_dir}, {"format", to_string(c.format)}};
    return doc.dump(2) + "\n";
}

}  // namespace rumor::io
