#include "commands.hpp"

#include "rumor/ablation.hpp"
#include "rumor/ensemble.hpp"
#include "rumor/error.hpp"
#include "rumor/integrator.hpp"
#include "rumor/io/config.hpp"
#include "rumor/io/csv.hpp"
#include "rumor/io/svg.hpp"
#include "rumor/rng.hpp"
#include "rumor/stability.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace rumor::cli {

namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Overrides {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::string format;
    std::string sweep_csv;
    std::string reference_csv;
};

/// Collects written paths in order and writes files in one place.
class OutputDir {
public:
    OutputDir(fs::path dir, std::ostream& listing) : dir_(std::move(dir)), listing_(listing)
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create " + dir_.string() + ": " + ec.message());
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body)
    {
        const fs::path path = dir_ / name;
        std::ofstream file(path, std::ios::binary);
        if (!file) throw IoError("cannot open " + path.string() + " for writing");
        body(file);
        file.flush();
        if (!file) throw IoError("failed writing " + path.string());
        listing_ << path.string() << '\n';
    }

    void write_text(const std::string& name, const std::string& text)
    {
        write(name, [&](std::ostream& os) { os << text; });
    }

private:
    fs::path dir_;
    std::ostream& listing_;
};

io::RunConfig resolve_config(const Overrides& o)
{
    io::RunConfig cfg = o.config_path.empty() ? io::parse_config("{}") : io::load_config(o.config_path);
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    if (o.seed) {
        cfg.ensemble.base_seed = *o.seed;
        cfg.sweep.seed = *o.seed;
        cfg.stability.seed = *o.seed;
    }
    if (o.runs) {
        cfg.ensemble.run_count = *o.runs;
        cfg.sweep.runs = *o.runs;
        cfg.stability.runs = *o.runs;
    }
    if (!o.format.empty()) {
        auto f = io::parse_output_format(o.format);
        if (!f) throw ConfigError("--format", "must be csv, svg or both");
        cfg.format = *f;
    }
    if (!o.reference_csv.empty()) cfg.sweep.reference = o.reference_csv;
    if (auto v = cfg.violations(); !v.empty()) throw ConfigError(std::move(v));
    return cfg;
}

bool wants_csv(const io::RunConfig& c) { return c.format != io::OutputFormat::Svg; }
bool wants_svg(const io::RunConfig& c) { return c.format != io::OutputFormat::Csv; }

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err)
{
    for (const auto& w : warnings) err << "warning: " << w << '\n';
}

std::vector<double> column(const std::vector<StateVector>& states, Compartment c)
{
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s[c]);
    return out;
}

void cmd_simulate(const io::RunConfig& cfg, OutputDir& dir, std::ostream& err)
{
    const Trajectory t = integrate(cfg.model, cfg.history(), cfg.integrator, cfg.ensemble.base_seed);
    if (wants_csv(cfg)) dir.write("trajectory.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, t); });
    if (wants_svg(cfg)) {
        std::vector<io::PlotSeries> series;
        for (std::size_t k = 0; k < kCompartments; ++k) {
            series.push_back({std::string(kCompartmentNames[k]), t.times, column(t.states, Compartment(k)), {}});
        }
        dir.write_text("trajectory.svg", io::render_svg(series, {"Single realization", "t", "population density"}));
    }
    if (t.projection_events > 0) err << "warning: " << t.projection_events << " steps clamped to nonnegative\n";
    if (auto fsz = final_size(t, cfg.model); fsz.warning) err << "warning: " << *fsz.warning << '\n';
}

void cmd_ensemble(const io::RunConfig& cfg, OutputDir& dir, std::ostream& err)
{
    const EnsembleResult r = run_ensemble(cfg.model, cfg.history(), cfg.integrator, cfg.ensemble);
    if (wants_csv(cfg)) {
        dir.write("summary.csv", [&](std::ostream& os) { io::write_summary_csv(os, r.summary); });
        dir.write("metrics.csv", [&](std::ostream& os) { io::write_metrics_csv(os, r.metrics); });
        dir.write("metrics_aggregate.csv",
                  [&](std::ostream& os) { io::write_metrics_aggregate_csv(os, r.metrics, r.summary.run_count); });
        if (cfg.ensemble.retain_trajectories) {
            dir.write("trajectories.csv", [&](std::ostream& os) {
                os << "run,t";
                for (auto name : kCompartmentNames) os << ',' << name;
                os << '\n';
                for (std::size_t k = 0; k < r.trajectories.size(); ++k) {
                    const auto& t = r.trajectories[k];
                    for (std::size_t n = 0; n < t.size(); ++n) {
                        os << k << ',' << io::format_number(t.times[n]);
                        for (double v : t.states[n].values()) os << ',' << io::format_number(v);
                        os << '\n';
                    }
                }
            });
        }
    }
    if (wants_svg(cfg)) {
        const auto& s = r.summary;
        const bool banded = s.run_count >= 2;
        std::ostringstream title;
        title << "Spreaders I(t): mean of " << s.run_count << " runs";
        if (banded) title << " with " << io::format_number(100.0 * s.ci_level) << "% band";
        std::vector<io::PlotSeries> spreaders{{"I mean", s.times, s[Compartment::I].mean, std::nullopt}};
        if (banded) spreaders.front().band = io::PlotBand{s[Compartment::I].lower, s[Compartment::I].upper};
        dir.write_text("spreaders.svg", io::render_svg(spreaders, {title.str(), "t", "I"}));

        std::vector<io::PlotSeries> means;
        for (std::size_t k = 0; k < kCompartments; ++k) {
            means.push_back({std::string(kCompartmentNames[k]), s.times, s.compartments[k].mean, {}});
        }
        dir.write_text("compartments.svg", io::render_svg(means, {"Mean trajectories", "t", "population density"}));
    }
    report_warnings(r.warnings, err);
}

void cmd_stability(const io::RunConfig& cfg, OutputDir& dir, std::ostream& err)
{
    const auto& p = cfg.model;
    const auto& st = cfg.stability;
    const ThresholdReport th = thresholds(p);
    const auto rfe = classify_equilibrium(StateVector(p.population, 0, 0, 0, 0, 0), p, st.equilibrium_tol);
    const auto initial = classify_equilibrium(cfg.initial, p, st.equilibrium_tol);

    io::Metadata rows = {
        {"R0", io::format_number(th.reproduction_number)},
        {"stochastic_margin", io::format_number(th.stochastic_margin)},
        {"deterministic_stable", th.deterministic_stable ? "true" : "false"},
        {"mean_square_condition", th.mean_square_condition ? "true" : "false"},
        {"rfe_class", std::string(to_string(rfe.classification))},
        {"rfe_residual", io::format_number(rfe.drift_residual)},
        {"initial_class", std::string(to_string(initial.classification))},
        {"initial_residual", io::format_number(initial.drift_residual)},
        {"diffusion_lipschitz", io::format_number(diffusion_lipschitz_constant(p))},
    };
    for (std::size_t k = 0; k < st.radii.size(); ++k) {
        const double radius = st.radii[k];
        const std::string suffix = "@R=" + io::format_number(radius);
        const auto growth = verify_growth_bound(p, st.growth_samples, radius, derive_seed(st.seed, 2 * k));
        const auto lip = verify_lipschitz_bound(p, st.lipschitz_samples, radius, derive_seed(st.seed, 2 * k + 1));
        rows.push_back({"growth_bound_K" + suffix, io::format_number(growth.bound_k)});
        rows.push_back({"growth_max_ratio" + suffix, io::format_number(growth.max_ratio)});
        rows.push_back({"growth_pass" + suffix, growth.pass ? "true" : "false"});
        rows.push_back({"lipschitz_L" + suffix, io::format_number(lip.bound_l)});
        rows.push_back({"lipschitz_max_ratio" + suffix, io::format_number(lip.max_ratio)});
        rows.push_back({"lipschitz_pass" + suffix, lip.pass ? "true" : "false"});
    }

    IntegratorConfig linear = cfg.integrator;
    linear.horizon = st.horizon;
    const auto decay = simulate_linearized(p, st.e0, st.i0, linear, st.runs, st.seed);
    rows.push_back({"decay_verdict", std::string(to_string(decay.verdict))});
    rows.push_back({"decay_fitted_rate", io::format_number(decay.fitted_rate)});
    rows.push_back({"decay_terminal_over_initial", io::format_number(decay.terminal() / decay.initial())});

    if (wants_csv(cfg)) {
        dir.write("thresholds.csv", [&](std::ostream& os) { io::write_key_value_csv(os, rows); });
        dir.write("decay.csv", [&](std::ostream& os) { io::write_decay_csv(os, decay); });
    }
    if (wants_svg(cfg)) {
        std::vector<double> log_estimate;
        for (double v : decay.estimate) log_estimate.push_back(v > 0.0 ? std::log10(v) : std::log10(kFitFloor));
        std::vector<io::PlotSeries> series{{"log10 E[E^2+I^2]", decay.times, log_estimate, {}}};
        std::ostringstream title;
        title << "Linearized second moment (" << to_string(decay.verdict) << ")";
        dir.write_text("decay.svg", io::render_svg(series, {title.str(), "t", "log10 second moment"}));
    }
    if (decay.verdict == Verdict::Inconclusive) err << "warning: mean-square verdict inconclusive\n";
}

ReferenceTable load_reference(const io::RunConfig& cfg)
{
    return cfg.sweep.reference.empty() ? published_ablation_table() : read_reference_csv(cfg.sweep.reference);
}

void write_deviation(const io::RunConfig& cfg, const SweepResult& result, OutputDir& dir, std::ostream& err)
{
    const auto report = compare_to_reference(result, load_reference(cfg));
    if (wants_csv(cfg)) dir.write("deviation.csv", [&](std::ostream& os) { io::write_deviation_csv(os, report); });
    for (const auto& row : report.rows) {
        if (row.flagged()) {
            err << "warning: cell tau=" << io::format_number(row.result.tau) << " R0=" << io::format_number(row.result.r0)
                << " flagged: " << row.explanation << '\n';
        }
    }
}

void cmd_ablate(const io::RunConfig& cfg, OutputDir& dir, std::ostream& err)
{
    const SweepResult result = run_sweep(cfg.sweep_spec());
    if (wants_csv(cfg)) dir.write("sweep.csv", [&](std::ostream& os) { io::write_sweep_csv(os, result); });
    if (wants_svg(cfg)) {
        std::vector<io::PlotSeries> peaks;
        for (double tau : cfg.sweep.taus) {
            io::PlotSeries s{"tau=" + io::format_number(tau), {}, {}, io::PlotBand{}};
            for (const auto& rec : result.records) {
                if (rec.tau != tau) continue;
                s.x.push_back(rec.r0);
                s.y.push_back(rec.peak_mean);
                s.band->lower.push_back(rec.peak_mean - rec.peak_std);
                s.band->upper.push_back(rec.peak_mean + rec.peak_std);
            }
            peaks.push_back(std::move(s));
        }
        dir.write_text("ablation_peak.svg", io::render_svg(peaks, {"Peak spreaders vs R0 (mean +/- std)", "R0", "peak I"}));
    }
    for (const auto& rec : result.records) {
        for (const auto& w : rec.warnings) {
            err << "warning: cell tau=" << io::format_number(rec.tau) << " R0=" << io::format_number(rec.r0) << ": " << w
                << '\n';
        }
    }
    // Deviation is advisory; a differing reference grid is reported, not fatal.
    try {
        write_deviation(cfg, result, dir, err);
    } catch (const GridMismatchError& e) {
        err << "warning: no deviation report: " << e.what() << '\n';
    }
}

void cmd_compare(const io::RunConfig& cfg, const Overrides& o, OutputDir& dir, std::ostream& err)
{
    SweepResult result;
    if (o.sweep_csv.empty()) {
        result = run_sweep(cfg.sweep_spec());
    } else {
        std::ifstream in(o.sweep_csv);
        if (!in) throw IoError("cannot open " + o.sweep_csv);
        result = io::read_sweep_csv(in, cfg.sweep.runs);
    }
    write_deviation(cfg, result, dir, err);
}

void add_common_options(CLI::App& sub, Overrides& o)
{
    sub.add_option("--config", o.config_path, "JSON configuration file");
    sub.add_option("--out", o.out_dir, "output directory (overrides output.dir)");
    sub.add_option("--seed", o.seed, "base seed (overrides every seed in the config)");
    sub.add_option("--runs", o.runs, "Monte Carlo runs (overrides every run count)");
    sub.add_option("--format", o.format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Stochastic delayed rumor-propagation toolkit"};
    app.require_subcommand(1);
    Overrides o;
    auto* simulate = app.add_subcommand("simulate", "integrate one realization");
    auto* ensemble = app.add_subcommand("ensemble", "Monte Carlo ensemble with pointwise bands");
    auto* stability = app.add_subcommand("stability", "thresholds, bound checks and mean-square decay");
    auto* ablate = app.add_subcommand("ablate", "delay x reproduction-number sweep");
    auto* compare = app.add_subcommand("compare", "deviation of a sweep from the reference table");
    for (auto* sub : {simulate, ensemble, stability, ablate, compare}) add_common_options(*sub, o);
    compare->add_option("--sweep", o.sweep_csv, "sweep CSV to compare (runs the sweep when omitted)");
    for (auto* sub : {ablate, compare}) sub->add_option("--reference", o.reference_csv, "reference table CSV");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << '\n';
        return kUsage;
    }

    try {
        const io::RunConfig cfg = resolve_config(o);
        OutputDir dir(cfg.output_dir, out);
        dir.write_text("effective_config.json", io::dump_config(cfg));
        if (simulate->parsed()) cmd_simulate(cfg, dir, err);
        else if (ensemble->parsed()) cmd_ensemble(cfg, dir, err);
        else if (stability->parsed()) cmd_stability(cfg, dir, err);
        else if (ablate->parsed()) cmd_ablate(cfg, dir, err);
        else cmd_compare(cfg, o, dir, err);
    } catch (const ConfigError& e) {
        for (const auto& v : e.violations()) err << "error: config: " << v << '\n';
        return kConfig;
    } catch (const GridMismatchError& e) {
        err << "error: config: reference: " << e.what() << '\n';
        return kConfig;
    } catch (const IoError& e) {
        err << "error: io: " << e.what() << '\n';
        return kIo;
    } catch (const io::PlotError& e) {
        err << "error: plot: " << e.what() << '\n';
        return kPlot;
    } catch (const std::exception& e) {
        err << "error: numeric: " << e.what() << '\n';
        return kNumeric;
    }
    return kOk;
}

}  // namespace rumor::cli
