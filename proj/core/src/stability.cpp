#include "rumor/stability.hpp"

#include "rumor/error.hpp"
#include "rumor/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rumor {

std::string_view to_string(EquilibriumClass c) noexcept
{
    switch (c) {
    case EquilibriumClass::RumorFree: return "rumor-free";
    case EquilibriumClass::RumorFreeFamily: return "rumor-free-family";
    case EquilibriumClass::NotEquilibrium: break;
    }
    return "not-an-equilibrium";
}

std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::Decay: return "decay";
    case Verdict::Growth: return "growth";
    case Verdict::Inconclusive: break;
    }
    return "inconclusive";
}

EquilibriumReport classify_equilibrium(const StateVector& x, const ModelParams& p, double tol)
{
    if (!(tol > 0.0)) throw ConfigError("tol", "must be > 0");
    EquilibriumReport report;
    report.state = x;
    double sq = 0.0;
    for (double v : drift(x, x, p)) sq += v * v;
    report.drift_residual = std::sqrt(sq);
    report.conservation_residual = std::abs(x.total() - p.population);

    const bool spreading_free = std::abs(x.e()) <= tol && std::abs(x.i()) <= tol && std::abs(x.ig()) <= tol;
    if (!spreading_free || report.drift_residual > tol) {
        report.classification = EquilibriumClass::NotEquilibrium;
    } else if (std::abs(x.s() - p.population) <= tol && std::abs(x.r()) <= tol && std::abs(x.f()) <= tol) {
        report.classification = EquilibriumClass::RumorFree;
    } else {
        report.classification = EquilibriumClass::RumorFreeFamily;
    }
    return report;
}

ThresholdReport thresholds(const ModelParams& p)
{
    ThresholdReport t;
    t.reproduction_number = reproduction_number(p);
    t.stochastic_margin = stochastic_margin(p);
    t.deterministic_stable = t.reproduction_number < 1.0;
    t.mean_square_condition = t.stochastic_margin > 0.0;
    return t;
}

Verdict classify_decay(double initial, double terminal) noexcept
{
    if (!(initial > 0.0)) return Verdict::Inconclusive;
    const double ratio = terminal / initial;
    if (ratio <= kDecayRatio) return Verdict::Decay;
    if (ratio >= kGrowthRatio) return Verdict::Growth;
    return Verdict::Inconclusive;
}

double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& estimate)
{
    if (times.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double start = times.front() + 0.1 * (times.back() - times.front());
    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (estimate[k] < kFitFloor) break;
        if (times[k] < start) continue;
        const double y = std::log(estimate[k]);
        n += 1.0;
        sx += times[k];
        sy += y;
        sxx += times[k] * times[k];
        sxy += times[k] * y;
    }
    const double denom = n * sxx - sx * sx;
    if (n < 2.0 || denom <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / denom;
}

namespace {

class LinearizedSystem {
public:
    static constexpr std::size_t dimension = 2;
    using State = std::array<double, dimension>;

    LinearizedSystem(const ModelParams& p, double e0, double i0) : p_(p), initial_{e0, i0} {}

    State drift(const State& x, const State& delayed) const
    {
        return {p_.beta * p_.population * delayed[1] - p_.sigma_act * x[0],
                p_.sigma_act * x[0] - p_.removal_rate() * x[1]};
    }
    State diffusion(const State& x) const { return {p_.noise.e * x[0], p_.noise.i * x[1]}; }
    State increments(std::uint64_t seed, std::uint64_t step, double h) const
    {
        const auto dw = wiener_increments(seed, step, h);
        return {dw[index(Compartment::E)], dw[index(Compartment::I)]};
    }
    State history(double) const { return initial_; }

private:
    const ModelParams& p_;
    State initial_;
};

}  // namespace

MeanSquareDecayReport simulate_linearized(const ModelParams& p, double e0, double i0, const IntegratorConfig& cfg,
                                          std::size_t run_count, std::uint64_t base_seed)
{
    std::vector<std::string> violations;
    // beta = 0 is a valid linearization (pure decay cascade), unlike in the full model.
    ModelParams checked = p;
    if (checked.beta == 0.0) checked.beta = 1.0;
    violations = checked.violations();
    for (auto v : cfg.violations(p.tau)) violations.push_back(std::move(v));
    if (!(e0 >= 0.0) || !(i0 >= 0.0)) violations.emplace_back("stability.e0/i0: must be >= 0");
    if (e0 == 0.0 && i0 == 0.0) violations.emplace_back("stability.e0/i0: must not both be 0");
    if (run_count == 0) violations.emplace_back("stability.runs: must be >= 1");
    if (!violations.empty()) throw ConfigError(std::move(violations));

    const auto grid = engine::make_grid(cfg, p.tau);
    LinearizedSystem system(p, e0, i0);

    MeanSquareDecayReport report;
    report.run_count = run_count;
    report.margin = stochastic_margin(p);
    std::vector<RunningMoments> moments;
    for (std::size_t run = 0; run < run_count; ++run) {
        engine::Path<2> path;
        try {
            path = engine::euler_maruyama(system, grid, cfg.projection, derive_seed(base_seed, run));
        } catch (const std::exception& e) {
            throw RunError("run " + std::to_string(run), e);
        }
        if (moments.empty()) {
            moments.resize(path.states.size());
            report.times = path.times;
        }
        for (std::size_t n = 0; n < path.states.size(); ++n) {
            const auto& x = path.states[n];
            moments[n].add(x[0] * x[0] + x[1] * x[1]);
        }
    }
    report.estimate.resize(moments.size());
    for (std::size_t n = 0; n < moments.size(); ++n) report.estimate[n] = moments[n].mean();
    report.fitted_rate = fit_decay_rate(report.times, report.estimate);
    report.verdict = classify_decay(report.initial(), report.terminal());
    return report;
}

namespace {

FinalSizeReport make_final_size(const StateVector& terminal, const ModelParams& p)
{
    FinalSizeReport out;
    out.s_inf = terminal.s();
    out.r_inf = terminal.r();
    out.f_inf = terminal.f();
    out.terminal_i = terminal.i();
    out.conservation_residual = std::abs(out.total() - p.population);
    if (terminal.i() >= kExtinctionThreshold * p.population) {
        std::ostringstream os;
        os << "I(T) = " << terminal.i() << " not yet below " << kExtinctionThreshold << " * N";
        out.warning = os.str();
    }
    return out;
}

}  // namespace

FinalSizeReport final_size(const Trajectory& trajectory, const ModelParams& p)
{
    if (trajectory.states.empty()) throw InsufficientDataError("empty trajectory");
    return make_final_size(trajectory.states.back(), p);
}

FinalSizeReport final_size(const EnsembleSummary& summary, const ModelParams& p)
{
    if (summary.times.empty()) throw InsufficientDataError("empty summary");
    StateVector terminal;
    for (std::size_t k = 0; k < kCompartments; ++k) terminal[k] = summary.compartments[k].mean.back();
    return make_final_size(terminal, p);
}

double generator_constant(const ModelParams& p)
{
    const auto& n = p.noise;
    return std::max({p.beta + n.s * n.s, p.beta - p.sigma_act + n.e * n.e, n.i * n.i, p.gamma + n.r * n.r,
                     p.rho - p.theta + n.ig * n.ig, p.theta + n.f * n.f, p.beta});
}

MomentBoundReport check_moment_bound(const EnsembleSummary& summary, const ModelParams& p,
                                     const HistoryFunction& history)
{
    MomentBoundReport report;
    const auto& v = summary.second_moment;
    if (v.empty()) throw InsufficientDataError("empty summary");
    report.generator_c = generator_constant(p);

    const double spacing = summary.times.size() > 1 ? summary.times[1] - summary.times[0] : 1.0;
    const auto lag = static_cast<std::ptrdiff_t>(std::llround(p.tau / spacing));
    double q = 1.0;
    for (std::size_t n = 0; n < v.size(); ++n) {
        if (!std::isfinite(v[n])) ++report.non_finite;
        const auto back = static_cast<std::ptrdiff_t>(n) - lag;
        const double delayed = back >= 0 ? v[static_cast<std::size_t>(back)]
                                         : history.at(summary.times[n] - p.tau).squared_norm();
        if (v[n] > 0.0 && std::isfinite(delayed)) q = std::max(q, delayed / v[n]);
    }
    report.razumikhin_q = q;

    const double c = report.generator_c;
    report.envelope.resize(v.size());
    bool below = true;
    for (std::size_t n = 0; n < v.size(); ++n) {
        const double t = summary.times[n] - summary.times.front();
        report.envelope[n] = (v.front() + c * t) * std::exp(c * (1.0 + q) * t);
        const double frac = v[n] / report.envelope[n];
        if (std::isfinite(frac)) report.max_envelope_fraction = std::max(report.max_envelope_fraction, frac);
        if (!(v[n] <= report.envelope[n])) below = false;
    }
    report.pass = below && report.non_finite == 0;
    return report;
}

}  // namespace rumor
