#include "rumor/integrator.hpp"

#include "rumor/rng.hpp"

#include <cmath>

namespace rumor {

namespace {

// Nearest whole number of steps in `span / h`, or -1 if off-grid.
double whole_steps(double span, double h)
{
    const double ratio = span / h;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > IntegratorConfig::kGridTolerance * std::max(1.0, std::abs(ratio))) return -1.0;
    return rounded;
}

class SixCompartmentSystem {
public:
    static constexpr std::size_t dimension = kCompartments;
    using State = std::array<double, dimension>;

    SixCompartmentSystem(const ModelParams& p, const HistoryFunction& history) : p_(p), history_(history) {}

    State drift(const State& x, const State& delayed) const
    {
        return rumor::drift(StateVector(x), StateVector(delayed), p_);
    }
    State diffusion(const State& x) const { return rumor::diffusion(StateVector(x), p_); }
    State increments(std::uint64_t seed, std::uint64_t step, double h) const
    {
        return wiener_increments(seed, step, h);
    }
    State history(double t) const { return history_.at(t).values(); }

private:
    const ModelParams& p_;
    const HistoryFunction& history_;
};

}  // namespace

std::vector<std::string> IntegratorConfig::violations(double tau, std::string_view prefix) const
{
    std::vector<std::string> out;
    const std::string pre(prefix);
    const bool h_ok = step_size > 0.0 && std::isfinite(step_size);
    const bool t_ok = horizon > 0.0 && std::isfinite(horizon);
    if (!h_ok) out.push_back(pre + ".step_size: must be > 0");
    if (!t_ok) out.push_back(pre + ".horizon: must be > 0");
    if (record_stride == 0) out.push_back(pre + ".record_stride: must be >= 1");
    if (h_ok && t_ok) {
        const double n = whole_steps(horizon, step_size);
        if (n < 0.0) {
            out.push_back(pre + ".horizon: must be a whole number of steps");
        } else if (record_stride > 0 && static_cast<std::size_t>(n) % record_stride != 0) {
            out.push_back(pre + ".record_stride: must divide the number of steps");
        }
    }
    if (h_ok && tau > 0.0 && whole_steps(tau, step_size) < 0.0) {
        out.push_back(pre + ".step_size: tau must be a whole number of steps");
    }
    return out;
}

void IntegratorConfig::validate(double tau) const
{
    if (auto v = violations(tau); !v.empty()) throw ConfigError(std::move(v));
}

std::size_t IntegratorConfig::steps() const noexcept
{
    return static_cast<std::size_t>(std::round(horizon / step_size));
}

std::size_t IntegratorConfig::delay_steps(double tau) const noexcept
{
    return tau > 0.0 ? static_cast<std::size_t>(std::round(tau / step_size)) : 0;
}

namespace engine {

StepGrid make_grid(const IntegratorConfig& cfg, double tau)
{
    cfg.validate(tau);
    return {cfg.step_size, cfg.horizon, cfg.steps(), cfg.delay_steps(tau), cfg.record_stride};
}

}  // namespace engine

Trajectory integrate(const ModelParams& p, const HistoryFunction& history, const IntegratorConfig& cfg,
                     std::uint64_t rng_seed)
{
    std::vector<std::string> violations = p.violations();
    const auto cfg_violations = cfg.violations(p.tau);
    violations.insert(violations.end(), cfg_violations.begin(), cfg_violations.end());
    if (!history.is_constant() && std::abs(history.tau() - p.tau) > 1e-9 * std::max(1.0, p.tau)) {
        violations.emplace_back("history.tau: sampled history must span [-tau, 0]");
    }
    if (!violations.empty()) throw ConfigError(std::move(violations));

    const auto grid = engine::make_grid(cfg, p.tau);
    SixCompartmentSystem system(p, history);
    auto path = engine::euler_maruyama(system, grid, cfg.projection, rng_seed);

    Trajectory out;
    out.times = std::move(path.times);
    out.states.reserve(path.states.size());
    for (const auto& s : path.states) out.states.emplace_back(s);
    out.projection_events = path.projection_events;
    return out;
}

}  // namespace rumor
