#pragma once

#include "rumor/error.hpp"
#include "rumor/history.hpp"
#include "rumor/model.hpp"

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rumor {

struct IntegratorConfig {
    double step_size = 0.1;
    double horizon = 200.0;
    bool projection = true;
    std::size_t record_stride = 1;

    /// Relative tolerance for horizon / step_size and tau / step_size being whole numbers.
    static constexpr double kGridTolerance = 1e-9;

    std::vector<std::string> violations(double tau, std::string_view prefix = "integrator") const;
    void validate(double tau) const;

    /// Number of Euler steps from 0 to the horizon.
    std::size_t steps() const noexcept;
    /// Number of steps spanned by the delay.
    std::size_t delay_steps(double tau) const noexcept;
    std::size_t recorded_points() const noexcept { return steps() / record_stride + 1; }

    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

/// One realization: uniform time grid from 0 to the horizon and the states on it.
struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::size_t projection_events = 0;  ///< steps in which at least one component was clamped

    std::size_t size() const noexcept { return times.size(); }
};

/// Euler-Maruyama with a grid-aligned delay buffer:
///   X(t+h) = X(t) + b(X(t), X(t-tau)) h + Sigma(X(t)) dW,
/// reading X(t-tau) from `history` while t < tau, then from the stored path.
/// With projection enabled every component is clamped to >= 0 after the step.
/// Deterministic in (p, history, cfg, rng_seed).
///
/// Throws ConfigError when tau or the horizon is not a whole number of steps,
/// NumericError when a state becomes non-finite.
Trajectory integrate(const ModelParams& p, const HistoryFunction& history, const IntegratorConfig& cfg,
                     std::uint64_t rng_seed);

namespace engine {

/// Step layout shared by every delay system integrated here.
struct StepGrid {
    double step_size = 0.1;
    double horizon = 0.0;
    std::size_t steps = 0;
    std::size_t lag = 0;  ///< delay in steps
    std::size_t stride = 1;

    double time(std::size_t n) const noexcept
    {
        return steps == 0 ? 0.0 : horizon * static_cast<double>(n) / static_cast<double>(steps);
    }
};

StepGrid make_grid(const IntegratorConfig& cfg, double tau);

template <std::size_t Dim>
struct Path {
    std::vector<double> times;
    std::vector<std::array<double, Dim>> states;
    std::size_t projection_events = 0;
};

/// A delay system exposes:
///   static constexpr std::size_t dimension;
///   State drift(const State& x, const State& delayed) const;
///   State diffusion(const State& x) const;            // diagonal noise coefficients
///   State increments(std::uint64_t seed, std::uint64_t step, double h) const;
///   State history(double t) const;                    // t in [-tau, 0]
template <class S>
concept DelaySystem = requires(const S& sys, const std::array<double, S::dimension>& x, std::uint64_t u, double t) {
    { sys.drift(x, x) } -> std::convertible_to<std::array<double, S::dimension>>;
    { sys.diffusion(x) } -> std::convertible_to<std::array<double, S::dimension>>;
    { sys.increments(u, u, t) } -> std::convertible_to<std::array<double, S::dimension>>;
    { sys.history(t) } -> std::convertible_to<std::array<double, S::dimension>>;
};

template <DelaySystem System>
Path<System::dimension> euler_maruyama(const System& sys, const StepGrid& grid, bool projection,
                                       std::uint64_t seed)
{
    constexpr std::size_t dim = System::dimension;
    using State = std::array<double, dim>;

    Path<dim> path;
    const std::size_t recorded = grid.steps / grid.stride + 1;
    path.times.reserve(recorded);
    path.states.reserve(recorded);

    // ring[n % (lag + 1)] holds X at step n for the last lag + 1 steps.
    std::vector<State> ring(grid.lag + 1);
    State x = sys.history(0.0);
    ring[0] = x;
    path.times.push_back(grid.time(0));
    path.states.push_back(x);

    const double h = grid.step_size;
    for (std::size_t n = 0; n < grid.steps; ++n) {
        const State delayed = n >= grid.lag ? ring[(n - grid.lag) % ring.size()]
                                            : sys.history((static_cast<double>(n) - static_cast<double>(grid.lag)) * h);
        const State b = sys.drift(x, delayed);
        const State g = sys.diffusion(x);
        const State dw = sys.increments(seed, n, h);

        bool clamped = false;
        for (std::size_t k = 0; k < dim; ++k) {
            x[k] += b[k] * h + g[k] * dw[k];
            if (projection && x[k] < 0.0) {
                x[k] = 0.0;
                clamped = true;
            }
        }
        for (std::size_t k = 0; k < dim; ++k) {
            if (!std::isfinite(x[k])) {
                throw NumericError("non-finite state at step " + std::to_string(n + 1) + " (t=" +
                                       std::to_string(grid.time(n + 1)) + ")",
                                   grid.time(n + 1));
            }
        }
        if (clamped) ++path.projection_events;
        ring[(n + 1) % ring.size()] = x;
        if ((n + 1) % grid.stride == 0) {
            path.times.push_back(grid.time(n + 1));
            path.states.push_back(x);
        }
    }
    return path;
}

}  // namespace engine

}  // namespace rumor
