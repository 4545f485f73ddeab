#pragma once

#include "rumor/model.hpp"

#include <string>
#include <vector>

namespace rumor {

/// Initial trajectory segment on [-tau, 0].
///
/// Either constant (one state for the whole interval) or sampled on a uniform
/// grid from -tau to 0 with linear interpolation between samples. Every sample
/// is componentwise nonnegative and sums to the population.
class HistoryFunction {
public:
    /// Throws ConfigError if `state` is negative anywhere or does not sum to `population`.
    static HistoryFunction constant(const StateVector& state, double population);

    /// `samples.front()` sits at -tau and `samples.back()` at 0. A single sample
    /// is treated as constant.
    static HistoryFunction sampled(std::vector<StateVector> samples, double tau, double population);

    /// Everyone susceptible except `initial_spreaders` in I.
    static HistoryFunction seeded_spreaders(double initial_spreaders, double population);

    /// History value at lag `t` in [-tau, 0]; clamps outside that range.
    StateVector at(double t) const noexcept;

    bool is_constant() const noexcept { return samples_.size() == 1; }
    double tau() const noexcept { return tau_; }
    const std::vector<StateVector>& samples() const noexcept { return samples_; }

    /// Relative tolerance on the per-sample population sum.
    static constexpr double kSumTolerance = 1e-9;

private:
    HistoryFunction(std::vector<StateVector> samples, double tau) : samples_(std::move(samples)), tau_(tau) {}

    std::vector<StateVector> samples_;
    double tau_ = 0.0;
};

}  // namespace rumor
