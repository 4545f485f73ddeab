#include "rumor/history.hpp"

#include "rumor/error.hpp"

#include <cmath>

namespace rumor {

namespace {

void check_samples(const std::vector<StateVector>& samples, double population)
{
    std::vector<std::string> violations;
    if (samples.empty()) violations.emplace_back("history.samples: must not be empty");
    if (!(population > 0.0)) violations.emplace_back("history.population: must be > 0");
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const auto& x = samples[n];
        const std::string where = "history.samples[" + std::to_string(n) + "]";
        if (!x.finite()) {
            violations.push_back(where + ": must be finite");
            continue;
        }
        if (!x.nonnegative()) violations.push_back(where + ": components must be >= 0");
        if (std::abs(x.total() - population) > HistoryFunction::kSumTolerance * population) {
            violations.push_back(where + ": components must sum to the population");
        }
    }
    if (!violations.empty()) throw ConfigError(std::move(violations));
}

}  // namespace

HistoryFunction HistoryFunction::constant(const StateVector& state, double population)
{
    std::vector<StateVector> samples{state};
    check_samples(samples, population);
    return HistoryFunction(std::move(samples), 0.0);
}

HistoryFunction HistoryFunction::sampled(std::vector<StateVector> samples, double tau, double population)
{
    check_samples(samples, population);
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("history.tau", "must be >= 0");
    if (samples.size() > 1 && tau == 0.0) throw ConfigError("history.tau", "a sampled history needs tau > 0");
    return HistoryFunction(std::move(samples), tau);
}

HistoryFunction HistoryFunction::seeded_spreaders(double initial_spreaders, double population)
{
    return constant(StateVector(population - initial_spreaders, 0.0, initial_spreaders, 0.0, 0.0, 0.0), population);
}

StateVector HistoryFunction::at(double t) const noexcept
{
    if (samples_.size() == 1 || t >= 0.0) return samples_.back();
    if (t <= -tau_) return samples_.front();
    const double spacing = tau_ / static_cast<double>(samples_.size() - 1);
    const double pos = (t + tau_) / spacing;
    auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo >= samples_.size() - 1) return samples_.back();
    const double w = pos - static_cast<double>(lo);
    StateVector out;
    for (std::size_t k = 0; k < kCompartments; ++k) {
        out[k] = (1.0 - w) * samples_[lo][k] + w * samples_[lo + 1][k];
    }
    return out;
}

}  // namespace rumor
