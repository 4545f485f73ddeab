#pragma once

#include "rumor/ensemble.hpp"
#include "rumor/history.hpp"
#include "rumor/integrator.hpp"
#include "rumor/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rumor {

enum class EquilibriumClass {
    RumorFree,        ///< (N, 0, 0, 0, 0, 0)
    RumorFreeFamily,  ///< e = i = ig = 0, N split over s, r, f
    NotEquilibrium,
};

std::string_view to_string(EquilibriumClass c) noexcept;

struct EquilibriumReport {
    StateVector state;
    double drift_residual = 0.0;         ///< ||drift(x, x)||
    EquilibriumClass classification = EquilibriumClass::NotEquilibrium;
    double conservation_residual = 0.0;  ///< |sum(x) - N|
};

/// Classifies `x` as a steady state of the delay system (a constant path, so the
/// delayed state equals x). Throws ConfigError unless tol > 0.
EquilibriumReport classify_equilibrium(const StateVector& x, const ModelParams& p, double tol);

struct ThresholdReport {
    double reproduction_number = 0.0;
    double stochastic_margin = 0.0;
    bool deterministic_stable = false;  ///< R0 < 1
    bool mean_square_condition = false; ///< stochastic_margin > 0
};

ThresholdReport thresholds(const ModelParams& p);

enum class Verdict { Decay, Growth, Inconclusive };

std::string_view to_string(Verdict v) noexcept;

/// Terminal / initial second-moment ratios at or beyond which a verdict is called.
inline constexpr double kDecayRatio = 1e-2;
inline constexpr double kGrowthRatio = 1e2;
/// Estimates below this are excluded from the log-linear rate fit.
inline constexpr double kFitFloor = 1e-12;

struct MeanSquareDecayReport {
    std::vector<double> times;
    std::vector<double> estimate;  ///< ensemble mean of E(t)^2 + I(t)^2
    double fitted_rate = 0.0;      ///< least-squares slope of log(estimate); NaN if the window is too short
    double margin = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::size_t run_count = 0;

    double initial() const { return estimate.front(); }
    double terminal() const { return estimate.back(); }
};

/// Verdict from the terminal / initial ratio alone.
Verdict classify_decay(double initial, double terminal) noexcept;

/// Slope of log(estimate) against time over [0.1 T, first time estimate < kFitFloor).
double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& estimate);

/// Ensemble of the linearized spreading subsystem around the rumor-free equilibrium,
///   dE = (beta N I(t - tau) - sigma_act E) dt + noise_E E dW_E,
///   dI = (sigma_act E - (gamma + rho) I) dt + noise_I I dW_I,
/// with constant history (e0, i0). Run k uses derive_seed(base_seed, k) and the
/// E and I components of the six-channel Wiener stream.
MeanSquareDecayReport simulate_linearized(const ModelParams& p, double e0, double i0, const IntegratorConfig& cfg,
                                          std::size_t run_count, std::uint64_t base_seed);

struct FinalSizeReport {
    double s_inf = 0.0;
    double r_inf = 0.0;
    double f_inf = 0.0;
    double terminal_i = 0.0;
    double conservation_residual = 0.0;  ///< |s + r + f - N|
    std::optional<std::string> warning;  ///< set when the spreaders are not extinguished

    double total() const noexcept { return s_inf + r_inf + f_inf; }
    double outbreak_size() const noexcept { return r_inf + f_inf; }
};

FinalSizeReport final_size(const Trajectory& trajectory, const ModelParams& p);
/// Uses the terminal ensemble means.
FinalSizeReport final_size(const EnsembleSummary& summary, const ModelParams& p);

/// Second-moment envelope (E[V(0)] + C t) exp(C (1 + q) t) for V = ||X||^2.
///
/// C bounds the generator of V after Young's inequality on each cross term:
///   max(beta + nS^2, beta - sigma_act + nE^2, nI^2, gamma + nR^2, rho - theta + nIg^2,
///       theta + nF^2, beta)
/// (the last entry covers the delayed term). The E^2 I_tau^2 <= E^2 + I_tau^2 step
/// assumes densities of order one.
double generator_constant(const ModelParams& p);

struct MomentBoundReport {
    double generator_c = 0.0;
    double razumikhin_q = 1.0;            ///< max over the grid of mean V(t - tau) / mean V(t), at least 1
    std::vector<double> envelope;
    double max_envelope_fraction = 0.0;   ///< max of mean V / envelope
    std::size_t non_finite = 0;
    bool pass = false;
};

MomentBoundReport check_moment_bound(const EnsembleSummary& summary, const ModelParams& p,
                                     const HistoryFunction& history);

}  // namespace rumor
