#pragma once

#include "rumor/history.hpp"
#include "rumor/integrator.hpp"
#include "rumor/model.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rumor {

enum class CiMethod {
    Quantile,  ///< empirical quantiles, linear interpolation between order statistics
    Normal,    ///< mean +/- z * std
};

std::string_view to_string(CiMethod m) noexcept;
std::optional<CiMethod> parse_ci_method(std::string_view s) noexcept;

struct Band {
    double lower = 0.0;
    double upper = 0.0;
};

/// Quantile of already sorted data at probability `prob`, interpolating linearly
/// at position (n - 1) * prob between order statistics.
double sorted_quantile(std::span<const double> sorted, double prob);

/// Standard normal quantile.
double normal_quantile(double prob);

/// Pointwise band at `level` (0 < level < 1) from at least two values.
/// Throws InsufficientDataError for fewer than two values.
Band confidence_band(std::span<const double> values, double level, CiMethod method = CiMethod::Quantile);

/// Streaming mean and variance. merge() combines partial results (Chan et al.),
/// and adding a value is merging a single-sample partial.
class RunningMoments {
public:
    void add(double x) noexcept;
    void merge(const RunningMoments& other) noexcept;

    std::size_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    /// Sample variance (n - 1 denominator); NaN for fewer than two samples.
    double variance() const noexcept;
    double stddev() const noexcept;

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

enum class MergeMode {
    Sequential,  ///< runs merged in index order: bit-identical for any worker count
    Chunked,     ///< per-worker partials merged in worker order: bit-identical for a fixed worker count
};

struct EnsembleOptions {
    std::size_t run_count = 100;
    double ci_level = 0.95;
    CiMethod ci_method = CiMethod::Quantile;
    std::uint64_t base_seed = 20240601;
    bool retain_trajectories = false;
    std::size_t workers = 0;  ///< 0 picks the hardware concurrency
    MergeMode merge = MergeMode::Sequential;
    /// Runs kept per grid point for quantile bands. The first runs are kept;
    /// runs are exchangeable so this is an unbiased subsample.
    std::size_t reservoir_capacity = 1000;

    std::vector<std::string> violations(std::string_view prefix = "ensemble") const;
};

/// Pointwise statistics of one compartment across runs.
struct CompartmentSeries {
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<double> lower;
    std::vector<double> upper;
};

struct EnsembleSummary {
    std::vector<double> times;
    std::array<CompartmentSeries, kCompartments> compartments;
    std::vector<double> second_moment;  ///< pointwise mean of ||X(t)||^2
    std::size_t run_count = 0;
    double ci_level = 0.95;
    CiMethod ci_method = CiMethod::Quantile;

    const CompartmentSeries& operator[](Compartment c) const noexcept { return compartments[index(c)]; }
};

struct RunMetrics {
    double peak_i = 0.0;       ///< max over the recorded grid of I(t)
    double peak_time = 0.0;    ///< first time attaining peak_i
    double final_size = 0.0;   ///< R(T) + F(T)
    double terminal_i = 0.0;
    std::size_t projection_events = 0;
};

RunMetrics compute_run_metrics(const Trajectory& trajectory);

struct OutbreakMetrics {
    std::vector<RunMetrics> runs;
    double peak_mean = 0.0;
    double peak_std = 0.0;
    double final_mean = 0.0;
    double final_std = 0.0;
    /// Peak of the mean I trajectory and when it occurs.
    double mean_trajectory_peak = 0.0;
    double mean_trajectory_peak_time = 0.0;
};

/// Mean and sample std of `values`, computed over the sorted values so the
/// result does not depend on their order.
std::pair<double, double> order_free_mean_std(std::vector<double> values);

struct EnsembleResult {
    EnsembleSummary summary;
    OutbreakMetrics metrics;
    std::vector<Trajectory> trajectories;  ///< filled only when retain_trajectories
    std::vector<std::string> warnings;
    std::size_t projection_events = 0;
};

/// Terminal mean spreader level (relative to N) above which final sizes are flagged.
inline constexpr double kExtinctionThreshold = 1e-4;

/// Runs `options.run_count` independent realizations; run k uses
/// derive_seed(options.base_seed, k). Integrator failures are rethrown as
/// RunError naming the run index.
EnsembleResult run_ensemble(const ModelParams& p, const HistoryFunction& history, const IntegratorConfig& cfg,
                            const EnsembleOptions& options);

}  // namespace rumor
