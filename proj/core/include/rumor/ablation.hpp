#pragma once

#include "rumor/ensemble.hpp"
#include "rumor/integrator.hpp"
#include "rumor/model.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rumor {

/// A (tau, R0) grid over a fixed parameter template. Each cell sets
/// beta = R0 (gamma + rho) / N and tau, keeping everything else.
struct SweepSpec {
    std::vector<double> taus{0.0, 5.0, 10.0};
    std::vector<double> r0s{0.5, 0.8, 1.0, 1.2, 1.5, 2.0};
    ModelParams base{};
    double initial_spreaders = 0.005;
    IntegratorConfig integrator{};
    /// run_count and base_seed here apply to every cell; each cell derives its own seed.
    EnsembleOptions ensemble{};

    std::vector<std::string> violations(std::string_view prefix = "sweep") const;
    ModelParams cell_params(double tau, double r0) const;
};

struct SweepRecord {
    double tau = 0.0;
    double r0 = 0.0;
    double beta = 0.0;
    double peak_mean = 0.0;
    double peak_std = 0.0;
    double final_mean = 0.0;
    double final_std = 0.0;
    std::vector<std::string> warnings;
};

struct SweepResult {
    std::vector<SweepRecord> records;  ///< tau-major, R0-minor
    std::size_t run_count = 0;
};

/// Seed of cell (tau index, R0 index): derive_seed(derive_seed(base, tau index), R0 index).
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t tau_index, std::size_t r0_index) noexcept;

/// Runs one ensemble per cell. Failures are rethrown as RunError naming the cell.
SweepResult run_sweep(const SweepSpec& spec);

/// One row of a published reference table.
struct ReferenceRow {
    double tau = 0.0;
    double r0 = 0.0;
    double beta = 0.0;
    double peak_mean = 0.0;
    double peak_std = 0.0;
    double final_mean = 0.0;
    double final_std = 0.0;

    friend bool operator==(const ReferenceRow&, const ReferenceRow&) = default;
};

using ReferenceTable = std::vector<ReferenceRow>;

/// The published 3 x 6 delay / reproduction-number ablation table.
const ReferenceTable& published_ablation_table();

/// CSV with header tau,R0,beta,peak_mean,peak_std,final_mean,final_std.
ReferenceTable read_reference_csv(std::istream& in);
ReferenceTable read_reference_csv(const std::string& path);

struct DeviationRow {
    SweepRecord result;
    ReferenceRow reference;
    double peak_dev_rel = 0.0;   ///< (mean - reference) / reference
    double final_dev_rel = 0.0;
    bool peak_flag = false;
    bool final_flag = false;
    std::string explanation;     ///< empty when neither mean is flagged

    bool flagged() const noexcept { return peak_flag || final_flag; }
};

struct DeviationReport {
    std::vector<DeviationRow> rows;
    std::size_t run_count = 0;
    std::size_t flagged_count() const noexcept;
};

/// Compatibility half-width around a reference mean: 3 * std / sqrt(runs) + std.
double compatibility_half_width(double reference_std, std::size_t run_count) noexcept;

/// Matches every result cell to the reference cell at the same (tau, R0) and
/// flags means outside the compatibility band. Throws GridMismatchError when
/// the grids differ.
DeviationReport compare_to_reference(const SweepResult& result, const ReferenceTable& reference);

}  // namespace rumor
