#pragma once

#include "rumor/ablation.hpp"
#include "rumor/ensemble.hpp"
#include "rumor/integrator.hpp"
#include "rumor/stability.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

// CSV dialect: comma separated, '\n' line endings, one header row, '#' metadata
// lines only before the header, numbers with 9 significant digits.
namespace rumor::io {

/// printf "%.9g".
std::string format_number(double v);

/// Quotes a field that contains a comma, quote or newline.
std::string csv_field(const std::string& s);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// t,S,E,I,R,Ig,F
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// t,<c>_mean,<c>_std,<c>_lo,<c>_hi for each compartment c.
void write_summary_csv(std::ostream& out, const EnsembleSummary& summary);

/// run,peak_I,peak_t,final_size
void write_metrics_csv(std::ostream& out, const OutbreakMetrics& metrics);

/// quantity,value rows for the ensemble-level metrics.
void write_metrics_aggregate_csv(std::ostream& out, const OutbreakMetrics& metrics, std::size_t run_count);

/// tau,R0,beta,peak_mean,peak_std,final_mean,final_std
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// Sweep columns, then paper_peak_mean,paper_peak_std,paper_final_mean,paper_final_std,
/// peak_dev_rel,final_dev_rel,flag,explanation.
void write_deviation_csv(std::ostream& out, const DeviationReport& report);

void write_reference_csv(std::ostream& out, const ReferenceTable& table);

/// '#'-prefixed metadata (margin, verdict, fitted rate), then t,ms_estimate.
void write_decay_csv(std::ostream& out, const MeanSquareDecayReport& report);

/// quantity,value
void write_key_value_csv(std::ostream& out, const Metadata& rows);

/// Reads back a sweep CSV written by write_sweep_csv.
SweepResult read_sweep_csv(std::istream& in, std::size_t run_count);

}  // namespace rumor::io
