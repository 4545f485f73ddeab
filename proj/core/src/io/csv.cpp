#include "rumor/io/csv.hpp"

#include "rumor/error.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace rumor::io {

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory)
{
    out << "t";
    for (auto name : kCompartmentNames) out << ',' << name;
    out << '\n';
    for (std::size_t n = 0; n < trajectory.size(); ++n) {
        out << format_number(trajectory.times[n]);
        for (double v : trajectory.states[n].values()) out << ',' << format_number(v);
        out << '\n';
    }
}

void write_summary_csv(std::ostream& out, const EnsembleSummary& summary)
{
    out << "t";
    for (auto name : kCompartmentNames) {
        out << ',' << name << "_mean," << name << "_std," << name << "_lo," << name << "_hi";
    }
    out << '\n';
    for (std::size_t n = 0; n < summary.times.size(); ++n) {
        out << format_number(summary.times[n]);
        for (const auto& c : summary.compartments) {
            out << ',' << format_number(c.mean[n]) << ',' << format_number(c.stddev[n]) << ','
                << format_number(c.lower[n]) << ',' << format_number(c.upper[n]);
        }
        out << '\n';
    }
}

void write_metrics_csv(std::ostream& out, const OutbreakMetrics& metrics)
{
    out << "run,peak_I,peak_t,final_size\n";
    for (std::size_t k = 0; k < metrics.runs.size(); ++k) {
        const auto& m = metrics.runs[k];
        out << k << ',' << format_number(m.peak_i) << ',' << format_number(m.peak_time) << ','
            << format_number(m.final_size) << '\n';
    }
}

void write_metrics_aggregate_csv(std::ostream& out, const OutbreakMetrics& metrics, std::size_t run_count)
{
    write_key_value_csv(out, {
                                 {"run_count", std::to_string(run_count)},
                                 {"peak_mean", format_number(metrics.peak_mean)},
                                 {"peak_std", format_number(metrics.peak_std)},
                                 {"final_mean", format_number(metrics.final_mean)},
                                 {"final_std", format_number(metrics.final_std)},
                                 {"mean_trajectory_peak", format_number(metrics.mean_trajectory_peak)},
                                 {"mean_trajectory_peak_t", format_number(metrics.mean_trajectory_peak_time)},
                             });
}

namespace {

void write_sweep_columns(std::ostream& out, const SweepRecord& r)
{
    out << format_number(r.tau) << ',' << format_number(r.r0) << ',' << format_number(r.beta) << ','
        << format_number(r.peak_mean) << ',' << format_number(r.peak_std) << ',' << format_number(r.final_mean) << ','
        << format_number(r.final_std);
}

constexpr const char* kSweepHeader = "tau,R0,beta,peak_mean,peak_std,final_mean,final_std";

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& result)
{
    out << kSweepHeader << '\n';
    for (const auto& r : result.records) {
        write_sweep_columns(out, r);
        out << '\n';
    }
}

void write_deviation_csv(std::ostream& out, const DeviationReport& report)
{
    out << "# run_count=" << report.run_count << '\n';
    out << "# flagged_cells=" << report.flagged_count() << '\n';
    out << kSweepHeader
        << ",paper_peak_mean,paper_peak_std,paper_final_mean,paper_final_std,peak_dev_rel,final_dev_rel,flag,"
           "explanation\n";
    for (const auto& row : report.rows) {
        write_sweep_columns(out, row.result);
        out << ',' << format_number(row.reference.peak_mean) << ',' << format_number(row.reference.peak_std) << ','
            << format_number(row.reference.final_mean) << ',' << format_number(row.reference.final_std) << ','
            << format_number(row.peak_dev_rel) << ',' << format_number(row.final_dev_rel) << ','
            << (row.flagged() ? 1 : 0) << ',' << csv_field(row.explanation) << '\n';
    }
}

void write_reference_csv(std::ostream& out, const ReferenceTable& table)
{
    out << kSweepHeader << '\n';
    for (const auto& r : table) {
        out << format_number(r.tau) << ',' << format_number(r.r0) << ',' << format_number(r.beta) << ','
            << format_number(r.peak_mean) << ',' << format_number(r.peak_std) << ',' << format_number(r.final_mean)
            << ',' << format_number(r.final_std) << '\n';
    }
}

void write_decay_csv(std::ostream& out, const MeanSquareDecayReport& report)
{
    out << "# margin=" << format_number(report.margin) << '\n';
    out << "# verdict=" << to_string(report.verdict) << '\n';
    out << "# fitted_rate=" << format_number(report.fitted_rate) << '\n';
    out << "# run_count=" << report.run_count << '\n';
    out << "t,ms_estimate\n";
    for (std::size_t n = 0; n < report.times.size(); ++n) {
        out << format_number(report.times[n]) << ',' << format_number(report.estimate[n]) << '\n';
    }
}

void write_key_value_csv(std::ostream& out, const Metadata& rows)
{
    out << "quantity,value\n";
    for (const auto& [key, value] : rows) out << csv_field(key) << ',' << csv_field(value) << '\n';
}

SweepResult read_sweep_csv(std::istream& in, std::size_t run_count)
{
    // Same layout as a reference table.
    const auto rows = read_reference_csv(in);
    SweepResult result;
    result.run_count = run_count;
    for (const auto& r : rows) {
        SweepRecord rec;
        rec.tau = r.tau;
        rec.r0 = r.r0;
        rec.beta = r.beta;
        rec.peak_mean = r.peak_mean;
        rec.peak_std = r.peak_std;
        rec.final_mean = r.final_mean;
        rec.final_std = r.final_std;
        result.records.push_back(std::move(rec));
    }
    return result;
}

}  // namespace rumor::io
