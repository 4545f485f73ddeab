#include "rumor/ablation.hpp"

#include "rumor/error.hpp"
#include "rumor/history.hpp"
#include "rumor/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rumor {

std::vector<std::string> SweepSpec::violations(std::string_view prefix) const
{
    std::vector<std::string> out;
    const std::string pre(prefix);
    if (taus.empty()) out.push_back(pre + ".taus: must not be empty");
    if (r0s.empty()) out.push_back(pre + ".r0s: must not be empty");
    for (double r0 : r0s) {
        if (!(r0 > 0.0) || !std::isfinite(r0)) {
            out.push_back(pre + ".r0s: every R0 must be > 0 so that beta > 0");
            break;
        }
    }
    for (double tau : taus) {
        if (!(tau >= 0.0) || !std::isfinite(tau)) {
            out.push_back(pre + ".taus: every tau must be >= 0");
            continue;
        }
        for (auto v : integrator.violations(tau, pre + ".integrator")) {
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
        }
    }
    ModelParams probe = base;
    probe.tau = 0.0;
    for (auto v : probe.violations(pre + ".model")) out.push_back(std::move(v));
    if (!(initial_spreaders > 0.0 && initial_spreaders <= base.population)) {
        out.push_back(pre + ".initial_spreaders: must lie in (0, N]");
    }
    for (auto v : ensemble.violations(pre + ".ensemble")) out.push_back(std::move(v));
    return out;
}

ModelParams SweepSpec::cell_params(double tau, double r0) const
{
    ModelParams p = base.with_reproduction_number(r0);
    p.tau = tau;
    return p;
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t tau_index, std::size_t r0_index) noexcept
{
    return derive_seed(derive_seed(base_seed, tau_index), r0_index);
}

SweepResult run_sweep(const SweepSpec& spec)
{
    if (auto v = spec.violations(); !v.empty()) throw ConfigError(std::move(v));
    const auto history = HistoryFunction::seeded_spreaders(spec.initial_spreaders, spec.base.population);

    SweepResult result;
    result.run_count = spec.ensemble.run_count;
    for (std::size_t ti = 0; ti < spec.taus.size(); ++ti) {
        for (std::size_t ri = 0; ri < spec.r0s.size(); ++ri) {
            const double tau = spec.taus[ti];
            const double r0 = spec.r0s[ri];
            const ModelParams p = spec.cell_params(tau, r0);
            EnsembleOptions options = spec.ensemble;
            options.base_seed = cell_seed(spec.ensemble.base_seed, ti, ri);
            options.retain_trajectories = false;

            EnsembleResult ensemble;
            try {
                ensemble = run_ensemble(p, history, spec.integrator, options);
            } catch (const std::exception& e) {
                std::ostringstream where;
                where << "cell tau=" << tau << " R0=" << r0;
                throw RunError(where.str(), e);
            }
            SweepRecord rec;
            rec.tau = tau;
            rec.r0 = r0;
            rec.beta = p.beta;
            rec.peak_mean = ensemble.metrics.peak_mean;
            rec.peak_std = ensemble.metrics.peak_std;
            rec.final_mean = ensemble.metrics.final_mean;
            rec.final_std = ensemble.metrics.final_std;
            rec.warnings = std::move(ensemble.warnings);
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

const ReferenceTable& published_ablation_table()
{
    static const ReferenceTable table = {
        {0, 0.5, 0.075, 0.00527, 0.00006, 0.0194, 0.0020},
        {0, 0.8, 0.120, 0.00544, 0.00007, 0.0465, 0.0085},
        {0, 1.0, 0.150, 0.00693, 0.00350, 0.1233, 0.0536},
        {0, 1.2, 0.180, 0.01618, 0.00784, 0.2988, 0.1191},
        {0, 1.5, 0.225, 0.04420, 0.01301, 0.5726, 0.1119},
        {0, 2.0, 0.300, 0.09704, 0.01714, 0.8105, 0.1062},
        {5, 0.5, 0.075, 0.00529, 0.00008, 0.0234, 0.0023},
        {5, 0.8, 0.120, 0.00541, 0.00009, 0.0526, 0.0095},
        {5, 1.0, 0.150, 0.00620, 0.00175, 0.1233, 0.0290},
        {5, 1.2, 0.180, 0.01331, 0.00540, 0.2641, 0.0844},
        {5, 1.5, 0.225, 0.03174, 0.01058, 0.5230, 0.1247},
        {5, 2.0, 0.300, 0.06572, 0.01270, 0.7445, 0.1110},
        {10, 0.5, 0.075, 0.00529, 0.00006, 0.0262, 0.0032},
        {10, 0.8, 0.120, 0.00540, 0.00007, 0.0595, 0.0129},
        {10, 1.0, 0.150, 0.00583, 0.00066, 0.1224, 0.0273},
        {10, 1.2, 0.180, 0.01130, 0.00440, 0.2337, 0.0592},
        {10, 1.5, 0.225, 0.02575, 0.00873, 0.4709, 0.1295},
        {10, 2.0, 0.300, 0.05448, 0.01315, 0.7429, 0.1261},
    };
    return table;
}

namespace {

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

ReferenceTable read_reference_csv(std::istream& in)
{
    static const std::vector<std::string> expected = {"tau", "R0", "beta", "peak_mean", "peak_std", "final_mean",
                                                      "final_std"};
    ReferenceTable table;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line.front() == '#') continue;
            if (split_fields(line) != expected) {
                throw ConfigError("reference", "unexpected header on line " + std::to_string(line_no));
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != expected.size()) {
            throw ConfigError("reference", "expected 7 fields on line " + std::to_string(line_no));
        }
        double v[7];
        for (std::size_t k = 0; k < 7; ++k) {
            try {
                std::size_t used = 0;
                v[k] = std::stod(fields[k], &used);
                if (used != fields[k].size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw ConfigError("reference", "bad number '" + fields[k] + "' on line " + std::to_string(line_no));
            }
        }
        table.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
    }
    if (!header_seen) throw ConfigError("reference", "missing header");
    return table;
}

ReferenceTable read_reference_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("reference", "cannot open " + path);
    return read_reference_csv(in);
}

std::size_t DeviationReport::flagged_count() const noexcept
{
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.flagged(); }));
}

double compatibility_half_width(double reference_std, std::size_t run_count) noexcept
{
    return 3.0 * reference_std / std::sqrt(static_cast<double>(std::max<std::size_t>(run_count, 1))) + reference_std;
}

DeviationReport compare_to_reference(const SweepResult& result, const ReferenceTable& reference)
{
    constexpr double kKeyTolerance = 1e-9;
    if (result.records.size() != reference.size()) {
        throw GridMismatchError("result has " + std::to_string(result.records.size()) + " cells, reference has " +
                                std::to_string(reference.size()));
    }
    DeviationReport report;
    report.run_count = result.run_count;
    for (const auto& rec : result.records) {
        const auto match = std::find_if(reference.begin(), reference.end(), [&](const ReferenceRow& row) {
            return std::abs(row.tau - rec.tau) <= kKeyTolerance && std::abs(row.r0 - rec.r0) <= kKeyTolerance;
        });
        if (match == reference.end()) {
            std::ostringstream os;
            os << "no reference cell for tau=" << rec.tau << " R0=" << rec.r0;
            throw GridMismatchError(os.str());
        }
        DeviationRow row;
        row.result = rec;
        row.reference = *match;
        row.peak_dev_rel = (rec.peak_mean - match->peak_mean) / match->peak_mean;
        row.final_dev_rel = (rec.final_mean - match->final_mean) / match->final_mean;
        const double peak_half = compatibility_half_width(match->peak_std, result.run_count);
        const double final_half = compatibility_half_width(match->final_std, result.run_count);
        row.peak_flag = std::abs(rec.peak_mean - match->peak_mean) > peak_half;
        row.final_flag = std::abs(rec.final_mean - match->final_mean) > final_half;
        if (row.flagged()) {
            std::ostringstream os;
            if (row.peak_flag) {
                os << "peak_mean " << rec.peak_mean << " outside " << match->peak_mean << " +/- " << peak_half << "; ";
            }
            if (row.final_flag) {
                os << "final_mean " << rec.final_mean << " outside " << match->final_mean << " +/- " << final_half
                   << "; ";
            }
            os << "reference parameters beyond (tau, R0, beta) are unpublished, defaults are assumptions";
            row.explanation = os.str();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace rumor
