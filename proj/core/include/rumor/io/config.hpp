#pragma once

#include "rumor/ablation.hpp"
#include "rumor/ensemble.hpp"
#include "rumor/history.hpp"
#include "rumor/integrator.hpp"
#include "rumor/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rumor::io {

enum class OutputFormat { Csv, Svg, Both };

struct StabilitySettings {
    double e0 = 0.0;
    double i0 = 0.005;
    std::size_t runs = 200;
    double horizon = 400.0;             ///< horizon of the linearized ensemble
    std::uint64_t seed = 7;
    double equilibrium_tol = 1e-9;
    std::size_t growth_samples = 100000;
    std::size_t lipschitz_samples = 100000;
    std::vector<double> radii{1.0, 10.0};

    friend bool operator==(const StabilitySettings&, const StabilitySettings&) = default;
};

struct SweepSettings {
    std::vector<double> taus{0.0, 5.0, 10.0};
    std::vector<double> r0s{0.5, 0.8, 1.0, 1.2, 1.5, 2.0};
    std::size_t runs = 100;
    std::uint64_t seed = 2024;
    std::string reference;  ///< CSV path; empty uses the built-in published table

    friend bool operator==(const SweepSettings&, const SweepSettings&) = default;
};

/// Everything one CLI invocation needs, with every default resolved.
struct RunConfig {
    ModelParams model{};
    /// Constant history; defaults to (N - 0.005, 0, 0.005, 0, 0, 0).
    StateVector initial{0.995, 0.0, 0.005, 0.0, 0.0, 0.0};
    IntegratorConfig integrator{};
    EnsembleOptions ensemble{};
    StabilitySettings stability{};
    SweepSettings sweep{};
    std::string output_dir = "out";
    OutputFormat format = OutputFormat::Csv;

    HistoryFunction history() const;
    SweepSpec sweep_spec() const;

    /// Every invariant violation across all blocks.
    std::vector<std::string> violations() const;
};

/// Parses a JSON document. Unknown keys and wrong types are reported together
/// with semantic violations in a single ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Effective configuration as pretty-printed JSON with every field present.
std::string dump_config(const RunConfig& config);

std::optional<OutputFormat> parse_output_format(const std::string& s) noexcept;
std::string to_string(OutputFormat f);

}  // namespace rumor::io
