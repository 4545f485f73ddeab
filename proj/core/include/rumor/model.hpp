#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rumor {

inline constexpr std::size_t kCompartments = 6;

enum class Compartment : std::size_t { S = 0, E = 1, I = 2, R = 3, Ig = 4, F = 5 };

inline constexpr std::array<std::string_view, kCompartments> kCompartmentNames = {"S", "E", "I", "R", "Ig", "F"};

constexpr std::size_t index(Compartment c) noexcept { return static_cast<std::size_t>(c); }

/// One point (S, E, I, R, Ig, F) in compartment space.
class StateVector {
public:
    constexpr StateVector() = default;
    constexpr StateVector(double s, double e, double i, double r, double ig, double f) : v_{s, e, i, r, ig, f} {}
    constexpr explicit StateVector(const std::array<double, kCompartments>& v) : v_(v) {}

    constexpr double s() const noexcept { return v_[0]; }
    constexpr double e() const noexcept { return v_[1]; }
    constexpr double i() const noexcept { return v_[2]; }
    constexpr double r() const noexcept { return v_[3]; }
    constexpr double ig() const noexcept { return v_[4]; }
    constexpr double f() const noexcept { return v_[5]; }

    constexpr double operator[](std::size_t k) const noexcept { return v_[k]; }
    constexpr double& operator[](std::size_t k) noexcept { return v_[k]; }
    constexpr double operator[](Compartment c) const noexcept { return v_[index(c)]; }

    constexpr const std::array<double, kCompartments>& values() const noexcept { return v_; }
    constexpr std::array<double, kCompartments>& values() noexcept { return v_; }

    double total() const noexcept;
    double squared_norm() const noexcept;
    bool nonnegative() const noexcept;
    bool finite() const noexcept;

    friend constexpr bool operator==(const StateVector&, const StateVector&) = default;

private:
    std::array<double, kCompartments> v_{};
};

/// Six-component rate vector (drift) or diffusion diagonal.
using Rates = std::array<double, kCompartments>;

/// Per-compartment multipliers on the Wiener increments.
struct NoiseIntensities {
    double s = 0.01;
    double e = 0.01;
    double i = 0.01;
    double r = 0.01;
    double ig = 0.01;
    double f = 0.01;

    static constexpr NoiseIntensities uniform(double level) noexcept { return {level, level, level, level, level, level}; }

    std::array<double, kCompartments> as_array() const noexcept { return {s, e, i, r, ig, f}; }
    double max_squared() const noexcept;
    NoiseIntensities scaled(double factor) const noexcept;

    friend constexpr bool operator==(const NoiseIntensities&, const NoiseIntensities&) = default;
};

/// Rate constants, delay, noise intensities and population size.
///
/// The defaults are the assumed baseline behind the published ablation table:
/// only gamma + rho = 0.15 (with N = 1) is pinned by the reported (R0, beta)
/// pairs; sigma_act, theta, the gamma/rho split, and the noise levels are
/// assumptions.
struct ModelParams {
    double beta = 0.300;       ///< transmission rate
    double sigma_act = 0.25;   ///< exposed -> spreader activation rate
    double gamma = 0.10;       ///< spreader loss-of-interest rate
    double rho = 0.05;         ///< spreader -> skeptical rate
    double theta = 0.10;       ///< fact-checking rate
    double tau = 0.0;          ///< information delay
    NoiseIntensities noise{};
    double population = 1.0;

    double removal_rate() const noexcept { return gamma + rho; }

    /// Copy with beta chosen so that beta * N / (gamma + rho) == r0.
    ModelParams with_reproduction_number(double r0) const noexcept;

    /// Field-qualified descriptions of every violated invariant; empty when valid.
    std::vector<std::string> violations(std::string_view prefix = "model") const;
    /// Throws ConfigError listing all violations.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// (-b S I_tau, b S I_tau - s E, s E - (g + r) I, g I, r I - t Ig, t Ig), where
/// I_tau is the spreader component of the delayed state.
Rates drift(const StateVector& x, const StateVector& x_delayed, const ModelParams& p) noexcept;

/// Diagonal of the multiplicative diffusion matrix: noise_k * x_k.
Rates diffusion(const StateVector& x, const ModelParams& p) noexcept;

/// beta N / (gamma + rho). Throws ConfigError when gamma + rho == 0.
double reproduction_number(const ModelParams& p);

/// (1 - sigma_I^2 / (2 (gamma + rho))) - R0. Positive means the sufficient
/// mean-square stability condition for the rumor-free equilibrium holds.
double stochastic_margin(const ModelParams& p);

// ---------------------------------------------------------------------------
// Well-posedness bound checks (local Lipschitz and linear growth on a ball).

/// Constant K_R with ||b(x,y)||^2 + ||Sigma(x)||^2 <= K_R (1 + ||x||^2 + ||y||^2)
/// whenever ||x||, ||y|| <= radius.
///
/// The bilinear term uses |x1 y3| <= (x1^2 + y3^2) / 2 and x1^2 + y3^2 <= 2 R^2,
/// giving (b x1 y3)^2 <= b^2 R^2 / 2 (||x||^2 + ||y||^2); it appears three times
/// after (a + c)^2 <= 2a^2 + 2c^2 on the first two components. The linear part
/// contributes max(4 s^2, 2 (g + r)^2 + g^2 + 2 r^2, 3 t^2) ||x||^2 and the diffusion
/// max_k noise_k^2 ||x||^2.
double growth_bound_constant(const ModelParams& p, double radius);

/// L_R with ||b(x,y) - b(x',y')|| <= L_R (||x - x'|| + ||y - y'||) on the radius ball:
/// sqrt(2) * beta * R for the bilinear part plus the Frobenius norm of the linear part.
double lipschitz_constant(const ModelParams& p, double radius);

/// sqrt(max_k noise_k^2): global Lipschitz constant of the diffusion.
double diffusion_lipschitz_constant(const ModelParams& p) noexcept;

struct GrowthBoundReport {
    double max_ratio = 0.0;
    double bound_k = 0.0;
    bool pass = false;
};

/// (||b||^2 + ||Sigma||^2) / (1 + ||x||^2 + ||y||^2) at one point pair.
double growth_ratio(const StateVector& x, const StateVector& y, const ModelParams& p) noexcept;

/// Samples `sample_count` nonnegative pairs in the radius ball and compares the
/// largest observed growth ratio against growth_bound_constant.
GrowthBoundReport verify_growth_bound(const ModelParams& p, std::size_t sample_count, double radius,
                                      std::uint64_t rng_seed);

struct LipschitzReport {
    double max_ratio = 0.0;       ///< largest ||db|| / (||dx|| + ||dy||) observed
    double bound_l = 0.0;
    double max_diffusion_ratio = 0.0;
    double diffusion_bound = 0.0;
    bool pass = false;
};

LipschitzReport verify_lipschitz_bound(const ModelParams& p, std::size_t sample_count, double radius,
                                       std::uint64_t rng_seed);

}  // namespace rumor
