#include "rumor/model.hpp"

#include "rumor/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rumor {

double StateVector::total() const noexcept
{
    double sum = 0.0;
    for (double x : v_) sum += x;
    return sum;
}

double StateVector::squared_norm() const noexcept
{
    double sum = 0.0;
    for (double x : v_) sum += x * x;
    return sum;
}

bool StateVector::nonnegative() const noexcept
{
    return std::all_of(v_.begin(), v_.end(), [](double x) { return x >= 0.0; });
}

bool StateVector::finite() const noexcept
{
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

double NoiseIntensities::max_squared() const noexcept
{
    double m = 0.0;
    for (double x : as_array()) m = std::max(m, x * x);
    return m;
}

NoiseIntensities NoiseIntensities::scaled(double factor) const noexcept
{
    return {s * factor, e * factor, i * factor, r * factor, ig * factor, f * factor};
}

ModelParams ModelParams::with_reproduction_number(double r0) const noexcept
{
    ModelParams out = *this;
    out.beta = r0 * removal_rate() / population;
    return out;
}

std::vector<std::string> ModelParams::violations(std::string_view prefix) const
{
    std::vector<std::string> out;
    const std::string pre(prefix);
    auto require = [&](bool ok, const char* field, const char* message) {
        if (!ok) out.push_back(pre + "." + field + ": " + message);
    };
    // NaN fails every comparison, so these also reject non-finite input.
    require(beta > 0.0 && std::isfinite(beta), "beta", "must be > 0");
    require(sigma_act > 0.0 && std::isfinite(sigma_act), "sigma_act", "must be > 0");
    require(gamma > 0.0 && std::isfinite(gamma), "gamma", "must be > 0");
    require(rho > 0.0 && std::isfinite(rho), "rho", "must be > 0");
    require(theta > 0.0 && std::isfinite(theta), "theta", "must be > 0");
    require(tau >= 0.0 && std::isfinite(tau), "tau", "must be >= 0");
    require(population > 0.0 && std::isfinite(population), "population", "must be > 0");
    const auto noise_values = noise.as_array();
    for (std::size_t k = 0; k < kCompartments; ++k) {
        if (!(noise_values[k] >= 0.0 && std::isfinite(noise_values[k]))) {
            out.push_back(pre + ".noise." + std::string(kCompartmentNames[k]) + ": must be >= 0");
        }
    }
    return out;
}

void ModelParams::validate() const
{
    if (auto v = violations(); !v.empty()) throw ConfigError(std::move(v));
}

Rates drift(const StateVector& x, const StateVector& x_delayed, const ModelParams& p) noexcept
{
    const double infection = p.beta * x.s() * x_delayed.i();
    const double activation = p.sigma_act * x.e();
    const double loss_of_interest = p.gamma * x.i();
    const double skepticism = p.rho * x.i();
    const double verification = p.theta * x.ig();
    return {
        -infection,
        infection - activation,
        activation - loss_of_interest - skepticism,
        loss_of_interest,
        skepticism - verification,
        verification,
    };
}

Rates diffusion(const StateVector& x, const ModelParams& p) noexcept
{
    const auto n = p.noise.as_array();
    Rates out{};
    for (std::size_t k = 0; k < kCompartments; ++k) out[k] = n[k] * x[k];
    return out;
}

double reproduction_number(const ModelParams& p)
{
    const double removal = p.removal_rate();
    if (removal == 0.0) throw ConfigError("model.gamma+rho", "removal rate gamma + rho must be nonzero");
    return p.beta * p.population / removal;
}

double stochastic_margin(const ModelParams& p)
{
    const double removal = p.removal_rate();
    if (removal == 0.0) throw ConfigError("model.gamma+rho", "removal rate gamma + rho must be nonzero");
    return (1.0 - p.noise.i * p.noise.i / (2.0 * removal)) - reproduction_number(p);
}

namespace {

double linear_part_frobenius(const ModelParams& p) noexcept
{
    // Nonzero entries of the Jacobian of the linear drift terms in x.
    const double g = p.removal_rate();
    const double sq = 2.0 * p.sigma_act * p.sigma_act + g * g + p.gamma * p.gamma + p.rho * p.rho +
                      2.0 * p.theta * p.theta;
    return std::sqrt(sq);
}

void require_radius(double radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("radius", "must be > 0");
}

// Uniform on the nonnegative orthant of the ball: |gaussian| direction, radius ~ R * U^(1/6).
StateVector sample_nonnegative_ball(std::mt19937_64& rng, double radius)
{
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    StateVector x;
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (std::size_t k = 0; k < kCompartments; ++k) {
            x[k] = std::abs(normal(rng));
            norm2 += x[k] * x[k];
        }
    } while (norm2 == 0.0);
    const double scale = radius * std::pow(uniform(rng), 1.0 / kCompartments) / std::sqrt(norm2);
    for (std::size_t k = 0; k < kCompartments; ++k) x[k] *= scale;
    return x;
}

double squared_norm(const Rates& r) noexcept
{
    double sum = 0.0;
    for (double v : r) sum += v * v;
    return sum;
}

double distance(const StateVector& a, const StateVector& b) noexcept
{
    double sum = 0.0;
    for (std::size_t k = 0; k < kCompartments; ++k) sum += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(sum);
}

}  // namespace

double growth_bound_constant(const ModelParams& p, double radius)
{
    require_radius(radius);
    const double g = p.removal_rate();
    const double bilinear = 3.0 * p.beta * p.beta * radius * radius / 2.0;
    const double linear = std::max({4.0 * p.sigma_act * p.sigma_act,
                                    2.0 * g * g + p.gamma * p.gamma + 2.0 * p.rho * p.rho,
                                    3.0 * p.theta * p.theta});
    return bilinear + linear + p.noise.max_squared();
}

double lipschitz_constant(const ModelParams& p, double radius)
{
    require_radius(radius);
    return std::sqrt(2.0) * p.beta * radius + linear_part_frobenius(p);
}

double diffusion_lipschitz_constant(const ModelParams& p) noexcept { return std::sqrt(p.noise.max_squared()); }

double growth_ratio(const StateVector& x, const StateVector& y, const ModelParams& p) noexcept
{
    const double num = squared_norm(drift(x, y, p)) + squared_norm(diffusion(x, p));
    return num / (1.0 + x.squared_norm() + y.squared_norm());
}

GrowthBoundReport verify_growth_bound(const ModelParams& p, std::size_t sample_count, double radius,
                                      std::uint64_t rng_seed)
{
    if (sample_count == 0) throw ConfigError("sample_count", "must be >= 1");
    GrowthBoundReport report;
    report.bound_k = growth_bound_constant(p, radius);
    std::mt19937_64 rng(rng_seed);
    for (std::size_t n = 0; n < sample_count; ++n) {
        const StateVector x = sample_nonnegative_ball(rng, radius);
        const StateVector y = sample_nonnegative_ball(rng, radius);
        report.max_ratio = std::max(report.max_ratio, growth_ratio(x, y, p));
    }
    report.pass = report.max_ratio <= report.bound_k;
    return report;
}

LipschitzReport verify_lipschitz_bound(const ModelParams& p, std::size_t sample_count, double radius,
                                       std::uint64_t rng_seed)
{
    if (sample_count == 0) throw ConfigError("sample_count", "must be >= 1");
    LipschitzReport report;
    report.bound_l = lipschitz_constant(p, radius);
    report.diffusion_bound = diffusion_lipschitz_constant(p);
    std::mt19937_64 rng(rng_seed);
    for (std::size_t n = 0; n < sample_count; ++n) {
        const StateVector x = sample_nonnegative_ball(rng, radius);
        const StateVector y = sample_nonnegative_ball(rng, radius);
        const StateVector xb = sample_nonnegative_ball(rng, radius);
        const StateVector yb = sample_nonnegative_ball(rng, radius);

        const Rates b = drift(x, y, p);
        const Rates bb = drift(xb, yb, p);
        Rates db{};
        for (std::size_t k = 0; k < kCompartments; ++k) db[k] = b[k] - bb[k];
        const double denom = distance(x, xb) + distance(y, yb);
        if (denom > 0.0) report.max_ratio = std::max(report.max_ratio, std::sqrt(squared_norm(db)) / denom);

        const Rates s = diffusion(x, p);
        const Rates sb = diffusion(xb, p);
        Rates ds{};
        for (std::size_t k = 0; k < kCompartments; ++k) ds[k] = s[k] - sb[k];
        const double dx = distance(x, xb);
        if (dx > 0.0) report.max_diffusion_ratio = std::max(report.max_diffusion_ratio, std::sqrt(squared_norm(ds)) / dx);
    }
    // Rounding slack on the diffusion ratio, which can touch its bound exactly.
    report.pass = report.max_ratio <= report.bound_l &&
                  report.max_diffusion_ratio <= report.diffusion_bound * (1.0 + 1e-12);
    return report;
}

}  // namespace rumor
