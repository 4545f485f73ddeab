#include "oracles.hpp"

#include "rumor/error.hpp"
#include "rumor/model.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace rumor;
using Catch::Approx;

namespace {

oracle::Rates rates_of(const ModelParams& p)
{
    return {p.beta, p.sigma_act, p.gamma, p.rho, p.theta};
}

}  // namespace

TEST_CASE("drift matches the term-by-term formula", "[model]")
{
    ModelParams p;
    const StateVector x(0.6, 0.1, 0.2, 0.05, 0.03, 0.02);
    const StateVector y(0.7, 0.05, 0.15, 0.05, 0.03, 0.02);
    const Rates b = drift(x, y, p);
    const auto expected = oracle::rhs(x.values(), y.i(), rates_of(p));
    for (std::size_t k = 0; k < kCompartments; ++k) CHECK(b[k] == Approx(expected[k]).margin(1e-15));

    // Only the spreader component of the delayed state matters.
    StateVector y2 = y;
    y2[0] = 0.0;
    y2[3] = 0.9;
    CHECK(drift(x, y2, p) == b);
}

TEST_CASE("drift components sum to zero", "[model]")
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 1000; ++n) {
        ModelParams p;
        p.beta = 2 * u(gen);
        p.sigma_act = u(gen);
        p.gamma = u(gen);
        p.rho = u(gen);
        p.theta = u(gen);
        StateVector x, y;
        for (std::size_t k = 0; k < kCompartments; ++k) {
            x[k] = u(gen);
            y[k] = u(gen);
        }
        const Rates b = drift(x, y, p);
        double sum = 0, scale = 0;
        for (double v : b) {
            sum += v;
            scale += std::abs(v);
        }
        REQUIRE(std::abs(sum) <= 1e-12 * std::max(scale, 1e-300));
    }
}

TEST_CASE("states without rumor carriers are fixed points", "[model]")
{
    ModelParams p;
    const StateVector x(0.5, 0.0, 0.0, 0.3, 0.0, 0.2);
    for (double v : drift(x, x, p)) CHECK(v == 0.0);
}

TEST_CASE("diffusion is the componentwise product with the noise levels", "[model]")
{
    ModelParams p;
    p.noise = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const StateVector x(1, 2, 3, 4, 5, 6);
    const Rates g = diffusion(x, p);
    const Rates expected{0.1, 0.4, 0.9, 1.6, 2.5, 3.6};
    for (std::size_t k = 0; k < kCompartments; ++k) CHECK(g[k] == Approx(expected[k]));
    CHECK(diffusion(StateVector{}, p) == Rates{});
}

TEST_CASE("reproduction number and stochastic margin", "[model]")
{
    ModelParams p;
    p.beta = 0.3;
    p.gamma = 0.1;
    p.rho = 0.05;
    CHECK(reproduction_number(p) == Approx(2.0));
    p.beta = 0.15;
    CHECK(reproduction_number(p) == Approx(1.0));
    p.beta = 0.0;
    CHECK(reproduction_number(p) == 0.0);

    p = ModelParams{}.with_reproduction_number(0.5);
    p.noise.i = 0.0;
    CHECK(stochastic_margin(p) == Approx(0.5));

    p = ModelParams{}.with_reproduction_number(2.0);
    p.noise.i = 0.0;
    CHECK(stochastic_margin(p) == Approx(-1.0));

    p = ModelParams{}.with_reproduction_number(0.8);
    p.noise.i = 0.1;
    CHECK(stochastic_margin(p) == Approx(1.0 - 0.01 / 0.3 - 0.8));
    CHECK(stochastic_margin(p) == Approx(0.16667).epsilon(1e-4));

    ModelParams bad;
    bad.gamma = 0.0;
    bad.rho = 0.0;
    CHECK_THROWS_AS(reproduction_number(bad), ConfigError);
}

TEST_CASE("reproduction number grows with beta and margin falls with noise", "[model]")
{
    ModelParams p;
    double last_r0 = -1, last_margin = 2;
    for (double beta : {0.01, 0.05, 0.1, 0.2, 0.4}) {
        p.beta = beta;
        const double r0 = reproduction_number(p);
        CHECK(r0 > last_r0);
        last_r0 = r0;
    }
    p.beta = 0.05;
    for (double s : {0.0, 0.1, 0.2, 0.4}) {
        p.noise.i = s;
        const double m = stochastic_margin(p);
        CHECK(m < last_margin);
        last_margin = m;
    }
}

TEST_CASE("with_reproduction_number sets beta", "[model]")
{
    const ModelParams p = ModelParams{}.with_reproduction_number(1.2);
    CHECK(p.beta == Approx(0.18));
    CHECK(reproduction_number(p) == Approx(1.2));
}

TEST_CASE("parameter validation lists every violation", "[model]")
{
    ModelParams p;
    p.beta = -1;
    p.theta = 0;
    p.noise.ig = -0.1;
    const auto v = p.violations();
    REQUIRE(v.size() == 3);
    CHECK(v[0].rfind("model.beta:", 0) == 0);
    CHECK(v[1].rfind("model.theta:", 0) == 0);
    CHECK(v[2].rfind("model.noise.Ig:", 0) == 0);
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_NOTHROW(ModelParams{}.validate());
}

TEST_CASE("growth bound holds on sampled balls", "[model]")
{
    ModelParams p;
    p.noise = NoiseIntensities::uniform(0.2);
    for (double radius : {0.5, 1.0, 10.0}) {
        const auto rep = verify_growth_bound(p, 20000, radius, 3);
        CHECK(rep.pass);
        CHECK(rep.max_ratio <= rep.bound_k);
        CHECK(rep.max_ratio > 0.0);
    }
    CHECK(growth_bound_constant(p, 10.0) > growth_bound_constant(p, 1.0));
}

TEST_CASE("growth ratio at a single point", "[model]")
{
    ModelParams p;
    p.noise = NoiseIntensities::uniform(0.0);
    const StateVector x(1, 0, 0, 0, 0, 0);
    const StateVector y(0, 0, 1, 0, 0, 0);
    // drift = (-beta, beta, 0, 0, 0, 0), so ||b||^2 = 2 beta^2 over 1 + 1 + 1.
    CHECK(growth_ratio(x, y, p) == Approx(2 * p.beta * p.beta / 3));
}

TEST_CASE("Lipschitz bound holds on sampled balls", "[model]")
{
    ModelParams p;
    p.noise = {0.01, 0.02, 0.05, 0.0, 0.1, 0.03};
    for (double radius : {1.0, 10.0}) {
        const auto rep = verify_lipschitz_bound(p, 20000, radius, 5);
        CHECK(rep.pass);
        CHECK(rep.max_ratio <= rep.bound_l);
        CHECK(rep.max_diffusion_ratio <= rep.diffusion_bound * (1 + 1e-12));
    }
    CHECK(diffusion_lipschitz_constant(p) == Approx(0.1));
    CHECK(lipschitz_constant(p, 10.0) > lipschitz_constant(p, 1.0));
}

TEST_CASE("bound checks reject bad arguments", "[model]")
{
    ModelParams p;
    CHECK_THROWS_AS(growth_bound_constant(p, 0.0), ConfigError);
    CHECK_THROWS_AS(verify_growth_bound(p, 0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(verify_lipschitz_bound(p, 0, 1.0, 1), ConfigError);
}
