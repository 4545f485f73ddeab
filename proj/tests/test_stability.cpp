#include "oracles.hpp"

#include "rumor/error.hpp"
#include "rumor/stability.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace rumor;
using Catch::Approx;

TEST_CASE("equilibrium classification", "[stability]")
{
    ModelParams p;
    CHECK(classify_equilibrium({1, 0, 0, 0, 0, 0}, p, 1e-9).classification == EquilibriumClass::RumorFree);
    const auto family = classify_equilibrium({0.4, 0, 0, 0.35, 0, 0.25}, p, 1e-9);
    CHECK(family.classification == EquilibriumClass::RumorFreeFamily);
    CHECK(family.drift_residual == 0.0);
    CHECK(family.conservation_residual == Approx(0.0).margin(1e-15));

    const auto outbreak = classify_equilibrium({0.9, 0.05, 0.05, 0, 0, 0}, p, 1e-9);
    CHECK(outbreak.classification == EquilibriumClass::NotEquilibrium);
    CHECK(outbreak.drift_residual > 0.0);
    // Nonzero ignorants decay into F, so this is not a steady state either.
    CHECK(classify_equilibrium({0.9, 0, 0, 0, 0.1, 0}, p, 1e-9).classification == EquilibriumClass::NotEquilibrium);

    CHECK(to_string(EquilibriumClass::RumorFree) == "rumor-free");
    CHECK_THROWS_AS(classify_equilibrium({1, 0, 0, 0, 0, 0}, p, 0.0), ConfigError);
}

TEST_CASE("threshold report", "[stability]")
{
    ModelParams p = ModelParams{}.with_reproduction_number(0.5);
    p.noise.i = 0.0;
    const auto t = thresholds(p);
    CHECK(t.reproduction_number == Approx(0.5));
    CHECK(t.stochastic_margin == Approx(0.5));
    CHECK(t.deterministic_stable);
    CHECK(t.mean_square_condition);

    const auto hot = thresholds(ModelParams{}.with_reproduction_number(2.0));
    CHECK_FALSE(hot.deterministic_stable);
    CHECK_FALSE(hot.mean_square_condition);
}

TEST_CASE("decay verdicts from the moment ratio", "[stability]")
{
    CHECK(classify_decay(1.0, 0.005) == Verdict::Decay);
    CHECK(classify_decay(1.0, 0.01) == Verdict::Decay);
    CHECK(classify_decay(1.0, 0.5) == Verdict::Inconclusive);
    CHECK(classify_decay(1.0, 150.0) == Verdict::Growth);
    CHECK(classify_decay(0.0, 1.0) == Verdict::Inconclusive);
}

TEST_CASE("decay rate fit recovers an exponential", "[stability]")
{
    std::vector<double> t, y;
    for (int n = 0; n <= 100; ++n) {
        t.push_back(n);
        y.push_back(3.0 * std::exp(-0.2 * n));
    }
    CHECK(fit_decay_rate(t, y) == Approx(-0.2));
    CHECK(std::isnan(fit_decay_rate({}, {})));
}

TEST_CASE("noise-free linearization matches the closed form", "[stability]")
{
    ModelParams p;
    p.beta = 0.0;
    p.noise = NoiseIntensities::uniform(0.0);
    const double e0 = 0.01, i0 = 0.005;
    const auto rep = simulate_linearized(p, e0, i0, {0.001, 20.0, false, 100}, 1, 1);
    const double s = p.sigma_act, g = p.removal_rate();
    for (std::size_t n = 0; n < rep.times.size(); ++n) {
        const double t = rep.times[n];
        const double e = e0 * std::exp(-s * t);
        const double i = i0 * std::exp(-g * t) + e0 * s / (g - s) * (std::exp(-s * t) - std::exp(-g * t));
        CHECK(rep.estimate[n] == Approx(e * e + i * i).epsilon(2e-3));
    }
}

TEST_CASE("second moments under noise follow their moment equations", "[stability]")
{
    // With beta = 0 the moments m_EE, m_EI, m_II obey a closed linear system:
    //   m_EE' = (nE^2 - 2 s) m_EE
    //   m_EI' = s m_EE - (s + g) m_EI
    //   m_II' = 2 s m_EI + (nI^2 - 2 g) m_II
    ModelParams p;
    p.beta = 0.0;
    p.noise = NoiseIntensities::uniform(0.0);
    p.noise.e = 0.3;
    p.noise.i = 0.2;
    const double horizon = 5.0;
    const auto rep = simulate_linearized(p, 1.0, 0.0, {0.01, horizon, false, 100}, 20000, 3);

    const double s = p.sigma_act, g = p.removal_rate();
    double ee = 1.0, ei = 0.0, ii = 0.0;
    const double dt = 1e-4;
    for (int n = 0; n < static_cast<int>(horizon / dt); ++n) {
        const double dee = (0.09 - 2 * s) * ee;
        const double dei = s * ee - (s + g) * ei;
        const double dii = 2 * s * ei + (0.04 - 2 * g) * ii;
        ee += dt * dee;
        ei += dt * dei;
        ii += dt * dii;
    }
    CHECK(rep.terminal() == Approx(ee + ii).epsilon(0.03));
}

TEST_CASE("linearized ensemble decays below threshold and grows above it", "[stability]")
{
    ModelParams cool = ModelParams{}.with_reproduction_number(0.5);
    cool.tau = 5.0;
    const auto decay = simulate_linearized(cool, 0.0, 0.005, {0.1, 400.0, true, 10}, 50, 7);
    CHECK(decay.margin > 0.0);
    CHECK(decay.verdict == Verdict::Decay);
    CHECK(decay.fitted_rate < 0.0);

    ModelParams hot = ModelParams{}.with_reproduction_number(2.0);
    hot.noise = NoiseIntensities::uniform(0.0);
    const auto growth = simulate_linearized(hot, 0.0, 0.005, {0.1, 400.0, true, 10}, 5, 7);
    CHECK(growth.verdict == Verdict::Growth);
    CHECK(growth.fitted_rate > 0.0);
}

TEST_CASE("linearized input validation", "[stability]")
{
    ModelParams p;
    CHECK_THROWS_AS(simulate_linearized(p, 0.0, 0.0, {}, 10, 1), ConfigError);
    CHECK_THROWS_AS(simulate_linearized(p, 0.0, 0.1, {}, 0, 1), ConfigError);
}

TEST_CASE("final size agrees with a long RK4 run", "[stability]")
{
    ModelParams p = ModelParams{}.with_reproduction_number(1.5);
    p.noise = NoiseIntensities::uniform(0.0);
    const double horizon = 2000.0;
    const auto history = HistoryFunction::seeded_spreaders(0.005, 1.0);
    const auto path = integrate(p, history, {0.01, horizon, true, 1000}, 0);
    const auto rep = final_size(path, p);
    const auto ref = oracle::rk4(history.at(0).values(), {p.beta, p.sigma_act, p.gamma, p.rho, p.theta}, 0.01, horizon).back();
    CHECK(std::abs(rep.s_inf - ref[0]) <= 1e-3);
    CHECK(std::abs(rep.r_inf - ref[3]) <= 1e-3);
    CHECK(std::abs(rep.f_inf - ref[5]) <= 1e-3);
    CHECK(rep.conservation_residual <= 1e-9);
    CHECK_FALSE(rep.warning.has_value());
    CHECK(rep.outbreak_size() > 0.5);
}

TEST_CASE("final size warns while spreaders remain", "[stability]")
{
    ModelParams p = ModelParams{}.with_reproduction_number(2.0);
    p.noise = NoiseIntensities::uniform(0.0);
    const auto path = integrate(p, HistoryFunction::seeded_spreaders(0.005, 1.0), {0.1, 30.0, true, 1}, 0);
    CHECK(final_size(path, p).warning.has_value());
}

TEST_CASE("moment envelope bounds a small ensemble", "[stability]")
{
    ModelParams p = ModelParams{}.with_reproduction_number(2.0);
    p.tau = 10.0;
    const auto history = HistoryFunction::seeded_spreaders(0.005, 1.0);
    EnsembleOptions o;
    o.run_count = 10;
    const auto r = run_ensemble(p, history, {0.1, 200.0, true, 10}, o);
    const auto rep = check_moment_bound(r.summary, p, history);
    CHECK(rep.pass);
    CHECK(rep.non_finite == 0);
    CHECK(rep.razumikhin_q >= 1.0);
    CHECK(rep.max_envelope_fraction <= 1.0);
    CHECK(rep.generator_c == Approx(generator_constant(p)));
}
