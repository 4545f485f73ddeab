#include "rumor/ensemble.hpp"
#include "rumor/error.hpp"
#include "rumor/io/config.hpp"
#include "rumor/io/csv.hpp"
#include "rumor/io/svg.hpp"

#include <catch_amalgamated.hpp>

#include <regex>
#include <sstream>

using namespace rumor;
using Catch::Approx;

namespace {

using Points = std::vector<std::pair<double, double>>;

// Coordinates of the first element whose opening tag starts with `tag`.
Points points_of(const std::string& svg, const std::string& tag)
{
    const auto at = svg.find(tag);
    REQUIRE(at != std::string::npos);
    const auto start = svg.find("points=\"", at) + 8;
    const auto end = svg.find('"', start);
    std::istringstream in(svg.substr(start, end - start));
    Points out;
    std::string pair;
    while (in >> pair) {
        const auto comma = pair.find(',');
        out.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
    return out;
}

}  // namespace

TEST_CASE("constant series is drawn through the middle of the plot", "[io][svg]")
{
    const std::vector<io::PlotSeries> s{{"flat", {0, 1, 2, 3}, {0.5, 0.5, 0.5, 0.5}, std::nullopt}};
    const std::string svg = io::render_svg(s, {"t", "x", "y"});
    const auto pts = points_of(svg, "<polyline class=\"series\"");
    REQUIRE(pts.size() == 4);
    const double middle = 40 + (440 - 40 - 52) / 2.0;
    for (const auto& [x, y] : pts) CHECK(y == Approx(middle));
    CHECK(svg.find("0.45") != std::string::npos);
    CHECK(svg.find("0.55") != std::string::npos);
}

TEST_CASE("the band polygon encloses the mean line", "[io][svg]")
{
    ModelParams p = ModelParams{}.with_reproduction_number(2.0);
    p.noise = NoiseIntensities::uniform(0.05);
    EnsembleOptions o;
    o.run_count = 100;
    const auto r = run_ensemble(p, HistoryFunction::seeded_spreaders(0.005, 1.0), {0.1, 200.0, true, 10}, o);
    const auto& i = r.summary[Compartment::I];
    const std::vector<io::PlotSeries> s{{"I", r.summary.times, i.mean, io::PlotBand{i.lower, i.upper}}};
    const std::string svg = io::render_svg(s, {});

    CHECK(svg.find("<polygon class=\"band\"") < svg.find("<polyline class=\"series\""));
    const auto line = points_of(svg, "<polyline class=\"series\"");
    const auto poly = points_of(svg, "<polygon class=\"band\"");
    const std::size_t n = line.size();
    REQUIRE(poly.size() == 2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& upper = poly[k];
        const auto& lower = poly[2 * n - 1 - k];
        CHECK(upper.first == line[k].first);
        CHECK(lower.first == line[k].first);
        // Screen y grows downwards.
        CHECK(upper.second <= line[k].second);
        CHECK(line[k].second <= lower.second);
    }
}

TEST_CASE("svg output is deterministic and escaped", "[io][svg]")
{
    const std::vector<io::PlotSeries> s{{"a<b", {0, 1}, {1, 2}, std::nullopt}, {"c&d", {0, 1}, {2, 1}, std::nullopt}};
    const auto first = io::render_svg(s, {"x > y", "t", "v"});
    CHECK(first == io::render_svg(s, {"x > y", "t", "v"}));
    CHECK(first.find("a&lt;b") != std::string::npos);
    CHECK(first.find("c&amp;d") != std::string::npos);
    CHECK(first.find("x &gt; y") != std::string::npos);
    CHECK(first.rfind("</svg>\n") == first.size() - 7);
}

TEST_CASE("svg input errors", "[io][svg]")
{
    CHECK_THROWS_AS(io::render_svg(std::vector<io::PlotSeries>{}, {}), io::PlotError);
    const std::vector<io::PlotSeries> empty{{"e", {}, {}, std::nullopt}};
    CHECK_THROWS_AS(io::render_svg(empty, {}), io::PlotError);
    const std::vector<io::PlotSeries> ragged{{"r", {0, 1}, {1}, std::nullopt}};
    CHECK_THROWS_AS(io::render_svg(ragged, {}), io::PlotError);
    const std::vector<io::PlotSeries> twins{{"x", {0}, {1}, std::nullopt}, {"x", {0}, {2}, std::nullopt}};
    CHECK_THROWS_AS(io::render_svg(twins, {}), io::PlotError);
}

TEST_CASE("csv formatting", "[io][csv]")
{
    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(1.0 / 3.0) == "0.333333333");
    CHECK(io::csv_field("plain") == "plain");
    CHECK(io::csv_field("a,b") == "\"a,b\"");
    CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");

    Trajectory t;
    t.times = {0, 0.5};
    t.states = {{1, 0, 0, 0, 0, 0}, {0.9, 0.1, 0, 0, 0, 0}};
    std::ostringstream os;
    io::write_trajectory_csv(os, t);
    CHECK(os.str() == "t,S,E,I,R,Ig,F\n0,1,0,0,0,0,0\n0.5,0.9,0.1,0,0,0,0\n");
}

TEST_CASE("decay csv puts metadata before the header", "[io][csv]")
{
    MeanSquareDecayReport r;
    r.times = {0, 1};
    r.estimate = {1, 0.5};
    r.margin = 0.5;
    r.verdict = Verdict::Decay;
    r.run_count = 2;
    std::ostringstream os;
    io::write_decay_csv(os, r);
    const std::string s = os.str();
    const auto header = s.find("t,ms_estimate");
    REQUIRE(header != std::string::npos);
    CHECK(s.rfind('#') < header);
    CHECK(s.find("# margin=0.5") == 0);
}

TEST_CASE("config defaults and overrides", "[io][config]")
{
    const auto empty = io::parse_config("{}");
    CHECK(empty.model == ModelParams{});
    CHECK(empty.initial == StateVector(0.995, 0, 0.005, 0, 0, 0));

    const auto cfg = io::parse_config(R"({
        "model": {"R0": 0.5, "noise": {"I": 0}, "tau": 5},
        "initial": {"spreaders": 0.01},
        "integrator": {"step_size": 0.05, "horizon": 100},
        "ensemble": {"runs": 7, "ci_method": "normal", "merge": "chunked"},
        "output": {"dir": "here", "format": "both"}
    })");
    CHECK(cfg.model.beta == Approx(0.075));
    CHECK(cfg.model.noise.i == 0.0);
    CHECK(cfg.model.noise.s == 0.01);
    CHECK(cfg.model.tau == 5.0);
    CHECK(cfg.initial.i() == 0.01);
    CHECK(cfg.integrator.step_size == 0.05);
    CHECK(cfg.ensemble.run_count == 7);
    CHECK(cfg.ensemble.ci_method == CiMethod::Normal);
    CHECK(cfg.ensemble.merge == MergeMode::Chunked);
    CHECK(cfg.output_dir == "here");
    CHECK(cfg.format == io::OutputFormat::Both);

    const auto uniform = io::parse_config(R"({"model": {"noise": 0.2}})");
    CHECK(uniform.model.noise == NoiseIntensities::uniform(0.2));
}

TEST_CASE("config errors list every violation", "[io][config]")
{
    try {
        io::parse_config(R"({
            "model": {"beta": -0.3, "gamma": "fast", "speed": 1},
            "integrator": {"step_size": 0.3, "horizon": 100},
            "ensemble": {"ci_level": 2},
            "extra": {}
        })");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string all;
        for (const auto& v : e.violations()) all += v + "\n";
        INFO(all);
        CHECK(all.find("model.beta") != std::string::npos);
        CHECK(all.find("model.gamma") != std::string::npos);
        CHECK(all.find("model.speed: unknown key") != std::string::npos);
        CHECK(all.find("integrator.") != std::string::npos);
        CHECK(all.find("ensemble.ci_level") != std::string::npos);
        CHECK(all.find("extra: unknown block") != std::string::npos);
        CHECK(e.violations().size() >= 6);
    }
    CHECK_THROWS_AS(io::parse_config("{ not json"), ConfigError);
    CHECK_THROWS_AS(io::parse_config(R"({"initial": {"state": [0.5, 0, 0, 0, 0, 0]}})"), ConfigError);
}

TEST_CASE("dumped config parses back to the same configuration", "[io][config]")
{
    const auto cfg = io::parse_config(R"({
        "model": {"beta": 0.2, "tau": 10, "noise": {"S": 0.02, "F": 0}},
        "ensemble": {"runs": 12, "seed": 99},
        "stability": {"radii": [2, 3]},
        "sweep": {"taus": [0, 10], "R0": [0.5, 2]}
    })");
    const std::string text = io::dump_config(cfg);
    const auto back = io::parse_config(text);
    CHECK(back.model == cfg.model);
    CHECK(back.initial == cfg.initial);
    CHECK(back.integrator == cfg.integrator);
    CHECK(back.stability == cfg.stability);
    CHECK(back.sweep == cfg.sweep);
    CHECK(back.ensemble.run_count == 12);
    CHECK(back.ensemble.base_seed == 99);
    CHECK(io::dump_config(back) == text);
}
