#include "rumor/ablation.hpp"
#include "rumor/error.hpp"
#include "rumor/io/csv.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace rumor;
using Catch::Approx;

namespace {

SweepResult result_from(const ReferenceTable& table, std::size_t runs)
{
    SweepResult r;
    r.run_count = runs;
    for (const auto& row : table) {
        r.records.push_back({row.tau, row.r0, row.beta, row.peak_mean, row.peak_std, row.final_mean, row.final_std, {}});
    }
    return r;
}

}  // namespace

TEST_CASE("published table has the full grid", "[ablation]")
{
    const auto& t = published_ablation_table();
    REQUIRE(t.size() == 18);
    CHECK(t.front().tau == 0.0);
    CHECK(t.front().r0 == 0.5);
    CHECK(t[5].peak_mean == 0.09704);
    CHECK(t[5].final_mean == 0.8105);
    CHECK(t.back().tau == 10.0);
    CHECK(t.back().peak_mean == 0.05448);
    for (const auto& row : t) CHECK(row.beta == Approx(row.r0 * 0.15));
}

TEST_CASE("shipped reference CSV equals the built-in table", "[ablation]")
{
    const auto table = read_reference_csv(std::string(RUMOR_SOURCE_DIR) + "/data/table1_reference.csv");
    CHECK(table == published_ablation_table());
}

TEST_CASE("reference CSV round trip and parse errors", "[ablation]")
{
    std::stringstream ss;
    io::write_reference_csv(ss, published_ablation_table());
    CHECK(read_reference_csv(ss) == published_ablation_table());

    std::istringstream bad("tau,R0,beta,peak_mean,peak_std,final_mean,final_std\n0,0.5,x,1,1,1,1\n");
    CHECK_THROWS_AS(read_reference_csv(bad), ConfigError);
    std::istringstream headerless("0,0.5,0.075,1,1,1,1\n");
    CHECK_THROWS_AS(read_reference_csv(headerless), ConfigError);
}

TEST_CASE("reference compared with itself is unflagged", "[ablation]")
{
    const auto report = compare_to_reference(result_from(published_ablation_table(), 100), published_ablation_table());
    CHECK(report.rows.size() == 18);
    CHECK(report.flagged_count() == 0);
    for (const auto& row : report.rows) CHECK(row.explanation.empty());
}

TEST_CASE("a perturbed cell is flagged with an explanation", "[ablation]")
{
    auto result = result_from(published_ablation_table(), 100);
    result.records[5].peak_mean += 10 * result.records[5].peak_std;
    const auto report = compare_to_reference(result, published_ablation_table());
    CHECK(report.flagged_count() == 1);
    CHECK(report.rows[5].peak_flag);
    CHECK_FALSE(report.rows[5].final_flag);
    CHECK(report.rows[5].explanation.find("peak_mean") != std::string::npos);
    CHECK(report.rows[5].peak_dev_rel > 0.0);
}

TEST_CASE("compatibility half-width", "[ablation]")
{
    CHECK(compatibility_half_width(0.01, 100) == Approx(0.013));
    CHECK(compatibility_half_width(0.0, 100) == 0.0);
}

TEST_CASE("grid mismatch is an error", "[ablation]")
{
    auto result = result_from(published_ablation_table(), 100);
    result.records.pop_back();
    CHECK_THROWS_AS(compare_to_reference(result, published_ablation_table()), GridMismatchError);
    result = result_from(published_ablation_table(), 100);
    result.records[3].r0 = 1.3;
    CHECK_THROWS_AS(compare_to_reference(result, published_ablation_table()), GridMismatchError);
}

TEST_CASE("cells get distinct seeds and their own beta", "[ablation]")
{
    CHECK(cell_seed(1, 0, 1) != cell_seed(1, 1, 0));
    CHECK(cell_seed(1, 0, 0) != cell_seed(2, 0, 0));
    SweepSpec spec;
    const auto p = spec.cell_params(5.0, 1.2);
    CHECK(p.tau == 5.0);
    CHECK(p.beta == Approx(0.18));
    CHECK(p.sigma_act == spec.base.sigma_act);
}

TEST_CASE("a small sweep fills the grid in tau-major order", "[ablation]")
{
    SweepSpec spec;
    spec.taus = {0.0, 2.0};
    spec.r0s = {0.5, 2.0};
    spec.integrator.horizon = 50.0;
    spec.ensemble.run_count = 4;
    const auto r = run_sweep(spec);
    REQUIRE(r.records.size() == 4);
    CHECK(r.records[1].tau == 0.0);
    CHECK(r.records[1].r0 == 2.0);
    CHECK(r.records[2].tau == 2.0);
    CHECK(r.records[3].peak_mean > r.records[2].peak_mean);
    CHECK(r.run_count == 4);

    const auto again = run_sweep(spec);
    CHECK(again.records[3].peak_mean == r.records[3].peak_mean);
}

TEST_CASE("sweep spec validation", "[ablation]")
{
    SweepSpec spec;
    spec.taus = {-1.0};
    spec.r0s = {0.0};
    CHECK(spec.violations().size() >= 2);
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
}
