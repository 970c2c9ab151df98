// rislab: rate analysis and phase optimization for RIS-aided massive MIMO
// Copyright (C) 2026 The rislab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rislab/error.hpp"
#include "rislab/experiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

using namespace rislab;
using doctest::Approx;

namespace
{

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string &name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("rislab_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

ExperimentSpec small_spec(ExperimentKind kind)
{
    ExperimentSpec s;
    s.kind = kind;
    s.grid_elements = {8};
    s.grid_power_dbm = {0.0, 20.0};
    s.grid_dac = {DacResolution::bits(1), DacResolution::bits(3), DacResolution::infinite()};
    s.grid_phase_bits = {1, 2, 6};
    s.mc_trials = 500;
    s.pso_budget = 30;
    s.pso_swarm = 10;
    s.workers = 2;
    return s;
}

ScenarioConfig small_scenario()
{
    ScenarioConfig c = ScenarioConfig::defaults();
    c.bs_antennas = 16;
    c.ris_elements = 8;
    c.users = 3;
    c.rician_users.assign(3, 10.0);
    return c;
}

} // namespace

TEST_CASE("format_number")
{
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(-2.5) == "-2.5");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
    CHECK(format_number(1e-20) == "1e-20");
    CHECK(format_number(std::nan("")).empty());
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("validate: paired closed-form and Monte Carlo rows")
{
    ExperimentSpec s = small_spec(ExperimentKind::validate);
    s.fast = true;
    const SweepResult r = run_validate(small_scenario(), s);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.columns.size() == 6 + 2 * 3);
    CHECK(r.wall_time_s.size() == 2);
    const auto cf = r.column("cf_sum_rate"), mc = r.column("mc_sum_rate"), err = r.column("rel_error");
    for (const auto &row : r.rows)
    {
        CHECK(std::isfinite(row[cf]));
        CHECK(std::isfinite(row[mc]));
        CHECK(row[err] == Approx(std::abs(row[cf] - row[mc]) / row[mc]));
    }
    CHECK(r.rows[1][cf] > r.rows[0][cf]);
    CHECK(r.metadata["scenario"]["M"] == 16);
    CHECK(r.metadata["seed"] == 1);
    CHECK(r.metadata["version"] == version);

    SUBCASE("mc_trials = 0 leaves the Monte Carlo columns empty")
    {
        s.mc_trials = 0;
        const SweepResult q = run_validate(small_scenario(), s);
        CHECK(std::isnan(q.rows[0][q.column("mc_sum_rate")]));
        CHECK(std::isnan(q.rows[0][q.column("mc_R_1")]));
        const std::string csv = render_csv(q);
        CHECK(csv.find(",,,") != std::string::npos);
    }
    SUBCASE("worker count does not change the table")
    {
        ExperimentSpec one = s;
        one.workers = 1;
        CHECK(render_csv(run_validate(small_scenario(), one)) == render_csv(r));
    }
    SUBCASE("drops are averaged")
    {
        ExperimentSpec d = s;
        d.drops = 2;
        const SweepResult q = run_validate(small_scenario(), d);
        CHECK(q.rows[0][cf] != r.rows[0][cf]);
        CHECK(q.metadata["drops"] == 2);
    }
}

TEST_CASE("validate with a perfect DAC on one grid point")
{
    ExperimentSpec s = small_spec(ExperimentKind::validate);
    s.fast = true;
    s.grid_power_dbm = {30.0};
    s.mc_trials = 10000;
    ScenarioConfig c = ScenarioConfig::defaults();
    c.dac = DacResolution::infinite();
    s.grid_elements = {16};
    const SweepResult r = run_validate(c, s);
    CHECK(r.rows[0][r.column("rel_error")] <= 0.05);
}

TEST_CASE("sweep-dac-bits")
{
    const SweepResult r = run_sweep_dac_bits(small_scenario(), small_spec(ExperimentKind::sweep_dac_bits));
    REQUIRE(r.rows.size() == 3);
    const auto b = r.column("b"), cps = r.column("cps_sum_rate"), dps = r.column("dps_sum_rate");
    CHECK(r.rows[0][b] == 1.0);
    CHECK(std::isinf(r.rows[2][b]));
    for (const auto &row : r.rows)
        CHECK(std::isfinite(row[dps]));
    CHECK(render_csv(r).find("\ninf,") != std::string::npos);

    ScenarioConfig continuous = small_scenario();
    continuous.ris_phase = PhaseResolution::continuous();
    const SweepResult q = run_sweep_dac_bits(continuous, small_spec(ExperimentKind::sweep_dac_bits));
    CHECK(std::isnan(q.rows[0][dps]));
    CHECK(q.rows[0][cps] == r.rows[0][cps]);
}

TEST_CASE("sweep-ris-bits")
{
    const SweepResult r = run_sweep_ris_bits(small_scenario(), small_spec(ExperimentKind::sweep_ris_bits));
    REQUIRE(r.rows.size() == 3);
    const auto cps = r.column("cps_sum_rate"), dps = r.column("dps_sum_rate"), gap = r.column("rel_gap");
    for (const auto &row : r.rows)
    {
        CHECK(row[cps] == r.rows[0][cps]);
        CHECK(row[gap] == Approx((row[cps] - row[dps]) / row[cps]));
    }
    CHECK(std::abs(r.rows[2][gap]) < 0.05);
}

TEST_CASE("optimize")
{
    ScenarioConfig c = small_scenario();
    const SweepResult r = run_optimize(c, small_spec(ExperimentKind::optimize));
    CHECK(r.rows.size() == 31);
    for (std::size_t t = 1; t < r.rows.size(); ++t)
        CHECK(r.rows[t][1] >= r.rows[t - 1][1]);
    CHECK(r.metadata["cps"]["theta"].size() == 8);
    CHECK(r.metadata["cps"]["sum_rate"].get<double>() == Approx(r.rows.back()[1]));
    CHECK(r.metadata["dps"]["B"] == 2);
    CHECK(r.metadata["pso"][0]["T_used"] == 30);
    CHECK(r.metadata["pso"][0]["budget_capped"] == true);
}

TEST_CASE("emit_outputs")
{
    ExperimentSpec s = small_spec(ExperimentKind::validate);
    s.fast = true;
    const SweepResult r = run_validate(small_scenario(), s);
    const auto dir = scratch("emit");
    const OutputFiles files = emit_outputs(r, dir / "nested");
    const std::string csv = slurp(files.csv);
    CHECK(csv.rfind("N,P_dbm,cf_sum_rate,mc_sum_rate,mc_stderr,rel_error,cf_R_1", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    const auto meta = nlohmann::json::parse(slurp(files.metadata));
    CHECK(meta["scenario"]["K"] == 3);
    CHECK(meta["wall_time_s"].size() == 2);
    CHECK(meta["warnings"].empty());
    const std::string script = slurp(files.plot_script);
    CHECK(script.find("validate.csv") != std::string::npos);
    CHECK(script.find("P (dBm)") != std::string::npos);

    SUBCASE("rerun with the same seed is byte-identical")
    {
        const OutputFiles again = emit_outputs(run_validate(small_scenario(), s), dir / "again");
        CHECK(slurp(again.csv) == csv);
    }
    SUBCASE("empty result writes a header and a warning")
    {
        SweepResult empty;
        empty.kind = ExperimentKind::sweep_ris_bits;
        empty.columns = {"N", "B", "dps_sum_rate"};
        const OutputFiles e = emit_outputs(empty, dir / "empty");
        CHECK(slurp(e.csv) == "N,B,dps_sum_rate\n");
        CHECK(nlohmann::json::parse(slurp(e.metadata))["warnings"].size() == 1);
    }
    SUBCASE("unwritable path")
    {
        std::ofstream(dir / "blocker") << "x";
        try
        {
            emit_outputs(r, dir / "blocker" / "sub");
            FAIL("expected an error");
        }
        catch (const Error &e)
        {
            CHECK(e.kind() == ErrorKind::io_error);
        }
    }
    std::filesystem::remove_all(dir);
}
