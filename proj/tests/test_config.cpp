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

#include "rislab/config.hpp"
#include "rislab/error.hpp"

#include <sstream>

using namespace rislab;
using doctest::Approx;

namespace
{

ParsedConfig parse(const std::string &text)
{
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

std::string error_of(const std::string &text)
{
    try
    {
        parse(text);
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::config_error);
        return e.what();
    }
    FAIL("expected a config error for: " << text);
    return {};
}

} // namespace

TEST_CASE("empty file gives the defaults")
{
    const ParsedConfig c = parse("");
    const ScenarioConfig &s = c.scenario;
    CHECK(s.bs_antennas == 64);
    CHECK(s.users == 6);
    CHECK(s.ris_elements == 16);
    CHECK(watts_to_dbm(s.power_w) == Approx(30.0));
    CHECK(watts_to_dbm(s.noise_w) == Approx(-104.0));
    CHECK(s.rician_bs_ris == 1.0);
    CHECK(s.rician_users == std::vector<double>(6, 10.0));
    CHECK(s.ris_phase.bits() == 2);
    CHECK(s.dac.bits() == 1);
    CHECK(s.user_radius == 4.0);
    CHECK(s.ris_position.x == 5.0);
    CHECK(c.experiment.mc_trials == 10000);
    CHECK(c.experiment.drops == 1);
    CHECK(c.entries.empty());
    CHECK(parse("# only a comment\n\n   \n").scenario.bs_antennas == 64);
}

TEST_CASE("single override")
{
    const ParsedConfig c = parse("P_dbm = 10\n");
    CHECK(watts_to_dbm(c.scenario.power_w) == Approx(10.0));
    CHECK(c.scenario.bs_antennas == 64);
    REQUIRE(c.entries.size() == 1);
    CHECK(c.entries[0].first == "P_dbm");
}

TEST_CASE("full file")
{
    const ParsedConfig c = parse(R"(# figure 3 style
experiment = sweep-dac-bits
M = 32
K = 3        # three users
K_k = 5, 6, 7
phi_kt = 0.1, 0.2, 0.3
b = inf
B = continuous
grid_b = 1, 3, inf
grid_N = 16, 64
grid_P_dbm = -10, 0.5
grid_B = 1, 6
seed = 18446744073709551615
mc_trials = 0
pso_budget = 50
fast = yes
drops = 3
workers = 2
output = out/dir
pso_adapt_every_iteration = true
)");
    CHECK(c.experiment.kind == ExperimentKind::sweep_dac_bits);
    CHECK(c.scenario.bs_antennas == 32);
    CHECK(c.scenario.rician_users == std::vector<double>{5, 6, 7});
    CHECK(c.scenario.user_aods == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(c.scenario.dac.is_infinite());
    CHECK(c.scenario.ris_phase.is_continuous());
    REQUIRE(c.experiment.grid_dac.size() == 3);
    CHECK(c.experiment.grid_dac[1].bits() == 3);
    CHECK(c.experiment.grid_dac[2].is_infinite());
    CHECK(c.experiment.grid_elements == std::vector<int>{16, 64});
    CHECK(c.experiment.grid_power_dbm == std::vector<double>{-10, 0.5});
    CHECK(c.experiment.grid_phase_bits == std::vector<int>{1, 6});
    CHECK(c.scenario.seed == 18446744073709551615ULL);
    CHECK(c.experiment.mc_trials == 0);
    CHECK(c.experiment.pso_budget == 50u);
    CHECK(c.experiment.fast);
    CHECK(c.experiment.drops == 3);
    CHECK(c.experiment.workers == 2);
    CHECK(c.experiment.output_dir == "out/dir");
    CHECK(c.experiment.pso_adapt_every_iteration);

    // a single K_k fans out, whatever the order of K and K_k
    CHECK(parse("K_k = 2\nK = 4\n").scenario.rician_users == std::vector<double>(4, 2.0));
}

TEST_CASE("errors carry the line number")
{
    CHECK(error_of("M = -1\n").find("test.cfg:1: M must be >= 1") != std::string::npos);
    CHECK(error_of("\n\nfoo = 3\n").find("test.cfg:3: unknown key 'foo'") != std::string::npos);
    CHECK(error_of("P_dbm = ten\n").find("test.cfg:1: malformed number") != std::string::npos);
    CHECK(error_of("N =\n").find("test.cfg:1: missing value") != std::string::npos);
    CHECK(error_of("just words\n").find("test.cfg:1:") != std::string::npos);
    CHECK(error_of("M = 4\nM = 5\n").find("test.cfg:2: duplicate key") != std::string::npos);
    CHECK(error_of("K = 2\nK_k = 1, 2, 3\n").find("test.cfg:2: K_k has 3 entries") != std::string::npos);
    CHECK(error_of("b = 0\n").find("test.cfg:1:") != std::string::npos);
    CHECK(error_of("B = 2.5\n").find("test.cfg:1:") != std::string::npos);
    CHECK(error_of("experiment = nonsense\n").find("test.cfg:1:") != std::string::npos);
    CHECK(error_of("grid_N = 16,,32\n").find("test.cfg:1:") != std::string::npos);
    CHECK(error_of("fast = maybe\n").find("test.cfg:1: malformed boolean") != std::string::npos);
    CHECK(error_of("d_over_lambda = 0\n").find("d_over_lambda must be > 0") != std::string::npos);
    CHECK(!error_of("grid_N =  \n").empty());
}

TEST_CASE("empty grids are rejected")
{
    ExperimentSpec s;
    s.grid_elements.clear();
    CHECK_THROWS_AS(s.validate(), Error);
    s.kind = ExperimentKind::sweep_dac_bits;
    CHECK_NOTHROW(s.validate());
    s.grid_dac.clear();
    CHECK_THROWS_AS(s.validate(), Error);
    s = ExperimentSpec{};
    s.drops = 0;
    CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("file access")
{
    try
    {
        parse_config_file("/nonexistent/rislab.cfg");
        FAIL("expected an error");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::io_error);
    }
}

TEST_CASE("every key round-trips through the key list")
{
    const auto &keys = config_keys();
    CHECK(keys.size() >= 35);
    for (const char *k : {"M", "N", "K", "P_dbm", "sigma2_dbm", "K_G", "K_k", "b", "B", "seed", "grid_N", "mc_trials"})
        CHECK(std::find(keys.begin(), keys.end(), k) != keys.end());
}

TEST_CASE("JSON echo")
{
    const ParsedConfig c = parse("b = inf\nB = 3\n");
    const auto j = to_json(c.scenario);
    CHECK(j["M"] == 64);
    CHECK(j["b"] == "inf");
    CHECK(j["B"] == "3");
    const auto e = to_json(c.experiment);
    CHECK(e["experiment"] == "validate");
    CHECK(e["grid_b"].size() == 6);
}
