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

#ifndef RISLAB_CONFIG_HPP
#define RISLAB_CONFIG_HPP

#include "rislab/scenario.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rislab
{

enum class ExperimentKind
{
    validate,
    sweep_power,
    sweep_dac_bits,
    sweep_ris_bits,
    optimize,
};

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(const std::string &name);

struct ExperimentSpec
{
    ExperimentKind kind = ExperimentKind::validate;
    std::vector<int> grid_elements{16, 36, 64};
    std::vector<double> grid_power_dbm{-10, -5, 0, 5, 10, 15, 20, 25, 30};
    std::vector<DacResolution> grid_dac{DacResolution::bits(1), DacResolution::bits(2), DacResolution::bits(3),
                                        DacResolution::bits(4), DacResolution::bits(5), DacResolution::infinite()};
    std::vector<int> grid_phase_bits{1, 2, 3, 4, 5, 6};
    std::size_t mc_trials = 10000;
    std::filesystem::path output_dir = "results";
    std::optional<std::size_t> pso_budget;   // cap on the iteration count T
    std::optional<std::size_t> pso_swarm;    // override of L
    bool fast = false;                       // fixed random phases instead of PSO
    std::size_t drops = 1;                   // user drops averaged per grid point
    bool dps_local_search = false;
    bool pso_adapt_every_iteration = false; // omega rule after every iteration, not only improvements
    bool sample_quantization_noise = false;
    unsigned workers = 0;

    /// Throws Error(config_error) when the grid this kind sweeps is empty.
    void validate() const;
};

struct ParsedConfig
{
    ScenarioConfig scenario = ScenarioConfig::defaults();
    ExperimentSpec experiment;
    /// Keys that appeared in the file, in order, with their raw values.
    std::vector<std::pair<std::string, std::string>> entries;
};

/// Flat `key = value` text, one pair per line, `#` starts a comment. Unknown keys, malformed
/// values and violated invariants are reported as Error(config_error) with the line number.
ParsedConfig parse_config(std::istream &in, const std::string &source = "config");
ParsedConfig parse_config_file(const std::filesystem::path &path);

/// Names of every accepted key, in documentation order.
const std::vector<std::string> &config_keys();

nlohmann::json to_json(const ScenarioConfig &config);
nlohmann::json to_json(const ExperimentSpec &spec);

} // namespace rislab

#endif // RISLAB_CONFIG_HPP
