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

#ifndef RISLAB_EXPERIMENT_HPP
#define RISLAB_EXPERIMENT_HPP

#include "rislab/config.hpp"
#include "rislab/pso.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace rislab
{

/// Tabular result of one experiment. Cells are doubles; NaN is written as an empty cell.
struct SweepResult
{
    ExperimentKind kind = ExperimentKind::validate;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<double> wall_time_s; // per row, kept out of the CSV so reruns are byte-identical
    nlohmann::json metadata;
    std::vector<std::string> warnings;

    // plotting hints
    std::string x_column;
    std::string group_column;              // one curve per distinct value; may be empty
    std::vector<std::string> curve_columns;
    std::string x_label;
    std::string y_label = "Sum rate (bit/s/Hz)";

    std::size_t column(const std::string &name) const;
};

/// PSO settings an experiment actually uses for a given N (defaults, then overrides).
PsoParams experiment_pso_params(const ExperimentSpec &spec, int elements);

/// Closed-form and Monte Carlo sum rates over the N x P grid (Fig. 2 style). Phases are
/// PSO-optimized per grid point, or fixed random phases in fast mode.
SweepResult run_validate(const ScenarioConfig &scenario, const ExperimentSpec &spec);

/// CPS and DPS optimized sum rates for every DAC resolution in the grid (Fig. 3 style).
SweepResult run_sweep_dac_bits(const ScenarioConfig &scenario, const ExperimentSpec &spec);

/// DPS sum rate for every (N, B) pair, with the CPS reference of the same N (Fig. 4 style).
SweepResult run_sweep_ris_bits(const ScenarioConfig &scenario, const ExperimentSpec &spec);

/// Single CPS optimization; rows are the convergence trace.
SweepResult run_optimize(const ScenarioConfig &scenario, const ExperimentSpec &spec);

SweepResult run_experiment(const ScenarioConfig &scenario, const ExperimentSpec &spec);

struct OutputFiles
{
    std::filesystem::path csv;
    std::filesystem::path metadata;
    std::filesystem::path plot_script;
};

/// Writes <kind>.csv, <kind>.meta.json and plot_<kind>.py into `dir`.
OutputFiles emit_outputs(const SweepResult &result, const std::filesystem::path &dir);

/// Locale-independent shortest-of-12-significant-digits rendering; NaN renders empty.
std::string format_number(double value);

std::string render_csv(const SweepResult &result);

inline constexpr const char *version = "1.0.0";

} // namespace rislab

#endif // RISLAB_EXPERIMENT_HPP
