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

#include "rislab/experiment.hpp"

#include "rislab/error.hpp"
#include "rislab/geometry.hpp"
#include "rislab/monte_carlo.hpp"
#include "rislab/parallel.hpp"
#include "rislab/rate.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace rislab
{

namespace
{

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

/// Substream index for a (drop, a, b) triple, so every grid point has its own stream.
std::uint64_t point_key(std::uint64_t drop, std::uint64_t a, std::uint64_t b = 0)
{
    return mix64(mix64(mix64(drop) ^ a) ^ b);
}

struct Drop
{
    ScenarioConfig config;
    Scene scene;
};

Drop make_drop(const ScenarioConfig &base, std::size_t drop)
{
    Drop d;
    d.config = resolve_scenario(base, drop);
    d.scene = build_scene(d.config, drop);
    return d;
}

PhaseVector random_phases(std::uint64_t seed, Index n, std::uint64_t key)
{
    Rng rng = substream(seed, Stream::phases, key);
    Eigen::VectorXd theta(n);
    for (Index i = 0; i < n; ++i)
        theta(i) = uniform_real(rng, 0.0, two_pi<double>);
    return PhaseVector::continuous(theta);
}

/// DPS phases: projection of the CPS optimum, optionally refined on the grid.
PhaseVector discrete_phases(const PhaseVector &cps, int bits, const SumRateFitness &fitness, bool local_search)
{
    return local_search ? discrete_local_search(cps, bits, fitness) : project_discrete(cps, bits);
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

nlohmann::json common_metadata(const ScenarioConfig &scenario, const ExperimentSpec &spec)
{
    nlohmann::json meta;
    meta["version"] = version;
    meta["seed"] = scenario.seed;
    meta["experiment"] = to_json(spec);
    meta["scenario"] = to_json(resolve_scenario(scenario, 0));
    meta["drops"] = spec.drops;
    meta["rng"] = "mt19937_64 substreams keyed by SplitMix64(seed, stream, index)";
    return meta;
}

nlohmann::json pso_metadata(const ExperimentSpec &spec, const std::vector<int> &elements)
{
    nlohmann::json j = nlohmann::json::array();
    for (int n : elements)
    {
        const PsoParams full = PsoParams::defaults_for(n);
        const PsoParams used = experiment_pso_params(spec, n);
        j.push_back({{"N", n},
                     {"L", used.swarm_size},
                     {"T_default", full.iterations},
                     {"T_used", used.iterations},
                     {"budget_capped", used.iterations < full.iterations},
                     {"v_max", used.v_max},
                     {"omega0", used.inertia},
                     {"c1", used.c1},
                     {"c2", used.c2},
                     {"adapt_every_iteration", used.adapt_every_iteration}});
    }
    return j;
}

void append_user_columns(std::vector<std::string> &columns, const std::string &prefix, int users)
{
    for (int k = 1; k <= users; ++k)
        columns.push_back(prefix + std::to_string(k));
}

void append_rates(std::vector<double> &row, const Eigen::VectorXd &rates, int users)
{
    for (int k = 0; k < users; ++k)
        row.push_back(rates.size() > k ? rates(k) : nan);
}

/// Averages equally shaped rows component-wise; standard-error columns combine in quadrature.
std::vector<double> average_rows(const std::vector<std::vector<double>> &rows, const std::vector<bool> &is_stderr)
{
    std::vector<double> out(rows.front().size(), 0.0);
    const auto n = static_cast<double>(rows.size());
    for (std::size_t c = 0; c < out.size(); ++c)
    {
        std::vector<double> v;
        for (const auto &r : rows)
            v.push_back(is_stderr[c] ? r[c] * r[c] : r[c]);
        const double s = pairwise_sum(v);
        out[c] = is_stderr[c] ? std::sqrt(s) / n : s / n;
    }
    return out;
}

} // namespace

std::size_t SweepResult::column(const std::string &name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name)
            return i;
    throw Error(ErrorKind::domain_error, "no column named '" + name + "'");
}

PsoParams experiment_pso_params(const ExperimentSpec &spec, int elements)
{
    PsoParams p = PsoParams::defaults_for(elements);
    if (spec.pso_budget)
        p.iterations = std::min(p.iterations, *spec.pso_budget);
    if (spec.pso_swarm)
        p.swarm_size = *spec.pso_swarm;
    p.adapt_every_iteration = spec.pso_adapt_every_iteration;
    p.workers = 1;
    return p;
}

SweepResult run_validate(const ScenarioConfig &scenario, const ExperimentSpec &spec)
{
    spec.validate();
    const int K = scenario.users;
    SweepResult result;
    result.kind = spec.kind;
    result.columns = {"N", "P_dbm", "cf_sum_rate", "mc_sum_rate", "mc_stderr", "rel_error"};
    append_user_columns(result.columns, "cf_R_", K);
    append_user_columns(result.columns, "mc_R_", K);
    std::vector<bool> is_stderr(result.columns.size(), false);
    is_stderr[4] = true;

    struct Point
    {
        int n;
        std::size_t p_index;
    };
    std::vector<Point> points;
    for (int n : spec.grid_elements)
        for (std::size_t p = 0; p < spec.grid_power_dbm.size(); ++p)
            points.push_back({n, p});

    const bool parallel_grid = points.size() > 1;
    std::vector<std::vector<double>> rows(points.size());
    std::vector<double> times(points.size());
    std::vector<std::vector<std::string>> diagnostics(points.size());

    parallel_for(points.size(), spec.workers, [&](std::size_t idx) {
        const auto start = std::chrono::steady_clock::now();
        const Point pt = points[idx];
        const double p_dbm = spec.grid_power_dbm[pt.p_index];
        std::vector<std::vector<double>> per_drop;
        for (std::size_t d = 0; d < spec.drops; ++d)
        {
            ScenarioConfig base = scenario;
            base.ris_elements = pt.n;
            base.power_w = dbm_to_watts(p_dbm);
            const Drop drop = make_drop(base, d);

            PhaseVector phases;
            if (spec.fast)
                phases = random_phases(scenario.seed, pt.n, point_key(d, static_cast<std::uint64_t>(pt.n)));
            else
            {
                Rng rng = substream(scenario.seed, Stream::pso, point_key(d, static_cast<std::uint64_t>(pt.n), pt.p_index));
                phases = pso_optimize(drop.config, drop.scene.gains, experiment_pso_params(spec, pt.n), rng).phases;
            }

            const RateBreakdown cf = closed_form_rates(drop.config, drop.scene.gains, phases);
            for (const auto &msg : cf.diagnostics)
                diagnostics[idx].push_back(msg);

            std::vector<double> row{static_cast<double>(pt.n), p_dbm, cf.sum_rate};
            RateBreakdown mc;
            if (spec.mc_trials > 0)
            {
                MonteCarloOptions mo;
                mo.trials = spec.mc_trials;
                mo.seed = derive_seed(scenario.seed, Stream::channel_trials, point_key(d, static_cast<std::uint64_t>(pt.n), pt.p_index));
                mo.workers = parallel_grid ? 1 : spec.workers;
                mo.sample_quantization_noise = spec.sample_quantization_noise;
                mc = monte_carlo_rates(drop.config, drop.scene.gains, phases, mo);
                row.insert(row.end(), {mc.sum_rate, mc.sum_rate_stderr, std::abs(cf.sum_rate - mc.sum_rate) / mc.sum_rate});
            }
            else
                row.insert(row.end(), {nan, nan, nan});
            append_rates(row, cf.rate, K);
            append_rates(row, mc.rate, K);
            per_drop.push_back(std::move(row));
        }
        rows[idx] = average_rows(per_drop, is_stderr);
        if (spec.drops > 1 && spec.mc_trials > 0)
            rows[idx][5] = std::abs(rows[idx][2] - rows[idx][3]) / rows[idx][3];
        times[idx] = seconds_since(start);
    });

    result.rows = std::move(rows);
    result.wall_time_s = std::move(times);
    result.metadata = common_metadata(scenario, spec);
    result.metadata["phases"] = spec.fast ? "fixed random" : "PSO-optimized per grid point";
    result.metadata["pso"] = pso_metadata(spec, spec.grid_elements);
    result.metadata["monte_carlo"] = {{"trials", spec.mc_trials},
                                      {"quantization_noise", spec.sample_quantization_noise ? "sampled" : "conditional covariance"}};
    nlohmann::json diag = nlohmann::json::array();
    for (const auto &d : diagnostics)
        for (const auto &m : d)
            diag.push_back(m);
    result.metadata["diagnostics"] = diag;
    result.x_column = "P_dbm";
    result.group_column = "N";
    result.curve_columns = {"cf_sum_rate", "mc_sum_rate"};
    result.x_label = "P (dBm)";
    return result;
}

SweepResult run_sweep_dac_bits(const ScenarioConfig &scenario, const ExperimentSpec &spec)
{
    spec.validate();
    const int K = scenario.users;
    const int N = scenario.ris_elements;
    SweepResult result;
    result.kind = spec.kind;
    result.columns = {"b", "cps_sum_rate", "dps_sum_rate"};
    append_user_columns(result.columns, "cps_R_", K);
    append_user_columns(result.columns, "dps_R_", K);
    const std::vector<bool> is_stderr(result.columns.size(), false);

    const auto &grid = spec.grid_dac;
    std::vector<std::vector<double>> rows(grid.size());
    std::vector<double> times(grid.size());
    parallel_for(grid.size(), spec.workers, [&](std::size_t idx) {
        const auto start = std::chrono::steady_clock::now();
        std::vector<std::vector<double>> per_drop;
        for (std::size_t d = 0; d < spec.drops; ++d)
        {
            ScenarioConfig base = scenario;
            base.dac = grid[idx];
            const Drop drop = make_drop(base, d);
            // every b shares the swarm's random stream
            Rng rng = substream(scenario.seed, Stream::pso, point_key(d, static_cast<std::uint64_t>(N)));
            const PhaseOptimum cps = pso_optimize(drop.config, drop.scene.gains, experiment_pso_params(spec, N), rng);
            const SumRateFitness fitness(drop.config, drop.scene.gains);
            const RateBreakdown cps_rates = fitness.model().evaluate(cps.phases);

            std::vector<double> row{grid[idx].is_infinite() ? std::numeric_limits<double>::infinity()
                                                            : static_cast<double>(grid[idx].bits()),
                                    cps_rates.sum_rate};
            RateBreakdown dps_rates;
            if (scenario.ris_phase.is_continuous())
                row.push_back(nan);
            else
            {
                const PhaseVector dps = discrete_phases(cps.phases, scenario.ris_phase.bits(), fitness, spec.dps_local_search);
                dps_rates = fitness.model().evaluate(dps);
                row.push_back(dps_rates.sum_rate);
            }
            append_rates(row, cps_rates.rate, K);
            append_rates(row, dps_rates.rate, K);
            per_drop.push_back(std::move(row));
        }
        rows[idx] = average_rows(per_drop, is_stderr);
        times[idx] = seconds_since(start);
    });

    result.rows = std::move(rows);
    result.wall_time_s = std::move(times);
    result.metadata = common_metadata(scenario, spec);
    result.metadata["pso"] = pso_metadata(spec, {N});
    result.metadata["dps"] = {{"B", scenario.ris_phase.to_string()},
                              {"method", spec.dps_local_search ? "projection + grid local search" : "projection"}};
    result.x_column = "b";
    result.curve_columns = {"cps_sum_rate", "dps_sum_rate"};
    result.x_label = "DAC resolution b (bits)";
    return result;
}

SweepResult run_sweep_ris_bits(const ScenarioConfig &scenario, const ExperimentSpec &spec)
{
    spec.validate();
    const int K = scenario.users;
    SweepResult result;
    result.kind = spec.kind;
    result.columns = {"N", "B", "dps_sum_rate", "cps_sum_rate", "rel_gap"};
    append_user_columns(result.columns, "dps_R_", K);
    const std::vector<bool> is_stderr(result.columns.size(), false);

    const auto &elements = spec.grid_elements;
    const auto &bits = spec.grid_phase_bits;
    std::vector<std::vector<std::vector<double>>> blocks(elements.size());
    std::vector<double> times(elements.size());
    parallel_for(elements.size(), spec.workers, [&](std::size_t idx) {
        const auto start = std::chrono::steady_clock::now();
        const int N = elements[idx];
        std::vector<std::vector<std::vector<double>>> per_drop(bits.size());
        for (std::size_t d = 0; d < spec.drops; ++d)
        {
            ScenarioConfig base = scenario;
            base.ris_elements = N;
            const Drop drop = make_drop(base, d);
            Rng rng = substream(scenario.seed, Stream::pso, point_key(d, static_cast<std::uint64_t>(N)));
            const PhaseOptimum cps = pso_optimize(drop.config, drop.scene.gains, experiment_pso_params(spec, N), rng);
            const SumRateFitness fitness(drop.config, drop.scene.gains);
            const double cps_rate = fitness.model().evaluate(cps.phases).sum_rate;
            for (std::size_t b = 0; b < bits.size(); ++b)
            {
                const PhaseVector dps = discrete_phases(cps.phases, bits[b], fitness, spec.dps_local_search);
                const RateBreakdown r = fitness.model().evaluate(dps);
                std::vector<double> row{static_cast<double>(N), static_cast<double>(bits[b]), r.sum_rate, cps_rate,
                                        (cps_rate - r.sum_rate) / cps_rate};
                append_rates(row, r.rate, K);
                per_drop[b].push_back(std::move(row));
            }
        }
        for (auto &rows : per_drop)
        {
            auto avg = average_rows(rows, is_stderr);
            avg[4] = (avg[3] - avg[2]) / avg[3];
            blocks[idx].push_back(std::move(avg));
        }
        times[idx] = seconds_since(start);
    });

    for (std::size_t idx = 0; idx < blocks.size(); ++idx)
        for (auto &row : blocks[idx])
        {
            result.rows.push_back(std::move(row));
            result.wall_time_s.push_back(times[idx] / static_cast<double>(bits.size()));
        }
    result.metadata = common_metadata(scenario, spec);
    result.metadata["pso"] = pso_metadata(spec, elements);
    result.metadata["dps"] = {{"method", spec.dps_local_search ? "projection + grid local search" : "projection"}};
    result.x_column = "B";
    result.group_column = "N";
    result.curve_columns = {"dps_sum_rate", "cps_sum_rate"};
    result.x_label = "RIS phase resolution B (bits)";
    return result;
}

SweepResult run_optimize(const ScenarioConfig &scenario, const ExperimentSpec &spec)
{
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    const int N = scenario.ris_elements;
    const Drop drop = make_drop(scenario, 0);
    Rng rng = substream(scenario.seed, Stream::pso, point_key(0, static_cast<std::uint64_t>(N)));
    const PsoParams params = experiment_pso_params(spec, N);
    const PhaseOptimum cps = pso_optimize(drop.config, drop.scene.gains, params, rng);
    const SumRateFitness fitness(drop.config, drop.scene.gains);
    const RateBreakdown cps_rates = fitness.model().evaluate(cps.phases);

    SweepResult result;
    result.kind = spec.kind;
    result.columns = {"iteration", "best_sum_rate"};
    for (std::size_t t = 0; t < cps.trace.size(); ++t)
        result.rows.push_back({static_cast<double>(t), -cps.trace[t]});
    result.metadata = common_metadata(scenario, spec);
    result.metadata["pso"] = pso_metadata(spec, {N});
    result.metadata["cps"] = {{"sum_rate", cps_rates.sum_rate},
                              {"user_rates", std::vector<double>(cps_rates.rate.begin(), cps_rates.rate.end())},
                              {"theta", std::vector<double>(cps.phases.theta.begin(), cps.phases.theta.end())}};
    if (!scenario.ris_phase.is_continuous())
    {
        const PhaseVector dps = discrete_phases(cps.phases, scenario.ris_phase.bits(), fitness, spec.dps_local_search);
        const RateBreakdown r = fitness.model().evaluate(dps);
        result.metadata["dps"] = {{"B", scenario.ris_phase.bits()},
                                  {"sum_rate", r.sum_rate},
                                  {"user_rates", std::vector<double>(r.rate.begin(), r.rate.end())},
                                  {"theta", std::vector<double>(dps.theta.begin(), dps.theta.end())}};
    }
    const double elapsed = seconds_since(start);
    result.wall_time_s.assign(result.rows.size(), elapsed / static_cast<double>(std::max<std::size_t>(1, result.rows.size())));
    result.metadata["total_wall_time_s"] = elapsed;
    result.x_column = "iteration";
    result.curve_columns = {"best_sum_rate"};
    result.x_label = "Iteration";
    return result;
}

SweepResult run_experiment(const ScenarioConfig &scenario, const ExperimentSpec &spec)
{
    switch (spec.kind)
    {
    case ExperimentKind::validate:
    case ExperimentKind::sweep_power:
        return run_validate(scenario, spec);
    case ExperimentKind::sweep_dac_bits:
        return run_sweep_dac_bits(scenario, spec);
    case ExperimentKind::sweep_ris_bits:
        return run_sweep_ris_bits(scenario, spec);
    case ExperimentKind::optimize:
        return run_optimize(scenario, spec);
    }
    throw Error(ErrorKind::config_error, "unknown experiment kind");
}

} // namespace rislab
