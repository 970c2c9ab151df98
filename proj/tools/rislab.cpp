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

#include "rislab/config.hpp"
#include "rislab/error.hpp"
#include "rislab/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace
{

struct Overrides
{
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> pso_budget;
    std::optional<std::size_t> drops;
    std::optional<unsigned> workers;
    bool fast = false;
};

void add_common(CLI::App *cmd, Overrides &o)
{
    cmd->add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output directory (default: config 'output' or ./results)");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per grid point (0 disables MC)");
    cmd->add_option("--pso-budget", o.pso_budget, "cap on PSO iterations T");
    cmd->add_option("--drops", o.drops, "user drops averaged per grid point")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", o.workers, "worker threads (0 = hardware concurrency)");
    cmd->add_flag("--fast", o.fast, "fixed random phases instead of PSO");
}

int run(rislab::ExperimentKind kind, const Overrides &o)
{
    rislab::ParsedConfig parsed;
    if (!o.config.empty())
        parsed = rislab::parse_config_file(o.config);
    auto &scenario = parsed.scenario;
    auto &spec = parsed.experiment;
    spec.kind = kind;
    if (o.seed)
        scenario.seed = *o.seed;
    if (o.trials)
        spec.mc_trials = *o.trials;
    if (o.pso_budget)
        spec.pso_budget = *o.pso_budget;
    if (o.drops)
        spec.drops = *o.drops;
    if (o.workers)
        spec.workers = *o.workers;
    if (o.fast)
        spec.fast = true;
    if (!o.out.empty())
        spec.output_dir = o.out;
    scenario.validate();
    spec.validate();

    const rislab::SweepResult result = rislab::run_experiment(scenario, spec);
    const rislab::OutputFiles files = rislab::emit_outputs(result, spec.output_dir);
    std::cout << files.csv.string() << '\n' << files.metadata.string() << '\n' << files.plot_script.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Rate analysis and phase optimization for RIS-aided massive MIMO with low-resolution DACs"};
    app.set_version_flag("--version", rislab::version);
    app.require_subcommand(1);

    Overrides o;
    std::optional<rislab::ExperimentKind> kind;
    const std::pair<const char *, const char *> commands[] = {
        {"validate", "closed-form vs Monte Carlo sum rate over the N x P grid"},
        {"sweep-power", "same as validate, labelled as a power sweep"},
        {"sweep-dac-bits", "optimized CPS/DPS sum rate versus DAC resolution"},
        {"sweep-ris-bits", "optimized DPS sum rate versus RIS phase resolution"},
        {"optimize", "single PSO run; writes the convergence trace"},
    };
    for (const auto &[name, help] : commands)
    {
        CLI::App *cmd = app.add_subcommand(name, help);
        add_common(cmd, o);
        cmd->callback([&kind, name = std::string(name)] { kind = rislab::parse_experiment_kind(name); });
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        std::cerr << "error: usage: " << e.what() << '\n';
        return 64;
    }

    try
    {
        return run(*kind, o);
    }
    catch (const rislab::Error &e)
    {
        std::cerr << "error: " << rislab::to_string(e.kind()) << ": " << e.what() << '\n';
        switch (e.kind())
        {
        case rislab::ErrorKind::config_error:
            return 2;
        case rislab::ErrorKind::io_error:
            return 3;
        default:
            return 4;
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 1;
    }
}
