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

// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include "oracles.hpp"

#include "rislab/experiment.hpp"
#include "rislab/monte_carlo.hpp"
#include "rislab/precoding.hpp"
#include "rislab/pso.hpp"
#include "rislab/rate.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

using namespace rislab;

namespace
{

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

PhaseVector random_phases(std::uint64_t seed, Index n, std::uint64_t index)
{
    Rng rng = substream(seed, Stream::phases, index);
    Eigen::VectorXd t(n);
    for (Index i = 0; i < n; ++i)
        t(i) = uniform_real(rng, 0.0, two_pi<double>);
    return PhaseVector::continuous(t);
}

Outcome criterion_1()
{
    const double table[] = {0.3646, 0.1175, 0.03454, 0.009497, 0.002499};
    bool ok = true;
    for (int b = 1; b <= 5; ++b)
        ok = ok && rho_of_bits(b) == table[b - 1];
    double worst = 0;
    for (int b = 6; b <= 16; ++b)
    {
        const double ref = std::sqrt(3.0) * std::numbers::pi / 2.0 * std::pow(2.0, -2.0 * b);
        worst = std::max(worst, std::abs(rho_of_bits(b) - ref) / ref);
    }
    ok = ok && worst <= 1e-12;
    return {ok, fmt("table exact=%s, formula max rel err %.2e (b=6..16)", ok ? "yes" : "no", worst)};
}

Outcome criterion_2()
{
    double worst = 0, worst_exact = 0;
    std::string where;
    for (int N : {16, 36})
        for (double P : {0.0, 15.0, 30.0})
        {
            ScenarioConfig c = ScenarioConfig::defaults();
            c.ris_elements = N;
            c.power_w = dbm_to_watts(P);
            c = resolve_scenario(c, 0);
            const Scene scene = build_scene(c, 0);
            const PhaseVector phases = random_phases(c.seed, N, static_cast<std::uint64_t>(N));
            MonteCarloOptions mo;
            mo.trials = 10000;
            mo.seed = c.seed;
            const double mc = monte_carlo_rates(c, scene.gains, phases, mo).sum_rate;
            const double cf = closed_form_rates(c, scene.gains, phases).sum_rate;
            ClosedFormOptions exact;
            exact.signal_form = MomentForm::exact;
            const double cfx = closed_form_rates(c, scene.gains, phases, exact).sum_rate;
            const double err = std::abs(cf - mc) / mc;
            if (err > worst)
            {
                worst = err;
                where = fmt("N=%d P=%gdBm cf=%.5f mc=%.5f", N, P, cf, mc);
            }
            worst_exact = std::max(worst_exact, std::abs(cfx - mc) / mc);
        }
    return {worst <= 0.05, fmt("max rel err %.4f at %s (tol 0.05); exact-moment signal term: max %.4f", worst,
                               where.c_str(), worst_exact)};
}

Outcome criterion_3()
{
    ScenarioConfig c = ScenarioConfig::defaults();
    c.bs_antennas = 8;
    c.ris_elements = 8;
    c.users = 2;
    c.rician_users = {10.0};
    c.user_aods.clear();
    c = resolve_scenario(c, 0);
    const Scene scene = build_scene(c, 0);
    const PhaseVector phases = random_phases(c.seed, 8, 8);
    MonteCarloOptions mo;
    mo.trials = 100000;
    mo.seed = c.seed;
    const auto rows = moment_oracles(c, scene.gains, phases, mo);
    std::map<std::string, double> worst;
    for (const auto &r : rows)
        worst[r.name] = std::max(worst[r.name], r.relative_error());
    bool ok = true;
    std::string detail;
    for (const auto &[name, err] : worst)
    {
        ok = ok && err <= 0.02;
        detail += fmt("%s%s %.4f", detail.empty() ? "" : "; ", name.c_str(), err);
    }
    return {ok, detail + " (tol 0.02)"};
}

Outcome criterion_4()
{
    Rng rng(20260101);
    double worst = 0;
    for (int t = 0; t < 100; ++t)
    {
        const double Kg = uniform_real(rng, 0.0, 20.0);
        const double Kk = uniform_real(rng, 0.0, 20.0);
        const double N = std::floor(uniform_real(rng, 1.0, 257.0));
        const double tail22 = N / 2.0 * (3.0 * (Kg + Kk) + 4.0);
        const double tail17 = 2.0 * N * (0.75 * (Kg + Kk) + 1.0);
        worst = std::max(worst, std::abs(tail22 - tail17) / std::abs(tail17));
    }
    return {worst <= 1e-12, fmt("100 random (K_G, K_k, N), max rel diff %.2e", worst)};
}

ExperimentSpec sweep_spec(ExperimentKind kind, bool every)
{
    ExperimentSpec s;
    s.kind = kind;
    s.mc_trials = 0;
    s.pso_adapt_every_iteration = every;
    return s;
}

Outcome criterion_5(bool every)
{
    ScenarioConfig c = ScenarioConfig::defaults();
    c.ris_elements = 16;
    const SweepResult r = run_sweep_dac_bits(c, sweep_spec(ExperimentKind::sweep_dac_bits, every));
    const std::size_t cps = r.column("cps_sum_rate");
    const std::size_t dps = r.column("dps_sum_rate");
    bool monotone = true;
    std::string rates;
    for (std::size_t i = 0; i < r.rows.size(); ++i)
    {
        if (i > 0)
            monotone = monotone && r.rows[i][cps] >= r.rows[i - 1][cps] && r.rows[i][dps] >= r.rows[i - 1][dps];
        rates += fmt("%s%.4f", i ? "," : "", r.rows[i][cps]);
    }
    const double ratio = r.rows[2][cps] / r.rows.back()[cps];
    return {monotone && ratio >= 0.9,
            fmt("CPS R_sum over b=1..5,inf: %s; nondecreasing(CPS,DPS)=%s; R(3)/R(inf)=%.4f (>=0.9)", rates.c_str(),
                monotone ? "yes" : "no", ratio)};
}

Outcome criterion_6(bool every)
{
    ScenarioConfig c = ScenarioConfig::defaults();
    c.dac = DacResolution::bits(1);
    ExperimentSpec s = sweep_spec(ExperimentKind::sweep_ris_bits, every);
    s.grid_elements = {16, 64};
    s.grid_phase_bits = {1, 2, 3, 4, 6};
    const SweepResult r = run_sweep_ris_bits(c, s);
    const std::size_t dps = r.column("dps_sum_rate"), cps = r.column("cps_sum_rate");
    bool ok = true;
    std::string detail;
    for (std::size_t g = 0; g < 2; ++g)
    {
        const auto *row = &r.rows[g * 5];
        bool monotone = true;
        for (int i = 1; i < 5; ++i)
            monotone = monotone && row[i][dps] >= row[i - 1][dps];
        const double gap = (row[4][cps] - row[4][dps]) / row[4][cps];
        const double gain12 = row[1][dps] - row[0][dps];
        const double gain46 = row[4][dps] - row[3][dps];
        const bool pass = monotone && gap <= 0.01 && gain12 > gain46;
        ok = ok && pass;
        detail += fmt("%sN=%d: nondecreasing=%s gap(B=6)=%.4f gain(1->2)=%.4f gain(4->6)=%.4f", g ? "; " : "",
                      static_cast<int>(row[0][0]), monotone ? "yes" : "no", gap, gain12, gain46);
    }
    return {ok, detail};
}

Outcome criterion_7(bool every)
{
    // K = 1: alignment optimum |psi_1| = N
    ScenarioConfig one = ScenarioConfig::defaults();
    one.users = 1;
    one.ris_elements = 8;
    one.rician_users = {10.0};
    one = resolve_scenario(one, 0);
    const Scene s1 = build_scene(one, 0);
    Rng rng1 = substream(one.seed, Stream::pso, 1);
    PsoParams p1 = PsoParams::defaults_for(8);
    p1.adapt_every_iteration = every;
    const PhaseOptimum opt1 = pso_optimize(one, s1.gains, p1, rng1);
    const double mag = std::abs(psi(opt1.phases, one.user_aods[0], one.aoa_ris, one.d_over_lambda));
    const bool align = mag >= 0.99 * 8;

    // K = 6 defaults: PSO vs best of 10^3 random draws, 10 restarts
    ScenarioConfig c = resolve_scenario(ScenarioConfig::defaults(), 0);
    const Scene scene = build_scene(c, 0);
    const SumRateFitness fit(c, scene.gains);
    double baseline = -std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < 1000; ++i)
        baseline = std::max(baseline, -fit(random_phases(c.seed, c.ris_elements, 1000000 + i)));
    PsoParams params = PsoParams::defaults_for(c.ris_elements);
    params.adapt_every_iteration = every;
    std::vector<double> restarts(10);
    parallel_for(10, 0, [&](std::size_t r) {
        Rng rng = substream(c.seed, Stream::pso, 100 + r);
        restarts[r] = pso_optimize(c, scene.gains, params, rng).sum_rate;
    });
    const auto wins = std::count_if(restarts.begin(), restarts.end(), [&](double v) { return v > baseline; });
    return {align && wins >= 9,
            fmt("K=1,N=8: |psi_1|=%.5f (>=7.92); K=6: PSO beats best-of-1000 random (%.4f) in %ld/10 restarts "
                "(min PSO %.4f)",
                mag, baseline, static_cast<long>(wins), *std::min_element(restarts.begin(), restarts.end()))};
}

Outcome criterion_8()
{
    ScenarioConfig c = ScenarioConfig::defaults();
    c = resolve_scenario(c, 0);
    const Scene scene = build_scene(c, 0);
    PsoParams p = PsoParams::defaults_for(c.ris_elements);
    p.iterations = 400;

    Rng a = substream(c.seed, Stream::pso, 7);
    const PhaseOptimum serial = pso_optimize(c, scene.gains, p, a);
    bool monotone = true;
    for (std::size_t t = 1; t < serial.trace.size(); ++t)
        monotone = monotone && serial.trace[t] <= serial.trace[t - 1];

    PsoParams q = p;
    q.workers = 4;
    Rng b = substream(c.seed, Stream::pso, 7);
    const PhaseOptimum threaded = pso_optimize(c, scene.gains, q, b);
    const bool deterministic = serial.trace == threaded.trace && serial.phases.theta == threaded.phases.theta;

    // the three adjustment examples
    PsoParams ap;
    auto make = [](int c0, double w, bool improved) {
        PsoState s;
        s.stagnation = c0;
        s.inertia = w;
        s.improved = improved;
        return s;
    };
    PsoState e1 = make(0, 0.9, true);
    adjust_adaptive_parameter(e1, ap);
    PsoState e2 = make(3, 0.7, false);
    adjust_adaptive_parameter(e2, ap);
    PsoState e3 = make(7, 0.15, true);
    adjust_adaptive_parameter(e3, ap);
    PsoState e4 = make(7, 0.8, true);
    adjust_adaptive_parameter(e4, ap);
    const bool branches = e1.stagnation == 0 && e1.inertia == 1.1 && e2.stagnation == 4 && e2.inertia == 0.7
                          && e3.stagnation == 6 && e3.inertia == 0.1 && e4.stagnation == 6 && e4.inertia == 0.4;
    return {monotone && deterministic && branches,
            fmt("trace nonincreasing=%s (%zu entries); adaptive-parameter examples=%s; workers 1 vs 4 identical=%s",
                monotone ? "yes" : "no", serial.trace.size(), branches ? "yes" : "no", deterministic ? "yes" : "no")};
}

Outcome criterion_9()
{
    Rng rng(9009);
    double worst = 0;
    int instances = 0;
    for (Index N = 1; N <= 4; ++N)
        for (Index M = 1; M <= 4; ++M)
            for (Index K = 1; K <= 4; ++K)
            {
                ChannelRealization<double> ch;
                ch.G.resize(N, M);
                ch.H.resize(N, K);
                fill_complex_normal(ch.G, rng);
                fill_complex_normal(ch.H, rng);
                Eigen::VectorXd theta(N);
                for (Index n = 0; n < N; ++n)
                    theta(n) = uniform_real(rng, 0.0, two_pi<double>);
                const PhaseVector phases = PhaseVector::continuous(theta);

                oracle::Mat G = oracle::zeros(N, M), H = oracle::zeros(N, K);
                for (Index n = 0; n < N; ++n)
                {
                    for (Index m = 0; m < M; ++m)
                        G[n][m] = ch.G(n, m);
                    for (Index k = 0; k < K; ++k)
                        H[n][k] = ch.H(n, k);
                }
                std::vector<double> th(phases.theta.begin(), phases.theta.end());
                const oracle::Mat Fo = oracle::cascaded(G, H, th);
                const oracle::Mat Wo = oracle::mrt(Fo);
                const CMatrix<double> F = cascaded_channel(ch, phases);
                const CMatrix<double> W = mrt_precoder(F).W;
                for (Index k = 0; k < K; ++k)
                    for (Index m = 0; m < M; ++m)
                    {
                        worst = std::max(worst, oracle::rel_diff(F(k, m), Fo[k][m]));
                        worst = std::max(worst, oracle::rel_diff(W(m, k), Wo[m][k]));
                    }
                const double d = uniform_real(rng, 0.1, 1.0);
                const double pr = uniform_real(rng, -1.5, 1.5);
                std::vector<double> ang(K);
                for (auto &a : ang)
                    a = uniform_real(rng, -1.5, 1.5);
                for (Index k = 0; k < K; ++k)
                {
                    worst = std::max(worst, oracle::rel_diff(psi(phases, ang[k], pr, d), oracle::psi(th, ang[k], pr, d)));
                    for (Index i = 0; i < K; ++i)
                        worst = std::max(worst, oracle::rel_diff(los_inner_product(ang[k], ang[i], N, d),
                                                                 oracle::los_inner(ang[k], ang[i], N, d)));
                }
                ++instances;
            }
    return {worst <= 1e-10, fmt("%d instances (N,M,K in 1..4), max rel diff %.2e", instances, worst)};
}

/// Judged on the default swarm; the every-iteration inertia variant is reported alongside.
std::function<Outcome()> with_variant(Outcome (*check)(bool))
{
    return [check] {
        Outcome base = check(false);
        const Outcome variant = check(true);
        base.detail += fmt(" | variant with omega rule every iteration: %s (%s)", variant.pass ? "pass" : "fail",
                           variant.detail.c_str());
        return base;
    };
}

} // namespace

int main()
{
    const std::pair<const char *, std::function<Outcome()>> criteria[] = {
        {"1 quantization table", criterion_1},
        {"2 closed form vs Monte Carlo", criterion_2},
        {"3 moment identities", criterion_3},
        {"4 algebraic identity", criterion_4},
        {"5 DAC saturation", with_variant(criterion_5)},
        {"6 phase-bit saturation", with_variant(criterion_6)},
        {"7 optimizer sanity", with_variant(criterion_7)},
        {"8 PSO mechanics", criterion_8},
        {"9 brute-force equivalence", criterion_9},
    };
    int failed = 0;
    for (const auto &[name, run] : criteria)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = run();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/9 criteria passed\n", 9 - failed);
    return failed == 0 ? 0 : 1;
}
