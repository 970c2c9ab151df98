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

#ifndef RISLAB_PSO_HPP
#define RISLAB_PSO_HPP

#include "rislab/error.hpp"
#include "rislab/geometry.hpp"
#include "rislab/parallel.hpp"
#include "rislab/phase.hpp"
#include "rislab/random.hpp"
#include "rislab/rate.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <vector>

namespace rislab
{

/// A fitness is minimized; it must be safe to call concurrently.
template <typename F>
concept Fitness = requires(const F &f, const PhaseVector &p) {
    { f(p) } -> std::convertible_to<double>;
};

/// R'(theta) = -R_sum from the closed-form rate model.
class SumRateFitness
{
public:
    SumRateFitness(const ScenarioConfig &config, const LinkGains &gains, ClosedFormOptions options = {})
        : model_(config, gains, options) {}

    double operator()(const PhaseVector &phases) const { return -model_.sum_rate(phases); }

    const ClosedFormModel<double> &model() const { return model_; }

private:
    ClosedFormModel<double> model_;
};

inline double fitness(const PhaseVector &phases, const ScenarioConfig &config, const LinkGains &gains)
{
    return SumRateFitness(config, gains)(phases);
}

struct PsoParams
{
    std::size_t swarm_size = 100; // L
    std::size_t iterations = 200; // T
    double v_max = two_pi<double>;
    double inertia = 0.9;         // initial omega
    double c1 = 1.49;
    double c2 = 1.49;
    double inertia_min = 0.1;
    double inertia_max = 1.1;
    /// Draw r1, r2 per dimension instead of once per particle and iteration.
    bool per_dimension_random = false;
    /// Reset the stagnation counter at every adjustment (literal reading of the adjustment step).
    bool memoryless_stagnation = false;
    /// Apply the omega branches after every iteration instead of only after improvements.
    bool adapt_every_iteration = false;
    unsigned workers = 1;

    /// L = min(100, 10N), T = 200N.
    static PsoParams defaults_for(Index elements)
    {
        PsoParams p;
        p.swarm_size = static_cast<std::size_t>(std::min<Index>(100, 10 * elements));
        p.iterations = static_cast<std::size_t>(200 * elements);
        return p;
    }

    void validate() const
    {
        if (swarm_size < 1)
            throw Error(ErrorKind::domain_error, "PSO swarm size must be >= 1");
        if (!(v_max > 0.0))
            throw Error(ErrorKind::domain_error, "PSO v_max must be > 0");
        if (c1 < 0.0 || c2 < 0.0)
            throw Error(ErrorKind::domain_error, "PSO acceleration constants must be >= 0");
        if (!(inertia_min <= inertia_max))
            throw Error(ErrorKind::domain_error, "PSO inertia bounds are inverted");
    }
};

/// Swarm state; rows of the L x N matrices are particles.
struct PsoState
{
    Eigen::MatrixXd positions;
    Eigen::MatrixXd velocities;
    Eigen::MatrixXd personal_best;
    Eigen::VectorXd personal_best_fitness;
    Eigen::VectorXd global_best;
    double global_best_fitness = std::numeric_limits<double>::infinity();
    double inertia = 0.9;
    int stagnation = 0;
    std::size_t iteration = 0;
    bool improved = false;          // global best strictly improved in the last step
    std::vector<double> trace;      // global-best fitness after init and after every step

    Index particles() const { return positions.rows(); }
    Index dimension() const { return positions.cols(); }
};

namespace detail
{

template <Fitness F>
Eigen::VectorXd evaluate_swarm(const Eigen::MatrixXd &positions, const F &fitness, unsigned workers)
{
    Eigen::VectorXd values(positions.rows());
    parallel_for(static_cast<std::size_t>(positions.rows()), workers, [&](std::size_t i) {
        const auto row = static_cast<Index>(i);
        PhaseVector p;
        p.theta = positions.row(row).transpose();
        values(row) = fitness(p);
    });
    return values;
}

} // namespace detail

/// Uniform positions on [0, 2*pi)^N, uniform velocities on [-v_max, v_max]^N, p_i = theta_i,
/// g = best p_i (first on ties).
template <Fitness F>
PsoState initialize_swarm(const PsoParams &params, Index dimension, const F &fitness, Rng &rng)
{
    params.validate();
    if (dimension < 1)
        throw Error(ErrorKind::invalid_dimension, "PSO needs at least one dimension");
    const auto L = static_cast<Index>(params.swarm_size);
    PsoState s;
    s.positions.resize(L, dimension);
    s.velocities.resize(L, dimension);
    for (Index i = 0; i < L; ++i)
    {
        for (Index n = 0; n < dimension; ++n)
            s.positions(i, n) = uniform_real(rng, 0.0, two_pi<double>);
        for (Index n = 0; n < dimension; ++n)
            s.velocities(i, n) = uniform_real(rng, -params.v_max, params.v_max);
    }
    s.personal_best = s.positions;
    s.personal_best_fitness = detail::evaluate_swarm(s.positions, fitness, params.workers);
    Index best = 0;
    s.global_best_fitness = s.personal_best_fitness.minCoeff(&best);
    s.global_best = s.personal_best.row(best).transpose();
    s.inertia = std::clamp(params.inertia, params.inertia_min, params.inertia_max);
    s.trace.push_back(s.global_best_fitness);
    return s;
}

/// One iteration: velocity and position update for every particle, fitness evaluation,
/// personal-best and then global-best refresh. Sets state.improved.
template <Fitness F>
void pso_step(PsoState &state, const PsoParams &params, const F &fitness, Rng &rng)
{
    const Index L = state.particles();
    const Index N = state.dimension();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd r1(N), r2(N);
    for (Index i = 0; i < L; ++i)
    {
        if (params.per_dimension_random)
        {
            for (Index n = 0; n < N; ++n)
                r1(n) = unit(rng);
            for (Index n = 0; n < N; ++n)
                r2(n) = unit(rng);
        }
        else
        {
            r1.setConstant(unit(rng));
            r2.setConstant(unit(rng));
        }
        for (Index n = 0; n < N; ++n)
        {
            const double theta = state.positions(i, n);
            double v = state.inertia * state.velocities(i, n)
                       + params.c1 * r1(n) * (state.personal_best(i, n) - theta)
                       + params.c2 * r2(n) * (state.global_best(n) - theta);
            v = std::clamp(v, -params.v_max, params.v_max);
            state.velocities(i, n) = v;
            state.positions(i, n) = wrap_angle(theta + v);
        }
    }

    const Eigen::VectorXd current = detail::evaluate_swarm(state.positions, fitness, params.workers);
    for (Index i = 0; i < L; ++i)
        if (state.personal_best_fitness(i) > current(i))
        {
            state.personal_best.row(i) = state.positions.row(i);
            state.personal_best_fitness(i) = current(i);
        }

    Index best = 0;
    const double candidate = state.personal_best_fitness.minCoeff(&best);
    state.improved = state.global_best_fitness > candidate;
    if (state.improved)
    {
        state.global_best_fitness = candidate;
        state.global_best = state.personal_best.row(best).transpose();
    }
    ++state.iteration;
    state.trace.push_back(state.global_best_fitness);
}

/// Stagnation-driven inertia adaptation. No improvement: c += 1. Improvement: c = max(c-1, 0),
/// then omega doubles if c < 2 or halves if c > 5. omega stays inside the configured bounds.
inline void adjust_adaptive_parameter(PsoState &state, const PsoParams &params)
{
    if (params.memoryless_stagnation)
        state.stagnation = 0;
    if (!state.improved)
        ++state.stagnation;
    else
        state.stagnation = std::max(state.stagnation - 1, 0);
    if (!state.improved && !params.adapt_every_iteration)
        return;
    if (state.stagnation < 2)
        state.inertia *= 2.0;
    else if (state.stagnation > 5)
        state.inertia /= 2.0;
    state.inertia = std::clamp(state.inertia, params.inertia_min, params.inertia_max);
}

struct PsoResult
{
    PhaseVector best;
    double best_fitness = 0.0;
    std::vector<double> trace;
    std::size_t iterations = 0;
};

/// Minimizes `fitness` over [0, 2*pi)^N with the adaptive-inertia swarm.
template <Fitness F>
PsoResult pso_minimize(const F &fitness, Index dimension, const PsoParams &params, Rng &rng)
{
    PsoState state = initialize_swarm(params, dimension, fitness, rng);
    for (std::size_t t = 0; t < params.iterations; ++t)
    {
        pso_step(state, params, fitness, rng);
        adjust_adaptive_parameter(state, params);
    }
    PsoResult r;
    r.best = PhaseVector::continuous(state.global_best);
    r.best_fitness = state.global_best_fitness;
    r.trace = std::move(state.trace);
    r.iterations = state.iteration;
    return r;
}

struct PhaseOptimum
{
    PhaseVector phases;
    double sum_rate = 0.0;
    std::vector<double> trace; // best fitness (= -R_sum) per iteration
    std::size_t iterations = 0;
};

/// Continuous-phase sum-rate maximization.
inline PhaseOptimum pso_optimize(const ScenarioConfig &config, const LinkGains &gains, const PsoParams &params, Rng &rng,
                                 ClosedFormOptions options = {})
{
    const SumRateFitness objective(config, gains, options);
    PsoResult r = pso_minimize(objective, config.ris_elements, params, rng);
    return {std::move(r.best), -r.best_fitness, std::move(r.trace), r.iterations};
}

/// Coordinate-wise search over grid neighbours (+-1 step) of a discrete phase vector,
/// accepting strict improvements until a full sweep changes nothing.
template <Fitness F>
PhaseVector discrete_local_search(PhaseVector phases, int bits, const F &fitness, int max_sweeps = 50)
{
    const double step = two_pi<double> / static_cast<double>(1L << bits);
    phases = project_discrete(phases, bits);
    double best = fitness(phases);
    for (int sweep = 0; sweep < max_sweeps; ++sweep)
    {
        bool changed = false;
        for (Index n = 0; n < phases.size(); ++n)
            for (double direction : {-1.0, 1.0})
            {
                PhaseVector trial = phases;
                trial.theta(n) = wrap_angle(phases.theta(n) + direction * step);
                trial = project_discrete(trial, bits);
                const double value = fitness(trial);
                if (value < best)
                {
                    best = value;
                    phases = std::move(trial);
                    changed = true;
                }
            }
        if (!changed)
            break;
    }
    return phases;
}

} // namespace rislab

#endif // RISLAB_PSO_HPP
