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

#ifndef RISLAB_MONTE_CARLO_HPP
#define RISLAB_MONTE_CARLO_HPP

#include "rislab/geometry.hpp"
#include "rislab/parallel.hpp"
#include "rislab/precoding.hpp"
#include "rislab/random.hpp"
#include "rislab/rate.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace rislab
{

struct MonteCarloOptions
{
    std::size_t trials = 10000;
    std::uint64_t seed = 1;   // trial t draws from substream (seed, channel_trials, t)
    unsigned workers = 0;     // 0 = hardware concurrency
    /// Draw n_q per trial instead of using its conditional covariance.
    bool sample_quantization_noise = false;
};

namespace detail
{

template <typename Scalar>
struct TrialSample
{
    RVector<Scalar> rate;        // log2(1 + gamma_k)
    RVector<Scalar> signal;      // ||f_k||^4
    RMatrix<Scalar> interference; // |f_k^H f_i|^2
    RVector<Scalar> dac;         // T_r f_k^H R_nq f_k  (or T_r |f_k^H n_q|^2 when sampled)
    Scalar trace{};              // T_r
};

template <typename Scalar>
TrialSample<Scalar> run_trial(const ChannelSampler<Scalar> &sampler, const PhaseVector &phases, const DacModel &dac,
                              Scalar power, Scalar noise, bool sample_nq, std::uint64_t seed, std::uint64_t trial)
{
    Rng rng = substream(seed, Stream::channel_trials, trial);
    const ChannelRealization<Scalar> channel = sampler.sample(rng);
    const CMatrix<Scalar> F = cascaded_channel(channel, phases); // rows are f_k^H
    const Index K = F.rows();

    TrialSample<Scalar> s;
    s.trace = F.squaredNorm();
    if (!(s.trace > Scalar(0)))
        throw Error(ErrorKind::degenerate_channel, "Monte Carlo trial drew an all-zero cascaded channel");

    const CMatrix<Scalar> gram = F * F.adjoint(); // (k, i) = f_k^H f_i
    const RVector<Scalar> column_power = F.colwise().squaredNorm().transpose(); // diag(F^H F)
    const auto distortion = static_cast<Scalar>(dac.distortion_gain());
    const auto a2 = static_cast<Scalar>(dac.alpha * dac.alpha);

    CVector<Scalar> nq;
    if (sample_nq && distortion > Scalar(0))
    {
        // R_nq = alpha(1-alpha) diag(W W^H), W = F^H / sqrt(T_r)
        Rng noise_rng = substream(seed, Stream::quantization_noise, trial);
        const RVector<Scalar> cov = column_power * (distortion / s.trace);
        nq = apply_aqnm(CVector<Scalar>::Zero(F.cols()), dac, cov, noise_rng);
    }

    s.rate.resize(K);
    s.signal.resize(K);
    s.interference = RMatrix<Scalar>::Zero(K, K);
    s.dac.resize(K);
    for (Index k = 0; k < K; ++k)
    {
        s.signal(k) = std::norm(gram(k, k));
        Scalar interf = 0;
        for (Index i = 0; i < K; ++i)
            if (i != k)
            {
                s.interference(k, i) = std::norm(gram(k, i));
                interf += s.interference(k, i);
            }
        if (nq.size() > 0)
            s.dac(k) = s.trace * std::norm((F.row(k) * nq).value());
        else
            s.dac(k) = distortion * (F.row(k).cwiseAbs2().transpose().cwiseProduct(column_power)).sum();
        const Scalar gamma = a2 * power * s.signal(k) / (a2 * power * interf + power * s.dac(k) + noise * s.trace);
        s.rate(k) = std::log2(Scalar(1) + gamma);
    }
    return s;
}

inline double mean_of(const std::vector<double> &v)
{
    return pairwise_sum(v) / static_cast<double>(v.size());
}

inline double stderr_of(const std::vector<double> &v, double mean)
{
    if (v.size() < 2)
        return 0.0;
    std::vector<double> sq(v.size());
    for (std::size_t t = 0; t < v.size(); ++t)
        sq[t] = (v[t] - mean) * (v[t] - mean);
    return std::sqrt(pairwise_sum(sq) / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

} // namespace detail

/// Ergodic rates by simulation: per trial, draw (G, H), form F and the MRT precoder, evaluate
/// gamma_k with the quantization noise term P f_k^H R_nq f_k, then average log2(1 + gamma_k).
/// Results do not depend on the worker count.
template <typename Scalar = double>
RateBreakdown monte_carlo_rates(const ScenarioConfig &config, const LinkGains &gains, const PhaseVector &phases,
                                const MonteCarloOptions &options)
{
    if (options.trials < 1)
        throw Error(ErrorKind::domain_error, "monte_carlo_rates needs at least one trial");
    const ChannelSampler<Scalar> sampler(config, gains);
    if (phases.size() != config.ris_elements)
        throw Error(ErrorKind::invalid_dimension, "phase vector length does not match N");
    const DacModel dac = DacModel::from(config.dac);
    const Index K = config.users;
    const std::size_t T = options.trials;

    std::vector<detail::TrialSample<Scalar>> samples(T);
    parallel_for(T, options.workers, [&](std::size_t t) {
        samples[t] = detail::run_trial(sampler, phases, dac, static_cast<Scalar>(config.power_w),
                                       static_cast<Scalar>(config.noise_w), options.sample_quantization_noise,
                                       options.seed, t);
    });

    auto column = [&](auto &&get) {
        std::vector<double> v(T);
        for (std::size_t t = 0; t < T; ++t)
            v[t] = static_cast<double>(get(samples[t]));
        return v;
    };

    RateBreakdown out;
    out.signal.resize(K);
    out.interference = Eigen::MatrixXd::Zero(K, K);
    out.dac.resize(K);
    out.noise.resize(K);
    out.rate.resize(K);
    out.rate_stderr.resize(K);
    const double trace = detail::mean_of(column([](const auto &s) { return s.trace; }));
    for (Index k = 0; k < K; ++k)
    {
        const auto rates = column([k](const auto &s) { return s.rate(k); });
        out.rate(k) = detail::mean_of(rates);
        out.rate_stderr(k) = detail::stderr_of(rates, out.rate(k));
        out.signal(k) = detail::mean_of(column([k](const auto &s) { return s.signal(k); }));
        out.dac(k) = detail::mean_of(column([k](const auto &s) { return s.dac(k); }));
        out.noise(k) = trace;
        for (Index i = 0; i < K; ++i)
            if (i != k)
                out.interference(k, i) = detail::mean_of(column([k, i](const auto &s) { return s.interference(k, i); }));
    }
    const auto sums = column([](const auto &s) { return s.rate.sum(); });
    out.sum_rate = detail::mean_of(sums);
    out.sum_rate_stderr = detail::stderr_of(sums, out.sum_rate);
    return out;
}

struct MomentRow
{
    std::string name;
    Index user = 0;
    double empirical = 0.0;
    double empirical_stderr = 0.0;
    double analytic = 0.0;

    double relative_error() const { return std::abs(analytic - empirical) / std::abs(empirical); }
};

/// Empirical vs analytic moments behind the quantization and noise terms, per user:
///   E|f_km|^2          (averaged over m)          vs delta_k (K_G K_k |psi_k|^2 + N (K_G+K_k+1))
///   E|f_km|^4          (averaged over m)          vs the published fourth-moment expression
///   E{T_r}                                        vs M sum_c delta_c (...)
///   E{T_r f_k^H R_nq f_k} / (alpha(1-alpha))      vs M (E|f_km|^4 + sum_{i!=k} E|f_km|^2 E|f_im|^2)
/// The last row is normalized so it is defined for a perfect DAC too.
template <typename Scalar = double>
std::vector<MomentRow> moment_oracles(const ScenarioConfig &config, const LinkGains &gains, const PhaseVector &phases,
                                      const MonteCarloOptions &options, MomentForm fourth_form = MomentForm::published)
{
    if (options.trials < 1000)
        throw Error(ErrorKind::domain_error, "moment_oracles needs at least 1000 trials");
    const ChannelSampler<Scalar> sampler(config, gains);
    const ClosedFormModel<Scalar> model(config, gains);
    const Index K = config.users;
    const Index M = config.bs_antennas;
    const std::size_t T = options.trials;

    struct Sample
    {
        RVector<Scalar> second, fourth, dac;
        Scalar trace{};
    };
    std::vector<Sample> samples(T);
    parallel_for(T, options.workers, [&](std::size_t t) {
        Rng rng = substream(options.seed, Stream::channel_trials, t);
        const CMatrix<Scalar> F = cascaded_channel(sampler.sample(rng), phases);
        const RMatrix<Scalar> power = F.cwiseAbs2();
        const RVector<Scalar> column_power = power.colwise().sum().transpose();
        Sample &s = samples[t];
        s.trace = power.sum();
        s.second = power.rowwise().mean();
        s.fourth = power.cwiseAbs2().rowwise().mean();
        s.dac = power * column_power;
    });

    auto summarize = [&](auto &&get) {
        std::vector<double> v(T);
        for (std::size_t t = 0; t < T; ++t)
            v[t] = static_cast<double>(get(samples[t]));
        const double mean = detail::mean_of(v);
        return std::pair{mean, detail::stderr_of(v, mean)};
    };

    const CVector<Scalar> psis = model.psi_all(phases);
    const auto N = static_cast<Scalar>(config.ris_elements);
    const auto Kg = static_cast<Scalar>(config.rician_bs_ris);

    std::vector<MomentRow> rows;
    for (Index k = 0; k < K; ++k)
    {
        const auto uk = model.stats(k, psis);
        const Scalar second = moments::entry_second(N, Kg, uk);
        const Scalar fourth = moments::entry_fourth(N, Kg, uk, fourth_form);
        Scalar cross = 0;
        for (Index i = 0; i < K; ++i)
            if (i != k)
                cross += second * moments::entry_second(N, Kg, model.stats(i, psis));

        auto [e2, s2] = summarize([k](const Sample &s) { return s.second(k); });
        rows.push_back({"E|f_km|^2", k, e2, s2, static_cast<double>(second)});
        auto [e4, s4] = summarize([k](const Sample &s) { return s.fourth(k); });
        rows.push_back({"E|f_km|^4", k, e4, s4, static_cast<double>(fourth)});
        auto [ed, sd] = summarize([k](const Sample &s) { return s.dac(k); });
        rows.push_back({"E{T_r f_k^H R_nq f_k}/(alpha(1-alpha))", k, ed, sd,
                        static_cast<double>(static_cast<Scalar>(M) * (fourth + cross))});
    }
    auto [et, st] = summarize([](const Sample &s) { return s.trace; });
    rows.push_back({"E{T_r}", 0, et, st, static_cast<double>(model.noise_term(psis))});
    return rows;
}

} // namespace rislab

#endif // RISLAB_MONTE_CARLO_HPP
