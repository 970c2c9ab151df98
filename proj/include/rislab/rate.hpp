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

#ifndef RISLAB_RATE_HPP
#define RISLAB_RATE_HPP

#include "rislab/error.hpp"
#include "rislab/geometry.hpp"
#include "rislab/phase.hpp"
#include "rislab/precoding.hpp"
#include "rislab/scenario.hpp"
#include "rislab/types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace rislab
{

/// Per-user terms of the downlink SINR and the resulting rates (bits/s/Hz).
/// For closed-form results the terms are E||f_k||^4, E|f_k^H f_i|^2, I_k^DAC and E{T_r};
/// Monte Carlo results carry the empirical counterparts.
struct RateBreakdown
{
    Eigen::VectorXd signal;
    Eigen::MatrixXd interference; // (k, i), zero diagonal
    Eigen::VectorXd dac;
    Eigen::VectorXd noise;
    Eigen::VectorXd rate;
    Eigen::VectorXd rate_stderr; // Monte Carlo only
    double sum_rate = 0.0;
    double sum_rate_stderr = 0.0;
    std::vector<std::string> diagnostics;
};

/// Which expression backs the fourth-order moments.
enum class MomentForm
{
    published, // the theorem's printed signal-term expression
    exact,     // exact Rician moments
};

/// psi_c = a_N^H(phi_r) Phi^H hbar_c
///       = sum_n exp(j*2*pi*(d/lambda)*(n-1)*(sin phi_ct - sin phi_r) - j*theta_n).
template <typename Scalar = double>
Complex<Scalar> psi(const PhaseVector &phases, Scalar phi_ct, Scalar phi_r, Scalar d_over_lambda)
{
    const Scalar step = two_pi<Scalar> * d_over_lambda * (std::sin(phi_ct) - std::sin(phi_r));
    Complex<Scalar> acc(0, 0);
    for (Index n = 0; n < phases.size(); ++n)
        acc += std::polar(Scalar(1), step * static_cast<Scalar>(n) - static_cast<Scalar>(phases.theta(n)));
    return acc;
}

/// delta_c = eps*beta_c / ((K_G+1)(K_c+1)).
template <typename Scalar = double>
Scalar delta(Scalar epsilon, Scalar beta_c, Scalar rician_g, Scalar rician_c)
{
    return epsilon * beta_c / ((rician_g + Scalar(1)) * (rician_c + Scalar(1)));
}

/// hbar_k^H hbar_i = sum_n exp(j*2*pi*(d/lambda)*(n-1)*(sin phi_it - sin phi_kt)).
template <typename Scalar = double>
Complex<Scalar> los_inner_product(Scalar phi_kt, Scalar phi_it, Index elements, Scalar d_over_lambda)
{
    const Scalar step = two_pi<Scalar> * d_over_lambda * (std::sin(phi_it) - std::sin(phi_kt));
    Complex<Scalar> acc(0, 0);
    for (Index n = 0; n < elements; ++n)
        acc += std::polar(Scalar(1), step * static_cast<Scalar>(n));
    return acc;
}

namespace moments
{

/// LoS statistics of one user entering every closed-form moment.
template <typename Scalar>
struct UserStats
{
    Scalar delta;   // delta_c
    Scalar rician;  // K_c
    Scalar psi_sq;  // |psi_c|^2
};

/// E||f_k||^4 as printed in the theorem.
template <typename Scalar>
Scalar signal_published(Scalar M, Scalar N, Scalar Kg, const UserStats<Scalar> &u)
{
    const Scalar Kk = u.rician;
    const Scalar p = u.psi_sq;
    const Scalar braces = M * (Kg * Kk) * (Kg * Kk) * p * p
                          + 2 * Kg * Kk * p * (2 * M * N * Kg + M * N * Kk + M * N + N * Kk + N - 2)
                          + M * N * N * (2 * Kg * Kg + Kk * Kk + 2 * Kg + 2 * Kk + 1)
                          + N * N * (Kg * Kg + 2 * Kg * Kk + 2 * Kg + 1)
                          + M * N * (2 * Kk - Scalar(0.25) * Kg * Kg)
                          + N * (2 * Kg + 2 - Scalar(0.25) * (Kg * Kg + 2 * Kg + 2 * Kk));
    return M * u.delta * u.delta * braces;
}

/// Exact E||f_k||^4. Conditional on h_k the row h_k^H Phi G is Gaussian with a rank-one mean,
/// so E||f||^4 = delta^2 [M^2 K_G^2 E|c|^4 + 2 K_G M (M+1) E{|c|^2 s} + M (M+1) E{s^2}]
/// with c = x^H Phi a_N(phi_r), s = ||x||^2 and x the normalized user channel.
template <typename Scalar>
Scalar signal_exact(Scalar M, Scalar N, Scalar Kg, const UserStats<Scalar> &u)
{
    const Scalar Kk = u.rician;
    const Scalar p = u.psi_sq;
    const Scalar c4 = Kk * Kk * p * p + 4 * Kk * p * N + 2 * N * N;
    const Scalar c2s = Kk * p * (Kk * N + N + 2) + (Kk + 1) * N * N + N;
    const Scalar s2 = N * N * (Kk + 1) * (Kk + 1) + N * (2 * Kk + 1);
    return u.delta * u.delta * (M * M * Kg * Kg * c4 + 2 * Kg * M * (M + 1) * c2s + M * (M + 1) * s2);
}

/// E|f_k^H f_i|^2. `cross` is psi_k^* psi_i (hbar_k^H hbar_i)^*, `los_sq` is |hbar_k^H hbar_i|^2.
template <typename Scalar>
Scalar interference(Scalar M, Scalar N, Scalar Kg, const UserStats<Scalar> &k, const UserStats<Scalar> &i,
                    Scalar cross_re, Scalar los_sq)
{
    const Scalar Kk = k.rician;
    const Scalar Ki = i.rician;
    const Scalar braces = M * Kg * Kg * Kk * Ki * k.psi_sq * i.psi_sq
                          + Kg * Kk * k.psi_sq * (Kg * M * N + N * Ki + N + 2 * M)
                          + Kg * Ki * i.psi_sq * (Kg * M * N + N * Kk + N + 2 * M)
                          + N * N * (M * Kg * Kg + Kg * (Kk + Ki + 2) + (Kk + 1) * (Ki + 1))
                          + M * N * (2 * Kg + Kk + Ki + 1)
                          + M * Kk * Ki * los_sq
                          + 2 * M * Kg * Kk * Ki * cross_re;
    return M * k.delta * i.delta * braces;
}

/// E|f_km|^2 = delta_k (K_G K_k |psi_k|^2 + N (K_G + K_k + 1)).
template <typename Scalar>
Scalar entry_second(Scalar N, Scalar Kg, const UserStats<Scalar> &u)
{
    return u.delta * (Kg * u.rician * u.psi_sq + N * (Kg + u.rician + 1));
}

/// E|f_km|^4 as printed; its tail (N/2)(3(K_G+K_k)+4) equals 2N(3/4 (K_G+K_k) + 1).
template <typename Scalar>
Scalar entry_fourth_published(Scalar N, Scalar Kg, const UserStats<Scalar> &u)
{
    const Scalar a = Kg * u.rician * u.psi_sq;
    const Scalar s = Kg + u.rician + 1;
    return u.delta * u.delta * (a * a + 2 * N * N * s * s + 4 * a * N * s + N / 2 * (3 * (Kg + u.rician) + 4));
}

template <typename Scalar>
Scalar entry_fourth_exact(Scalar N, Scalar Kg, const UserStats<Scalar> &u)
{
    const Scalar a = Kg * u.rician * u.psi_sq;
    const Scalar s = Kg + u.rician + 1;
    return u.delta * u.delta * (a * a + 4 * a * N * s + 8 * a + 2 * N * N * s * s + N * (4 * (Kg + u.rician) + 2));
}

template <typename Scalar>
Scalar entry_fourth(Scalar N, Scalar Kg, const UserStats<Scalar> &u, MomentForm form)
{
    return form == MomentForm::published ? entry_fourth_published(N, Kg, u) : entry_fourth_exact(N, Kg, u);
}

/// The I_k^DAC block as printed: delta_k^2 {...} with 2N(3/4 (K_G+K_k) + 1).
template <typename Scalar>
Scalar dac_self_block(Scalar N, Scalar Kg, const UserStats<Scalar> &u)
{
    const Scalar Kk = u.rician;
    const Scalar a = Kg * Kk * u.psi_sq;
    const Scalar s = Kg + Kk + 1;
    return u.delta * u.delta * (a * a + 4 * Kg * Kk * N * u.psi_sq * s + 2 * N * N * s * s
                                + 2 * N * (Scalar(0.75) * (Kg + Kk) + 1));
}

/// delta_k delta_i {...} cross block of I_k^DAC, i.e. E|f_km|^2 E|f_im|^2.
template <typename Scalar>
Scalar dac_cross_block(Scalar N, Scalar Kg, const UserStats<Scalar> &k, const UserStats<Scalar> &i)
{
    const Scalar Kk = k.rician;
    const Scalar Ki = i.rician;
    return k.delta * i.delta
           * (Kg * Kg * Kk * Ki * k.psi_sq * i.psi_sq + N * Kg * Kk * k.psi_sq * (Kg + Ki + 1)
              + N * Kg * Ki * i.psi_sq * (Kg + Kk + 1)
              + N * N * (Kg * Kg + Kg * Kk + Kg * Ki + Kk * Ki + 2 * Kg + Kk + Ki + 1));
}

} // namespace moments

struct ClosedFormOptions
{
    MomentForm signal_form = MomentForm::published;
};

/// Closed-form ergodic rate approximation for one scenario. Everything that does not
/// depend on the RIS phases is precomputed; evaluation is O(K*N + K^2) and thread-safe.
template <typename Scalar = double>
class ClosedFormModel
{
public:
    ClosedFormModel(const ScenarioConfig &config, const LinkGains &gains, ClosedFormOptions options = {})
        : options_(options), M_(static_cast<Scalar>(config.bs_antennas)), N_(static_cast<Scalar>(config.ris_elements)),
          K_(config.users), power_(static_cast<Scalar>(config.power_w)), noise_(static_cast<Scalar>(config.noise_w)),
          rician_g_(static_cast<Scalar>(config.rician_bs_ris)), dac_(DacModel::from(config.dac))
    {
        config.validate();
        if (config.user_aods.size() != static_cast<std::size_t>(K_))
            throw Error(ErrorKind::invalid_dimension, "user AoDs are not resolved (call resolve_scenario)");
        if (gains.beta.size() != K_)
            throw Error(ErrorKind::invalid_dimension, "LinkGains has the wrong number of users");
        if (std::isinf(config.rician_bs_ris))
            throw Error(ErrorKind::domain_error, "closed form needs finite Rician factors");

        const Index N = config.ris_elements;
        const auto d = static_cast<Scalar>(config.d_over_lambda);
        const auto phi_r = static_cast<Scalar>(config.aoa_ris);
        steering_.resize(K_, N);
        rician_.resize(K_);
        delta_.resize(K_);
        for (Index k = 0; k < K_; ++k)
        {
            const double kk = config.rician_user(static_cast<int>(k));
            if (std::isinf(kk))
                throw Error(ErrorKind::domain_error, "closed form needs finite Rician factors");
            rician_(k) = static_cast<Scalar>(kk);
            delta_(k) = delta<Scalar>(static_cast<Scalar>(gains.epsilon), static_cast<Scalar>(gains.beta(k)), rician_g_,
                                      rician_(k));
            const auto phi = static_cast<Scalar>(config.user_aods[static_cast<std::size_t>(k)]);
            const Scalar step = two_pi<Scalar> * d * (std::sin(phi) - std::sin(phi_r));
            for (Index n = 0; n < N; ++n)
                steering_(k, n) = std::polar(Scalar(1), step * static_cast<Scalar>(n));
        }
        los_.resize(K_, K_);
        for (Index k = 0; k < K_; ++k)
            for (Index i = 0; i < K_; ++i)
                los_(k, i) = los_inner_product<Scalar>(static_cast<Scalar>(config.user_aods[static_cast<std::size_t>(k)]),
                                                       static_cast<Scalar>(config.user_aods[static_cast<std::size_t>(i)]), N, d);
    }

    Index users() const { return K_; }
    Index elements() const { return steering_.cols(); }
    const DacModel &dac() const { return dac_; }

    /// psi_c for every user.
    CVector<Scalar> psi_all(const PhaseVector &phases) const
    {
        check(phases);
        CVector<Scalar> conj_reflection(phases.size());
        for (Index n = 0; n < phases.size(); ++n)
            conj_reflection(n) = std::polar(Scalar(1), -static_cast<Scalar>(phases.theta(n)));
        return steering_ * conj_reflection;
    }

    moments::UserStats<Scalar> stats(Index k, const CVector<Scalar> &psis) const
    {
        return {delta_(k), rician_(k), std::norm(psis(k))};
    }

    Scalar signal(Index k, const CVector<Scalar> &psis) const
    {
        return options_.signal_form == MomentForm::published
                   ? moments::signal_published(M_, N_, rician_g_, stats(k, psis))
                   : moments::signal_exact(M_, N_, rician_g_, stats(k, psis));
    }

    Scalar interference(Index k, Index i, const CVector<Scalar> &psis) const
    {
        if (k == i)
            throw Error(ErrorKind::invalid_pair, "interference term needs i != k");
        const Scalar cross_re = std::real(std::conj(psis(k)) * psis(i) * std::conj(los_(k, i)));
        return moments::interference(M_, N_, rician_g_, stats(k, psis), stats(i, psis), cross_re, std::norm(los_(k, i)));
    }

    Scalar dac_term(Index k, const CVector<Scalar> &psis) const
    {
        const Scalar gain = static_cast<Scalar>(dac_.distortion_gain());
        if (gain == Scalar(0))
            return Scalar(0);
        const auto uk = stats(k, psis);
        Scalar cross = 0;
        for (Index i = 0; i < K_; ++i)
            if (i != k)
                cross += moments::dac_cross_block(N_, rician_g_, uk, stats(i, psis));
        return gain * M_ * (moments::dac_self_block(N_, rician_g_, uk) + cross);
    }

    /// E{T_r}; identical for all users.
    Scalar noise_term(const CVector<Scalar> &psis) const
    {
        Scalar acc = 0;
        for (Index c = 0; c < K_; ++c)
            acc += moments::entry_second(N_, rician_g_, stats(c, psis));
        return M_ * acc;
    }

    RateBreakdown evaluate(const PhaseVector &phases) const
    {
        const CVector<Scalar> psis = psi_all(phases);
        RateBreakdown out;
        out.signal.resize(K_);
        out.interference = Eigen::MatrixXd::Zero(K_, K_);
        out.dac.resize(K_);
        out.noise.resize(K_);
        out.rate.resize(K_);

        const Scalar noise = clamped(noise_term(psis), "E_noise", out.diagnostics);
        const Scalar a2p = static_cast<Scalar>(dac_.alpha * dac_.alpha) * power_;
        for (Index k = 0; k < K_; ++k)
        {
            const Scalar sig = clamped(signal(k, psis), "E_signal", out.diagnostics);
            Scalar interf = 0;
            for (Index i = 0; i < K_; ++i)
                if (i != k)
                {
                    const Scalar v = clamped(interference(k, i, psis), "I_ki", out.diagnostics);
                    out.interference(k, i) = static_cast<double>(v);
                    interf += v;
                }
            const Scalar dac = clamped(dac_term(k, psis), "I_DAC", out.diagnostics);
            const Scalar denominator = a2p * interf + power_ * dac + noise_ * noise;
            if (!(denominator > Scalar(0)))
                throw Error(ErrorKind::degenerate_scenario, "closed-form SINR has a zero denominator");
            out.signal(k) = static_cast<double>(sig);
            out.dac(k) = static_cast<double>(dac);
            out.noise(k) = static_cast<double>(noise);
            out.rate(k) = static_cast<double>(std::log2(Scalar(1) + a2p * sig / denominator));
        }
        out.sum_rate = out.rate.sum();
        return out;
    }

    Scalar sum_rate(const PhaseVector &phases) const { return static_cast<Scalar>(evaluate(phases).sum_rate); }

private:
    void check(const PhaseVector &phases) const
    {
        if (phases.size() != steering_.cols())
            throw Error(ErrorKind::invalid_dimension, "phase vector length does not match N");
    }

    // Negative evaluations are possible in principle for the published expressions;
    // they are clamped and reported.
    static Scalar clamped(Scalar value, const char *name, std::vector<std::string> &diagnostics)
    {
        if (value >= Scalar(0))
            return value;
        diagnostics.push_back(std::string(name) + " evaluated to " + std::to_string(static_cast<double>(value))
                              + "; clamped to 0");
        return Scalar(0);
    }

    ClosedFormOptions options_;
    Scalar M_, N_;
    Index K_;
    Scalar power_, noise_, rician_g_;
    DacModel dac_;
    CMatrix<Scalar> steering_; // K x N, exp(j*2*pi*d*n*(sin phi_kt - sin phi_r))
    RVector<Scalar> rician_, delta_;
    CMatrix<Scalar> los_; // hbar_k^H hbar_i
};

template <typename Scalar = double>
Scalar signal_term(Index k, const ScenarioConfig &config, const LinkGains &gains, const PhaseVector &phases,
                   ClosedFormOptions options = {})
{
    const ClosedFormModel<Scalar> model(config, gains, options);
    return model.signal(k, model.psi_all(phases));
}

template <typename Scalar = double>
Scalar interference_term(Index k, Index i, const ScenarioConfig &config, const LinkGains &gains,
                         const PhaseVector &phases)
{
    const ClosedFormModel<Scalar> model(config, gains);
    return model.interference(k, i, model.psi_all(phases));
}

template <typename Scalar = double>
Scalar dac_term(Index k, const ScenarioConfig &config, const LinkGains &gains, const PhaseVector &phases)
{
    const ClosedFormModel<Scalar> model(config, gains);
    return model.dac_term(k, model.psi_all(phases));
}

template <typename Scalar = double>
Scalar noise_term(const ScenarioConfig &config, const LinkGains &gains, const PhaseVector &phases)
{
    const ClosedFormModel<Scalar> model(config, gains);
    return model.noise_term(model.psi_all(phases));
}

/// R_k ~ log2(1 + a^2 P E_sig / (a^2 P sum_{i!=k} I_ki + P I_DAC + sigma^2 E_noise)).
template <typename Scalar = double>
RateBreakdown closed_form_rates(const ScenarioConfig &config, const LinkGains &gains, const PhaseVector &phases,
                                ClosedFormOptions options = {})
{
    return ClosedFormModel<Scalar>(config, gains, options).evaluate(phases);
}

} // namespace rislab

#endif // RISLAB_RATE_HPP
