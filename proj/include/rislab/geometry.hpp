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

#ifndef RISLAB_GEOMETRY_HPP
#define RISLAB_GEOMETRY_HPP

#include "rislab/error.hpp"
#include "rislab/phase.hpp"
#include "rislab/random.hpp"
#include "rislab/scenario.hpp"
#include "rislab/types.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace rislab
{

/// ULA steering vector: entry x is exp(j*2*pi*(d/lambda)*x*sin(angle)), x = 0..X-1.
template <typename Scalar = double>
CVector<Scalar> array_response(Index elements, Scalar angle, Scalar d_over_lambda)
{
    if (elements < 1)
        throw Error(ErrorKind::invalid_dimension, "array_response needs at least one element");
    const Scalar step = two_pi<Scalar> * d_over_lambda * std::sin(angle);
    CVector<Scalar> a(elements);
    a(0) = Complex<Scalar>(1, 0);
    for (Index x = 1; x < elements; ++x)
        a(x) = std::polar(Scalar(1), step * static_cast<Scalar>(x));
    return a;
}

/// Large-scale path loss, linear: 10^(pl0_db/10) * (D/d0)^-kappa.
template <typename Scalar = double>
Scalar path_loss(Scalar distance, Scalar pl0_db, Scalar d0, Scalar kappa)
{
    if (!(distance > 0) || !(d0 > 0))
        throw Error(ErrorKind::domain_error, "path_loss needs positive distances");
    return std::pow(Scalar(10), pl0_db / Scalar(10)) * std::pow(distance / d0, -kappa);
}

/// epsilon (BS-RIS) and beta_k (RIS-user k) path losses.
struct LinkGains
{
    double epsilon = 0.0;
    Eigen::VectorXd beta;
};

struct Scene
{
    LinkGains gains;
    std::vector<Point2> user_positions;
};

/// Drops K users uniformly on the configured disk and evaluates the path losses.
inline Scene build_scene(const ScenarioConfig &config, Rng &rng)
{
    config.validate();
    Scene scene;
    scene.user_positions.resize(static_cast<std::size_t>(config.users));
    for (auto &p : scene.user_positions)
    {
        // sqrt of a uniform radius fraction gives a uniform density over the disk
        const double r = config.user_radius * std::sqrt(uniform_real(rng, 0.0, 1.0));
        const double a = uniform_real(rng, 0.0, two_pi<double>);
        p = {config.user_center.x + r * std::cos(a), config.user_center.y + r * std::sin(a)};
    }

    scene.gains.epsilon = path_loss(distance(config.bs_position, config.ris_position), config.pl0_db,
                                    config.d0, config.kappa_bs_ris);
    scene.gains.beta.resize(config.users);
    for (int k = 0; k < config.users; ++k)
        scene.gains.beta(k) = path_loss(distance(config.ris_position, scene.user_positions[static_cast<std::size_t>(k)]),
                                        config.pl0_db, config.d0, config.kappa_ris_user);
    return scene;
}

/// Scene for a given drop index, drawn from the scene substream of the config seed.
inline Scene build_scene(const ScenarioConfig &config, std::uint64_t drop = 0)
{
    Rng rng = substream(config.seed, Stream::scene, drop);
    return build_scene(config, rng);
}

template <typename Scalar = double>
struct LosComponents
{
    CMatrix<Scalar> G_bar; // N x M, a_N(phi_r) a_M^H(phi_t)
    CMatrix<Scalar> H_bar; // N x K, column k is a_N(phi_kt)
};

template <typename Scalar = double>
LosComponents<Scalar> los_components(const ScenarioConfig &config)
{
    if (config.user_aods.size() != static_cast<std::size_t>(config.users))
        throw Error(ErrorKind::invalid_dimension, "user AoDs are not resolved (call resolve_scenario)");
    const auto d = static_cast<Scalar>(config.d_over_lambda);
    LosComponents<Scalar> los;
    los.G_bar = array_response<Scalar>(config.ris_elements, static_cast<Scalar>(config.aoa_ris), d) *
                array_response<Scalar>(config.bs_antennas, static_cast<Scalar>(config.aod_bs), d).adjoint();
    los.H_bar.resize(config.ris_elements, config.users);
    for (int k = 0; k < config.users; ++k)
        los.H_bar.col(k) = array_response<Scalar>(config.ris_elements,
                                                  static_cast<Scalar>(config.user_aods[static_cast<std::size_t>(k)]), d);
    return los;
}

template <typename Scalar = double>
struct ChannelRealization
{
    CMatrix<Scalar> G; // N x M, BS -> RIS
    CMatrix<Scalar> H; // N x K, column k is h_k
};

/// LoS / scattering weights sqrt(K/(K+1)) and sqrt(1/(K+1)); K = inf keeps only LoS.
template <typename Scalar>
std::pair<Scalar, Scalar> rician_weights(double factor)
{
    if (std::isinf(factor))
        return {Scalar(1), Scalar(0)};
    return {static_cast<Scalar>(std::sqrt(factor / (factor + 1.0))), static_cast<Scalar>(std::sqrt(1.0 / (factor + 1.0)))};
}

/// Draws Rician channel realizations for a fixed scenario. LoS parts are computed once;
/// sample() is const and may be called concurrently with distinct generators.
template <typename Scalar = double>
class ChannelSampler
{
public:
    ChannelSampler(const ScenarioConfig &config, const LinkGains &gains)
        : los_(los_components<Scalar>(config))
    {
        if (gains.beta.size() != config.users)
            throw Error(ErrorKind::invalid_dimension, "LinkGains has the wrong number of users");
        const auto sqrt_eps = static_cast<Scalar>(std::sqrt(gains.epsilon));
        const auto [g_los, g_nlos] = rician_weights<Scalar>(config.rician_bs_ris);
        g_los_ = sqrt_eps * g_los;
        g_nlos_ = sqrt_eps * g_nlos;
        h_los_.resize(config.users);
        h_nlos_.resize(config.users);
        for (int k = 0; k < config.users; ++k)
        {
            const auto sqrt_beta = static_cast<Scalar>(std::sqrt(gains.beta(k)));
            const auto [l, s] = rician_weights<Scalar>(config.rician_user(k));
            h_los_(k) = sqrt_beta * l;
            h_nlos_(k) = sqrt_beta * s;
        }
        // scaled LoS parts reused by every draw
        g_mean_ = los_.G_bar * Complex<Scalar>(g_los_);
        h_mean_ = los_.H_bar * h_los_.asDiagonal();
    }

    ChannelRealization<Scalar> sample(Rng &rng) const
    {
        ChannelRealization<Scalar> out;
        out.G.resize(g_mean_.rows(), g_mean_.cols());
        out.H.resize(h_mean_.rows(), h_mean_.cols());
        fill_complex_normal(out.G, rng);
        fill_complex_normal(out.H, rng);
        out.G = g_mean_ + out.G * Complex<Scalar>(g_nlos_);
        out.H = h_mean_ + out.H * h_nlos_.asDiagonal();
        return out;
    }

    const LosComponents<Scalar> &los() const { return los_; }

private:
    LosComponents<Scalar> los_;
    Scalar g_los_{}, g_nlos_{};
    RVector<Scalar> h_los_, h_nlos_;
    CMatrix<Scalar> g_mean_, h_mean_;
};

/// G = sqrt(eps)(sqrt(K_G/(K_G+1)) G_bar + sqrt(1/(K_G+1)) G_tilde), h_k likewise with K_k, beta_k.
template <typename Scalar = double>
ChannelRealization<Scalar> sample_channel(const ScenarioConfig &config, const LinkGains &gains, Rng &rng)
{
    return ChannelSampler<Scalar>(config, gains).sample(rng);
}

/// F = H^H Phi G (K x M); row k is f_k^H = h_k^H Phi G.
template <typename Scalar = double>
CMatrix<Scalar> cascaded_channel(const ChannelRealization<Scalar> &channel, const PhaseVector &phases)
{
    if (phases.size() != channel.G.rows() || channel.H.rows() != channel.G.rows())
        throw Error(ErrorKind::invalid_dimension,
                    "cascaded_channel: phase vector has " + std::to_string(phases.size()) + " entries, channel has " +
                        std::to_string(channel.G.rows()) + " RIS elements");
    return channel.H.adjoint() * phases.reflection<Scalar>().asDiagonal() * channel.G;
}

} // namespace rislab

#endif // RISLAB_GEOMETRY_HPP
