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

#include "rislab/scenario.hpp"

#include "rislab/error.hpp"

#include <cmath>
#include <sstream>

namespace rislab
{

namespace
{

[[noreturn]] void reject(const std::string &message)
{
    throw Error(ErrorKind::config_error, message);
}

bool is_angle(double a)
{
    return std::isfinite(a);
}

} // namespace

DacResolution DacResolution::bits(int b)
{
    if (b < 1)
        throw Error(ErrorKind::domain_error, "DAC resolution must be >= 1 bit, got " + std::to_string(b));
    DacResolution r;
    r.bits_ = b;
    return r;
}

std::string DacResolution::to_string() const
{
    return is_infinite() ? std::string("inf") : std::to_string(*bits_);
}

PhaseResolution PhaseResolution::bits(int b)
{
    if (b < 1)
        throw Error(ErrorKind::domain_error, "RIS phase resolution must be >= 1 bit, got " + std::to_string(b));
    PhaseResolution r;
    r.bits_ = b;
    return r;
}

std::string PhaseResolution::to_string() const
{
    return is_continuous() ? std::string("continuous") : std::to_string(*bits_);
}

double dbm_to_watts(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts)
{
    return 10.0 * std::log10(watts) + 30.0;
}

double default_link_angle()
{
    return std::atan2(2.0, 5.0);
}

ScenarioConfig ScenarioConfig::defaults()
{
    ScenarioConfig c;
    c.power_w = dbm_to_watts(30.0);
    c.noise_w = dbm_to_watts(-104.0);
    c.rician_users.assign(static_cast<std::size_t>(c.users), 10.0);
    c.aoa_ris = default_link_angle();
    c.aod_bs = default_link_angle();
    return c;
}

void ScenarioConfig::validate() const
{
    if (bs_antennas < 1)
        reject("M must be >= 1 (got " + std::to_string(bs_antennas) + ")");
    if (ris_elements < 1)
        reject("N must be >= 1 (got " + std::to_string(ris_elements) + ")");
    if (users < 1)
        reject("K must be >= 1 (got " + std::to_string(users) + ")");
    if (!(power_w > 0.0) || !std::isfinite(power_w))
        reject("P must be > 0");
    if (!(noise_w > 0.0) || !std::isfinite(noise_w))
        reject("sigma2 must be > 0");
    if (!(rician_bs_ris >= 0.0))
        reject("K_G must be >= 0");
    if (rician_users.size() != static_cast<std::size_t>(users))
        reject("K_k must have exactly K entries");
    for (double kk : rician_users)
        if (!(kk >= 0.0))
            reject("every K_k must be >= 0");
    if (!(d_over_lambda > 0.0) || !std::isfinite(d_over_lambda))
        reject("d_over_lambda must be > 0");
    if (!is_angle(aoa_ris) || !is_angle(aod_bs))
        reject("phi_r and phi_t must be finite");
    if (!user_aods.empty() && user_aods.size() != static_cast<std::size_t>(users))
        reject("phi_kt must have exactly K entries");
    for (double a : user_aods)
        if (!is_angle(a))
            reject("phi_kt entries must be finite");
    if (!(user_radius >= 0.0))
        reject("user_radius must be >= 0");
    if (!(d0 > 0.0))
        reject("d0 must be > 0");
    if (!std::isfinite(pl0_db) || !std::isfinite(kappa_bs_ris) || !std::isfinite(kappa_ris_user))
        reject("path-loss parameters must be finite");
}

ScenarioConfig resolve_scenario(ScenarioConfig config, std::uint64_t drop)
{
    if (config.rician_users.size() == 1 && config.users > 1)
        config.rician_users.assign(static_cast<std::size_t>(config.users), config.rician_users.front());
    if (config.user_aods.empty())
    {
        Rng rng = substream(config.seed, Stream::user_angles, drop);
        config.user_aods.resize(static_cast<std::size_t>(config.users));
        for (double &a : config.user_aods)
            a = uniform_real(rng, 0.0, two_pi<double>);
    }
    config.validate();
    config.aoa_ris = wrap_angle(config.aoa_ris);
    config.aod_bs = wrap_angle(config.aod_bs);
    for (double &a : config.user_aods)
        a = wrap_angle(a);
    return config;
}

} // namespace rislab
