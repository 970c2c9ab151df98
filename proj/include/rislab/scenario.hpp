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

#ifndef RISLAB_SCENARIO_HPP
#define RISLAB_SCENARIO_HPP

#include "rislab/random.hpp"
#include "rislab/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rislab
{

/// DAC resolution in bits; `infinite()` is the perfect converter.
class DacResolution
{
public:
    static DacResolution bits(int b);
    static DacResolution infinite() { return DacResolution(); }

    bool is_infinite() const { return !bits_; }
    /// Only valid when !is_infinite().
    int bits() const { return *bits_; }
    std::string to_string() const;

    friend bool operator==(const DacResolution &, const DacResolution &) = default;

private:
    DacResolution() = default;
    std::optional<int> bits_;
};

/// RIS phase constraint: the full circle, or a uniform 2^B point grid.
class PhaseResolution
{
public:
    static PhaseResolution bits(int b);
    static PhaseResolution continuous() { return PhaseResolution(); }

    bool is_continuous() const { return !bits_; }
    int bits() const { return *bits_; }
    std::string to_string() const;

    friend bool operator==(const PhaseResolution &, const PhaseResolution &) = default;

private:
    PhaseResolution() = default;
    std::optional<int> bits_;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Physical and system parameters of one scenario. Powers are linear (W), angles in radians.
struct ScenarioConfig
{
    int bs_antennas = 64;   // M
    int ris_elements = 16;  // N
    int users = 6;          // K

    double power_w = 1.0;           // P, 30 dBm
    double noise_w = 3.981071705534973e-14; // sigma^2, -104 dBm

    double rician_bs_ris = 1.0;          // K_G
    std::vector<double> rician_users;    // K_k, one per user

    double aoa_ris = 0.0;                // phi_r
    double aod_bs = 0.0;                 // phi_t
    std::vector<double> user_aods;       // phi_kt, drawn by resolve_user_aods() when empty
    double d_over_lambda = 0.5;

    Point2 bs_position{0.0, 0.0};
    Point2 ris_position{5.0, 2.0};
    Point2 user_center{400.0, 0.0};
    double user_radius = 4.0;

    double pl0_db = -30.0;
    double d0 = 1.0;
    double kappa_bs_ris = 2.8;
    double kappa_ris_user = 2.8;

    DacResolution dac = DacResolution::bits(1);
    PhaseResolution ris_phase = PhaseResolution::bits(2);

    std::uint64_t seed = 1;

    /// Default simulation scenario: M=64, N=16, K=6, P=30 dBm, sigma^2=-104 dBm,
    /// K_G=1, K_k=10, b=1, B=2. User AoDs are left empty.
    static ScenarioConfig defaults();

    /// Throws Error(config_error) naming the first violated invariant.
    void validate() const;

    double rician_user(int k) const { return rician_users[static_cast<std::size_t>(k)]; }
};

/// Default AoA/AoD: the direction of the BS->RIS segment for the default geometry.
double default_link_angle();

/// Draws phi_kt uniformly on [0, 2*pi) from the user-angle substream when not already
/// set, resizes per-user Rician factors to K, and wraps all angles into [0, 2*pi).
ScenarioConfig resolve_scenario(ScenarioConfig config, std::uint64_t drop = 0);

} // namespace rislab

#endif // RISLAB_SCENARIO_HPP
