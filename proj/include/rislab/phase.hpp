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

#ifndef RISLAB_PHASE_HPP
#define RISLAB_PHASE_HPP

#include "rislab/error.hpp"
#include "rislab/scenario.hpp"
#include "rislab/types.hpp"

#include <cmath>

namespace rislab
{

/// RIS phase shifts theta_n in [0, 2*pi) plus the constraint regime they satisfy.
struct PhaseVector
{
    Eigen::VectorXd theta;
    PhaseResolution regime = PhaseResolution::continuous();

    Index size() const { return theta.size(); }

    /// Wraps every entry into [0, 2*pi); the regime is continuous.
    static PhaseVector continuous(const Eigen::VectorXd &theta);
    static PhaseVector zeros(Index n) { return continuous(Eigen::VectorXd::Zero(n)); }

    /// Diagonal of Phi: exp(j*theta_n).
    template <typename Scalar = double>
    CVector<Scalar> reflection() const
    {
        CVector<Scalar> d(theta.size());
        for (Index n = 0; n < theta.size(); ++n)
            d(n) = std::polar(Scalar(1), static_cast<Scalar>(theta(n)));
        return d;
    }
};

inline PhaseVector PhaseVector::continuous(const Eigen::VectorXd &theta)
{
    PhaseVector p;
    p.theta = theta.unaryExpr([](double a) { return wrap_angle(a); });
    return p;
}

/// Maps every phase to the nearest point of {2*pi*m / 2^B}, circular distance,
/// ties resolved toward the smaller grid value.
inline PhaseVector project_discrete(const PhaseVector &phases, int bits)
{
    if (bits < 1)
        throw Error(ErrorKind::domain_error, "phase quantization needs B >= 1");
    const long levels = 1L << bits;
    const double step = two_pi<double> / static_cast<double>(levels);

    PhaseVector out;
    out.regime = PhaseResolution::bits(bits);
    out.theta.resize(phases.size());
    for (Index n = 0; n < phases.size(); ++n)
    {
        const double q = wrap_angle(phases.theta(n)) / step;
        long lower = static_cast<long>(std::floor(q));
        const double frac = q - static_cast<double>(lower);
        lower %= levels;
        const long upper = (lower + 1) % levels;
        long pick = lower;
        if (frac > 0.5)
            pick = upper;
        else if (frac == 0.5)
            pick = std::min(lower, upper);
        out.theta(n) = step * static_cast<double>(pick);
    }
    return out;
}

/// True when every entry lies exactly on the 2^B grid.
inline bool on_grid(const PhaseVector &phases, int bits)
{
    const double step = two_pi<double> / static_cast<double>(1L << bits);
    for (Index n = 0; n < phases.size(); ++n)
    {
        const double k = std::round(phases.theta(n) / step);
        if (k < 0.0 || k >= static_cast<double>(1L << bits) || std::abs(phases.theta(n) - step * k) > 1e-12)
            return false;
    }
    return true;
}

} // namespace rislab

#endif // RISLAB_PHASE_HPP
