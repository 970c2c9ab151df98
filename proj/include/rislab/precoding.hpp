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

#ifndef RISLAB_PRECODING_HPP
#define RISLAB_PRECODING_HPP

#include "rislab/error.hpp"
#include "rislab/random.hpp"
#include "rislab/scenario.hpp"
#include "rislab/types.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace rislab
{

/// Inverse signal-to-quantization-noise ratio of a b-bit converter.
/// Tabulated for b <= 5, (sqrt(3)*pi/2) * 2^-2b above that, 0 for a perfect DAC.
inline double rho_of_bits(int bits)
{
    static constexpr std::array<double, 5> table{0.3646, 0.1175, 0.03454, 0.009497, 0.002499};
    if (bits < 1)
        throw Error(ErrorKind::domain_error, "quantization bits must be >= 1, got " + std::to_string(bits));
    if (bits <= 5)
        return table[static_cast<std::size_t>(bits - 1)];
    return std::sqrt(3.0) * std::numbers::pi / 2.0 * std::pow(2.0, -2.0 * bits);
}

inline double rho_of_bits(const DacResolution &dac)
{
    return dac.is_infinite() ? 0.0 : rho_of_bits(dac.bits());
}

/// Additive quantization noise model of a DAC bank: x_q = alpha*x + n_q.
struct DacModel
{
    DacResolution resolution = DacResolution::infinite();
    double rho = 0.0;
    double alpha = 1.0;

    static DacModel from(const DacResolution &resolution)
    {
        DacModel m;
        m.resolution = resolution;
        m.rho = rho_of_bits(resolution);
        m.alpha = 1.0 - m.rho;
        return m;
    }

    /// alpha(1 - alpha); exactly zero for a perfect DAC.
    double distortion_gain() const { return alpha * (1.0 - alpha); }
};

template <typename Scalar = double>
struct Precoder
{
    CMatrix<Scalar> W;  // M x K, column k proportional to f_k
    Scalar trace_norm{}; // Tr(F^H F)
};

/// Maximum ratio transmission: W = F^H / sqrt(Tr(F^H F)).
template <typename Derived>
auto mrt_precoder(const Eigen::MatrixBase<Derived> &F)
{
    using Scalar = typename Derived::Scalar::value_type;
    Precoder<Scalar> p;
    p.trace_norm = F.squaredNorm();
    if (!(p.trace_norm > Scalar(0)))
        throw Error(ErrorKind::degenerate_channel, "MRT precoder of an all-zero channel");
    p.W = F.adjoint() / std::sqrt(p.trace_norm);
    return p;
}

/// Diagonal of R_nq = alpha(1-alpha) diag(W W^H): entry m is alpha(1-alpha) sum_k |W_mk|^2.
template <typename Derived>
auto quantization_noise_covariance(const Eigen::MatrixBase<Derived> &W, const DacModel &dac)
{
    using Scalar = typename Derived::Scalar::value_type;
    RVector<Scalar> diag = W.rowwise().squaredNorm();
    return RVector<Scalar>(diag * static_cast<Scalar>(dac.distortion_gain()));
}

/// Returns alpha*x + n_q with n_q ~ CN(0, diag(noise_diag)) drawn independently of x.
template <typename Derived, typename DiagDerived>
auto apply_aqnm(const Eigen::MatrixBase<Derived> &x, const DacModel &dac,
                const Eigen::MatrixBase<DiagDerived> &noise_diag, Rng &rng)
{
    using Scalar = typename Derived::Scalar::value_type;
    if (x.size() != noise_diag.size())
        throw Error(ErrorKind::invalid_dimension, "apply_aqnm: signal and covariance sizes differ");
    if ((noise_diag.array() < Scalar(0)).any())
        throw Error(ErrorKind::invalid_covariance, "apply_aqnm: negative quantization-noise variance");
    CVector<Scalar> out = x * static_cast<Scalar>(dac.alpha);
    if (dac.resolution.is_infinite())
        return out;
    CVector<Scalar> noise(x.size());
    fill_complex_normal(noise, rng);
    out += (noise.array() * noise_diag.array().sqrt().template cast<Complex<Scalar>>()).matrix();
    return out;
}

} // namespace rislab

#endif // RISLAB_PRECODING_HPP
