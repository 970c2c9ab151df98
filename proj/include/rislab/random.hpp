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

#ifndef RISLAB_RANDOM_HPP
#define RISLAB_RANDOM_HPP

#include "rislab/types.hpp"

#include <cstdint>
#include <random>

namespace rislab
{

using Rng = std::mt19937_64;

/// Named consumers of randomness. Each one gets its own substream of the master seed.
enum class Stream : std::uint64_t
{
    scene = 1,
    user_angles = 2,
    channel_trials = 3,
    quantization_noise = 4,
    pso = 5,
    phases = 6,
    baseline = 7,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of substream (master, stream, index). Distinct triples give unrelated seeds.
constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0)
{
    std::uint64_t h = mix64(master);
    h = mix64(h ^ static_cast<std::uint64_t>(stream));
    return mix64(h ^ index);
}

inline Rng substream(std::uint64_t master, Stream stream, std::uint64_t index = 0)
{
    return Rng(derive_seed(master, stream, index));
}

/// Fills with i.i.d. CN(0, 1) samples: real and imaginary parts are independent N(0, 1/2).
template <typename Derived>
void fill_complex_normal(Eigen::DenseBase<Derived> &out, Rng &rng)
{
    using Scalar = typename Derived::Scalar::value_type;
    std::normal_distribution<Scalar> normal(Scalar(0), std::sqrt(Scalar(0.5)));
    for (Index j = 0; j < out.cols(); ++j)
        for (Index i = 0; i < out.rows(); ++i)
        {
            const Scalar re = normal(rng);
            const Scalar im = normal(rng);
            out(i, j) = {re, im};
        }
}

template <typename Scalar>
Scalar uniform_real(Rng &rng, Scalar lo, Scalar hi)
{
    return std::uniform_real_distribution<Scalar>(lo, hi)(rng);
}

} // namespace rislab

#endif // RISLAB_RANDOM_HPP
