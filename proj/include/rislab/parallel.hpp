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

#ifndef RISLAB_PARALLEL_HPP
#define RISLAB_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace rislab
{

/// Worker count to use when the caller passes 0.
inline unsigned default_workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads with static contiguous chunks.
/// fn must only write to per-index state; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn &&fn)
{
    if (workers == 0)
        workers = default_workers();
    const std::size_t used = std::min<std::size_t>(workers, n);
    if (used <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> threads;
        threads.reserve(used);
        for (std::size_t w = 0; w < used; ++w)
        {
            const std::size_t begin = n * w / used;
            const std::size_t end = n * (w + 1) / used;
            threads.emplace_back([&, begin, end] {
                try
                {
                    for (std::size_t i = begin; i < end; ++i)
                        fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

/// Pairwise summation; the result depends only on the order of `values`.
template <typename T>
T pairwise_sum(std::span<const T> values)
{
    if (values.empty())
        return T(0);
    if (values.size() <= 8)
    {
        T acc = values[0];
        for (std::size_t i = 1; i < values.size(); ++i)
            acc += values[i];
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T> &values)
{
    return pairwise_sum(std::span<const T>(values));
}

} // namespace rislab

#endif // RISLAB_PARALLEL_HPP
