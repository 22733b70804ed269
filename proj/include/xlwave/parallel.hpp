// SPDX-License-Identifier: Apache-2.0
//
// xlwave: near-field / far-field demarcation toolkit for extremely large arrays
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

#ifndef XLWAVE_PARALLEL_HPP
#define XLWAVE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace xlwave
{
    // Worker count: XLWAVE_THREADS if set to a positive integer, else hardware concurrency.
    inline std::size_t thread_count()
    {
        if (const char *env = std::getenv("XLWAVE_THREADS"))
        {
            char *end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end != env && v > 0)
                return std::size_t(v);
        }
        return std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }

    // Evaluates fn(i) for i in [0, n) and returns the results in index order. Work is
    // handed out dynamically, so the output never depends on the schedule. The first
    // exception thrown by any task is rethrown on the calling thread.
    template <class Fn>
    auto parallel_map(std::size_t n, Fn &&fn, std::size_t threads = 0)
    {
        using Result = std::decay_t<std::invoke_result_t<Fn &, std::size_t>>;
        std::vector<Result> out(n);
        if (threads == 0)
            threads = thread_count();
        threads = std::min(threads, n);

        if (threads <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                out[i] = fn(i);
            return out;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&]
        {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    out[i] = fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = n;
                }
            }
        };

        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        pool.clear(); // joins

        if (failure)
            std::rethrow_exception(failure);
        return out;
    }
}

#endif
