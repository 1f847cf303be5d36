// Copyright 2026, The ROSS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ross {

/**
 * Runs fn(chunk, begin, end) over `jobs` contiguous chunks of [0, n).
 * Chunk boundaries depend only on n and jobs. The first exception thrown by
 * any chunk is rethrown after all threads have joined.
 */
template <class Fn>
void parallel_chunks(std::size_t n, int jobs, Fn &&fn) {
  const std::size_t k =
      std::max<std::size_t>(1, std::min<std::size_t>(jobs < 1 ? 1 : jobs, n));
  if (k == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t begin = n * c / k;
      const std::size_t end = n * (c + 1) / k;
      workers.emplace_back([&, c, begin, end] {
        try {
          fn(c, begin, end);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Number of chunks parallel_chunks will use.
inline std::size_t chunk_count(std::size_t n, int jobs) {
  return std::max<std::size_t>(1, std::min<std::size_t>(jobs < 1 ? 1 : jobs, n));
}

}  // namespace ross
