// Copyright 2026 The robustdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROBUSTDIST_PARALLEL_HPP_
#define ROBUSTDIST_PARALLEL_HPP_

#include <omp.h>

#include <exception>
#include <mutex>
#include <utility>

namespace robustdist {

// Serial reference for the trial loop below. Kept separate so tests and the
// benchmark can compare the two paths directly.
template <typename Fn>
void run_indexed_serial(long count, Fn&& fn) {
  for (long i = 0; i < count; ++i) fn(i);
}

// OpenMP trial loop. Each index must write only its own output slot and draw
// only from seeds derived from the index; under that contract the result is
// identical for every worker count and schedule, including the serial path.
// The first exception thrown by any trial is rethrown after the loop.
template <typename Fn>
void run_indexed(long count, int workers, Fn&& fn) {
  if (workers == 1 || count <= 1) {
    run_indexed_serial(count, std::forward<Fn>(fn));
    return;
  }
  std::exception_ptr failure = nullptr;
  std::mutex failure_mutex;
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads) default(shared)
  for (long i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace robustdist

#endif  // ROBUSTDIST_PARALLEL_HPP_
