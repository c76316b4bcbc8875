// Copyright 2026 The discbal Authors
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

#include "discbal/parallel.h"

#include <omp.h>

#include <cstdlib>
#include <exception>
#include <mutex>

namespace discbal {
namespace {

int InitialThreads() {
  const char* env = std::getenv("DISCBAL_THREADS");
  if (env == nullptr) return 1;
  const int v = std::atoi(env);
  return v > 0 ? v : 1;
}

int& ThreadSetting() {
  static int threads = InitialThreads();
  return threads;
}

}  // namespace

int NumThreads() { return ThreadSetting(); }

void SetNumThreads(int threads) { ThreadSetting() = threads > 0 ? threads : 1; }

void ParallelFor(int n, const std::function<void(int)>& body) {
  const int threads = NumThreads();
  if (threads <= 1 || n <= 1 || omp_in_parallel()) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace discbal
