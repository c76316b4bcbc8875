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

#ifndef DISCBAL_PARALLEL_H_
#define DISCBAL_PARALLEL_H_

#include <functional>

namespace discbal {

// Number of worker threads used by ParallelFor. Defaults to the value of
// DISCBAL_THREADS, or 1 when unset.
int NumThreads();
void SetNumThreads(int threads);

// Runs body(i) for i in [0, n). Each index must write only its own output
// slot, so results never depend on the thread count. Calls made from inside
// a running ParallelFor execute serially.
void ParallelFor(int n, const std::function<void(int)>& body);

}  // namespace discbal

#endif  // DISCBAL_PARALLEL_H_
