// Copyright 2026 The lightconv Authors
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

#ifndef LIGHTCONV_PARALLEL_H_
#define LIGHTCONV_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace lightconv {

// Environment variable that overrides the worker thread count.
inline constexpr const char kThreadsEnvVar[] = "LIGHTCONV_THREADS";

// Worker threads used by ParallelFor: LIGHTCONV_THREADS when set to a
// positive integer, otherwise std::thread::hardware_concurrency().
int ThreadCount();

// Runs body(i) for i in [0, n). Iterations must be independent; callers
// reduce results by index afterwards so the outcome does not depend on the
// thread count. Nested calls run serially on the calling thread. If any
// iteration throws, the exception from the lowest failing index is rethrown
// after all workers finish.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lightconv

#endif  // LIGHTCONV_PARALLEL_H_
