// Copyright 2026 The vqtts-kit Authors
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

#ifndef VQTTS_THREADING_H_
#define VQTTS_THREADING_H_

#include <cstddef>
#include <functional>

namespace vqtts {
namespace threading {

// Worker count: hardware concurrency, capped by the VQTTS_KIT_THREADS
// environment variable when set. Always >= 1.
int thread_count();

// Runs fn(i) for i in [0, n). Each call must be independent and write
// only to its own output slot; under that contract results do not depend
// on the worker count or on scheduling. Exceptions from fn are collected
// and the first (by index) is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace threading
}  // namespace vqtts

#endif  // VQTTS_THREADING_H_
