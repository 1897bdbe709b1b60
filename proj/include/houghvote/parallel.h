/* Copyright 2026 The HoughVote Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef HOUGHVOTE_PARALLEL_H_
#define HOUGHVOTE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace houghvote {

// Number of worker threads to use: `requested` when positive, otherwise the
// HV_THREADS environment variable, otherwise the hardware concurrency.
int ResolveThreadCount(int requested);

// Runs body(begin, end) over contiguous chunks of [0, n) on up to `threads`
// threads. Chunk boundaries depend only on n and threads, and every index is
// visited by exactly one call.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace houghvote

#endif  // HOUGHVOTE_PARALLEL_H_
