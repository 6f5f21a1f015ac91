/*
 * Copyright 2026 The sphdesign Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstddef>
#include <functional>

namespace sphd {

/// Process-wide cap on worker threads. 0 means "use hardware concurrency".
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(begin, end, block) over a fixed partition of [0, n) into
/// contiguous blocks. The partition depends only on n and the block count,
/// so callers that reduce per-block results in block order get the same
/// answer on every run.
void parallel_blocks(std::size_t n, std::size_t blocks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace sphd
