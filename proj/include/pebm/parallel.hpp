/* Copyright 2026 The PEBM Authors
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
 *
 */

#pragma once

#include <cstddef>

namespace pebm {

/// Loop driver for the data-parallel kernels. `Serial` is the reference
/// path; `Parallel` distributes independent iterations over OpenMP threads.
/// Every kernel body is written so that the two produce bitwise identical
/// results (no cross-iteration reductions).
enum class Exec { Serial, Parallel };

template <class Body>
inline void for_range(Exec exec, std::ptrdiff_t n, Body&& body) {
  if (exec == Exec::Parallel && n > 1) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  }
}

/// Caps the OpenMP team size; `n <= 0` leaves the runtime default.
void set_max_threads(int n);
int max_threads();

}  // namespace pebm
