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

#include <iosfwd>

namespace pebm {

enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitConfig = 2 };

/// Entry point of the `pebm` command line tool:
///
///   pebm <simulate|find-periodic|steady|check-energy|ws-uniqueness>
///        --config PATH [--out DIR] [--resume SNAPSHOT] [--seed N] [--quiet]
///
/// Returns 0 on success, 1 on numerical failure (blow-up, step guard,
/// non-convergence, failed check) and 2 on configuration or input errors.
/// PEBM_THREADS caps the OpenMP team size.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pebm
