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

/// @file kernels.hpp
/// @brief Per-horizontal-mode vertical column kernels of the implicit step.
///
/// For each r2c mode (i, j) with horizontal symbol kappa^2 the vertical
/// operators are tridiagonal:
///
///  - velocity: L_v = -kappa^2 + D_zz with reflection (Neumann) at both ends;
///  - heat: the column (T_0 .. T_{nz-1}, rho) with L_T = -kappa^2 + D_zz,
///    Neumann at z = 0 and the top face flux F = 2 (rho - T_{nz-1}) / dz,
///    and L_rho rho = -kappa^2 rho - F.
///
/// Columns are independent; the Parallel path splits them over OpenMP
/// threads and must reproduce the Serial path bit for bit.

#pragma once

#include "pebm/grid.hpp"

namespace pebm::kernels {

/// Solves (I - alpha L_v) x = rhs in place on every column of `v`.
void solve_velocity_columns(const Grid& g, double alpha, Spectrum& v, Exec exec);

/// Solves (I - alpha L_heat) (T, rho) = rhs in place, rho being the extra
/// last unknown of each column.
void solve_heat_columns(const Grid& g, double alpha, Spectrum& T, Spectrum& rho, Exec exec);

/// out = s x + alpha L_v x
void apply_velocity_columns(const Grid& g, double s, double alpha, const Spectrum& in, Spectrum& out,
                            Exec exec);

/// (T_out, rho_out) = s (T, rho) + alpha L_heat (T, rho)
void apply_heat_columns(const Grid& g, double s, double alpha, const Spectrum& T, const Spectrum& rho,
                        Spectrum& T_out, Spectrum& rho_out, Exec exec);

/// Thomas algorithm for a tridiagonal system with real coefficients and
/// complex right-hand side; `sub[0]` and `sup[n-1]` are ignored. Returns
/// false on a zero pivot.
bool thomas(std::span<const double> sub, std::span<const double> diag, std::span<const double> sup,
            std::span<Complex> rhs);

}  // namespace pebm::kernels
