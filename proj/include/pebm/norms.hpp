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

#include "pebm/fields.hpp"

namespace pebm {

// Discrete norms use midpoint quadrature: weights dx dy dz for volume
// fields and dx dy for single-level (surface) fields. Gradient energies are
// the quadratic forms of the discrete operators the stepper inverts, so the
// discrete energy balance closes exactly.

double inner(const Grid& g, const Field& a, const Field& b);
double inner(const Grid& g, const VectorField& a, const VectorField& b);
double l2_sq(const Grid& g, const Field& f);
double l2_sq(const Grid& g, const VectorField& v);
double max_abs(const Field& f);
/// sum |f|^5 dx dy (surface) -> ||rho||_5^5
double l5_pow5(const Grid& g, const Field& rho);
double l1(const Grid& g, const Field& f);

/// ||grad v||^2: spectral horizontal part plus Neumann vertical differences.
double grad_sq_v(const Grid& g, const VectorField& v);
/// ||grad T||^2 including the top half cell between T_{nz-1} and rho.
double grad_sq_T(const Grid& g, const Field& T, const Field& rho);
/// ||grad_H rho||^2.
double grad_sq_rho(const Grid& g, const Field& rho);

/// Squared X0-norm ||v||^2 + ||T||^2 + ||rho||^2.
double x0_sq(const Grid& g, const State& s);
double x0_norm(const Grid& g, const State& s);
/// ||a - b||_{X0}
double x0_distance(const Grid& g, const State& a, const State& b);

/// Elementwise state arithmetic (time is left untouched).
void axpy(double a, const State& x, State& y);
State scaled(const State& s, double a);

/// Number of doubles in a flattened state and (un)flattening helpers.
std::size_t flat_size(const Grid& g);
void flatten(const State& s, std::vector<double>& out);
void unflatten(const std::vector<double>& in, State& s);

}  // namespace pebm
