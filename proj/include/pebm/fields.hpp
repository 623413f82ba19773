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

/// @file fields.hpp
/// @brief Prognostic state and the spatial operators acting on it.
///
/// Vertical velocity lives on the nz + 1 cell faces (face f at z = f dz);
/// everything else lives at cell centers. The surface temperature rho is an
/// independent unknown; the interior temperature sees it as a Dirichlet
/// value through the top ghost cell T_ghost = 2 rho - T_{nz-1}.

#pragma once

#include "pebm/grid.hpp"

namespace pebm {

struct VectorField {
  Field x;
  Field y;

  static VectorField volume(const Grid& g) { return {Field::volume(g), Field::volume(g)}; }
  static VectorField surface(const Grid& g) { return {Field::surface(g), Field::surface(g)}; }
};

/// Horizontal velocity v, interior temperature T, surface temperature rho.
struct State {
  VectorField v;
  Field T;
  Field rho;
  double t = 0.0;

  static State zero(const Grid& g, double t = 0.0) {
    return {VectorField::volume(g), Field::volume(g), Field::surface(g), t};
  }
};

/// Diagnostic quantities reconstructed from a State.
struct DerivedFields {
  Field w;      // faces, w(z=0) = 0
  Field theta;  // integral of T from 0 to z_k
  Field p_s;    // surface pressure, (0,0) mode pinned to zero
};

/// theta(., z_k) = int_0^{z_k} T dxi by the midpoint rule.
Field vertical_integral(const Grid& g, const Field& T);

/// (1/nz) sum_k f(., z_k); returns a single-level field.
Field vertical_average(const Grid& g, const Field& f);
VectorField vertical_average(const Grid& g, const VectorField& v);

/// Spectral horizontal divergence, level by level.
Field divergence_h(const Grid& g, const VectorField& v, Exec exec = Exec::Parallel);

/// w on faces: w_0 = 0, w_{k+1} = w_k - dz div_H v_k.
Field compute_w(const Grid& g, const VectorField& v, Exec exec = Exec::Parallel);

/// Removes the z-independent gradient part grad_H q with Delta_H q = div_H vbar,
/// leaving div_H vbar = 0. The (0,0) mode of q is zero. When `potential`
/// is given it receives q.
VectorField project_barotropic(const Grid& g, const VectorField& v, Field* potential = nullptr,
                               Exec exec = Exec::Parallel);

/// Delta T with homogeneous Neumann at z = 0 and the Dirichlet trace rho at z = 1.
Field laplacian_T(const Grid& g, const Field& T, const Field& rho, Exec exec = Exec::Parallel);

/// (dT/dz)|_{z=1} from the one-sided second-order stencil
/// (8 rho - 9 T_{nz-1} + T_{nz-2}) / (3 dz).
Field surface_flux(const Grid& g, const Field& T, const Field& rho);

/// Two-point flux 2 (rho - T_{nz-1}) / dz through the top half cell. This is
/// the flux implied by the ghost closure of laplacian_T and the one the
/// time stepper couples into the surface equation.
Field interface_flux(const Grid& g, const Field& T, const Field& rho);

/// Skew-symmetric momentum advection v.grad_H v + w dv/dz.
/// With `dealias` the inputs and the result are projected onto the 2/3-rule
/// modes; the discrete identity <advection_v(v, w), v> = 0 holds either way.
VectorField advection_v(const Grid& g, const VectorField& v, const Field& w, bool dealias,
                        Exec exec = Exec::Parallel);

/// Skew-symmetric heat advection u.grad T.
Field advection_T(const Grid& g, const VectorField& v, const Field& w, const Field& T, bool dealias,
                  Exec exec = Exec::Parallel);

/// Skew-symmetric surface advection vbar.grad_H rho.
Field advection_rho(const Grid& g, const VectorField& vbar, const Field& rho, bool dealias,
                    Exec exec = Exec::Parallel);

/// grad_H of a level-stack, returned as a vector field with the same levels.
VectorField gradient_h(const Grid& g, const Field& f, Exec exec = Exec::Parallel);

}  // namespace pebm
