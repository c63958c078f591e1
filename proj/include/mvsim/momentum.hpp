/// @file momentum.hpp
/// @brief Stresses, body forces and the IMEX velocity step.

#pragma once

#include "mvsim/fields.hpp"
#include "mvsim/incompressible.hpp"

namespace mvsim {

/// F F^T per cell.
MatrixField elastic_stress(const MatrixField& F);

/// (grad M)^T grad M per cell, entries sum_k d_i M_k d_j M_k (centered differences).
MatrixField magnetic_stress(const Vec3Field& M);

/// sum_k d_j H_k M_k per cell.
Vec2Field kelvin_force(const Vec3Field& H, const Vec3Field& M);

/// Averages a cell vector field to interior faces; wall faces are zero.
VelocityField cell_to_faces(const Vec2Field& f);

/// 2 laplacian_N(M) - eps^-1 (|M|^2 - 1) M.
Vec3Field exchange_penalty_field(const Vec3Field& M, double eps);

/// Face force f with <f, u> = -1/2 <G0, advect(u, M, scheme)> exactly, where
/// G0 = exchange_penalty_field(M, eps). The upwind part depends on sign(u).
VelocityField magnetic_force_consistent(const Vec3Field& M, const VelocityField& u, double eps,
                                        AdvectionScheme scheme);

/// -divergence_matrix(magnetic_stress(M)).
VelocityField magnetic_force_stress(const Vec3Field& M);

/// Magnetic plus Kelvin body force on faces, selected by params.magnetic_force.
VelocityField magnetic_body_force(const Vec3Field& M, const Vec3Field& H, const VelocityField& u,
                                  const SimParams& params);

struct MomentumResult {
  VelocityField u;       ///< projected velocity
  ScalarField p;         ///< phi / dt
  VelocityField u_star;  ///< before projection
  SolveStats helmholtz;
  SolveStats poisson;
};

/// u* = helmholtz_solve(u + dt (-advect(u, u) + div(F F^T) + body), a = dt nu,
/// b = dt eps [hyperviscosity_on]); (u+, phi) = project_div_free(u*).
/// Throws ConfigError if dt > h / max|u|.
MomentumResult momentum_step(const VelocityField& u, const MatrixField& F, const VelocityField& body, double dt,
                             const SimParams& params);

}  // namespace mvsim
