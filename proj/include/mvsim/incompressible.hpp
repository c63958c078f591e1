/// @file incompressible.hpp
/// @brief Pressure Poisson solve, divergence-free projection and the implicit
/// viscous/hyperviscous velocity solve.
///
/// Two solver routes are available. `spectral` diagonalizes the separable
/// operators with exact discrete eigenbases and falls back to conjugate
/// gradients preconditioned by that solve if the residual check fails.
/// `cg` runs plain conjugate gradients.

#pragma once

#include "mvsim/fields.hpp"

namespace mvsim {

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// 10 * (nx + ny)
int default_max_iterations(const Grid& grid);

/// Solves laplacian(phi, NeumannZero) = rhs with mean(phi) = 0.
/// Throws PreconditionError when |mean(rhs)| > 1e-10 * ||rhs|| and
/// SolverError when the tolerance is not met.
ScalarField solve_poisson_neumann(const ScalarField& rhs, double tol,
                                  SolverKind kind = SolverKind::spectral,
                                  SolveStats* stats = nullptr);

struct Projection {
  VelocityField u;
  ScalarField phi;  ///< u_out = u_in - gradient_scalar(phi)
};

Projection project_div_free(const VelocityField& u, double tol,
                            SolverKind kind = SolverKind::spectral);

/// (I - a L - b L^3) u with L the clamped vector Laplacian.
VelocityField helmholtz_apply(const VelocityField& u, double a, double b);

/// Solves helmholtz_apply(u, a, b) = rhs on clamped velocities. Wall values
/// of the result are exactly zero.
VelocityField helmholtz_solve(const VelocityField& rhs, double a, double b, double tol,
                              SolverKind kind = SolverKind::spectral,
                              SolveStats* stats = nullptr);

}  // namespace mvsim
