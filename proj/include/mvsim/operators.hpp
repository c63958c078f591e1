/// @file operators.hpp
/// @brief Second-order finite-difference operators on the MAC grid.
///
/// Conventions:
///  - jacobian(u)(i, k) = d_k u_i, so the stretching source of F is J F.
///  - divergence_matrix is the exact negative adjoint of jacobian:
///    <divergence_matrix(P), w> = -<P, jacobian(w)^T> for clamped w.
///  - divergence_vector = -gradient_scalar^T and their product is the
///    Neumann Laplacian on cell fields.
///  - Cell advection is the advective form K + D, where K is the centered
///    part and D = sum of |u_f| / (2h) jumps. Central mode drops D.

#pragma once

#include "mvsim/fields.hpp"

namespace mvsim {

enum class BcMode {
  VelocityClamped,        ///< odd reflection: zero wall value
  NeumannZero,            ///< mirror reflection
  ExtrapolateFirstOrder,  ///< ghost = 2 f_0 - f_1
};

VelocityField gradient_scalar(const ScalarField& phi);
ScalarField divergence_vector(const VelocityField& u);
VelocityField divergence_matrix(const MatrixField& P);

/// 5-point Laplacian. Along a direction in which the layout is
/// cell-centered the ghost follows `mode`; along a face-normal direction
/// wall nodes are held (output 0 under VelocityClamped, mirrored otherwise).
ScalarField laplacian(const ScalarField& f, BcMode mode);
VelocityField laplacian(const VelocityField& u);
template <std::size_t N>
CellVectorField<N> laplacian(const CellVectorField<N>& f, BcMode mode) {
  CellVectorField<N> out;
  for (std::size_t k = 0; k < N; ++k) out.c[k] = laplacian(f.c[k], mode);
  return out;
}
Vec3Field laplacian(const Vec3Field& f, BcMode mode);
MatrixField laplacian(const MatrixField& f, BcMode mode);

/// Nested laplacian applied three times with clamped ghosts re-imposed.
/// Negative semidefinite: <trilaplacian(u), u> <= 0.
VelocityField trilaplacian(const VelocityField& u);

MatrixField jacobian(const VelocityField& u);

/// Face-to-cell averages of the two velocity components.
Vec2Field cell_velocity(const VelocityField& u);

/// (u . grad) f for a cell-centered f.
ScalarField advect(const VelocityField& u, const ScalarField& f, AdvectionScheme scheme);
Vec3Field advect(const VelocityField& u, const Vec3Field& f, AdvectionScheme scheme);
MatrixField advect(const VelocityField& u, const MatrixField& f, AdvectionScheme scheme);
/// (a . grad) w on the staggered layout, a being the advecting velocity.
VelocityField advect(const VelocityField& a, const VelocityField& w, AdvectionScheme scheme);

/// Centered first derivative of a cell field along axis (0 = x, 1 = y),
/// with mirror ghosts. This is minus the transpose of the odd-ghost variant.
ScalarField diff_centered(const ScalarField& f, int axis);

/// Face-difference energy sum_faces |df/h|^2 * vol, equal to <-laplacian_N f, f>.
double dirichlet_form(const ScalarField& f);

}  // namespace mvsim
