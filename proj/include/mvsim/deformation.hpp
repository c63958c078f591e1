/// @file deformation.hpp
/// @brief Transport of the deformation gradient F, the characteristics
/// oracle, divergence monitoring and mollified initial data.

#pragma once

#include <functional>

#include "mvsim/fields.hpp"

namespace mvsim {


/// Largest dt accepted by transport_step: cfl * min(h / max|u|, 1 / (2 m (hx^-2 + hy^-2))).
double transport_stable_dt(const Grid& grid, double umax, double f_diffusion, double cfl);

/// F+ = F + dt (-(u . grad) F + J(u) F + f_diffusion laplacian_N(F)).
/// Throws ConfigError if dt exceeds transport_stable_dt(..., 1).
MatrixField transport_step(const MatrixField& F, const VelocityField& u, double dt, double f_diffusion,
                           AdvectionScheme scheme = AdvectionScheme::central);

/// A velocity field that can be evaluated anywhere: value and gradient
/// grad(i, k) = d_k u_i.
struct AnalyticVelocity {
  std::function<Vec2(double, const Vec2&)> u;
  std::function<Mat2(double, const Vec2&)> grad;
};

using MatrixSampler = std::function<Mat2(const Vec2&)>;

/// Steady compactly supported swirl with stream function
/// psi = a (1 - r^2/R^2)^4 for r < R; u = (d_y psi, -d_x psi). Rigid rotation near c.
struct CompactVortex {
  Vec2 center{0.5, 0.5};
  double radius = 0.4;
  double amplitude = 0.05;

  double psi(const Vec2& x) const;
  Vec2 gradient_psi(const Vec2& x) const;
  Mat2 hessian_psi(const Vec2& x) const;
  Vec2 velocity(const Vec2& x) const;
  Mat2 velocity_gradient(const Vec2& x) const;
  AnalyticVelocity analytic() const;
};

struct CharacteristicPoint {
  Mat2 F;
  bool exited = false;
};

/// F(t1, x) from F(t0, .) = F0 by integrating the backward characteristic
/// dX/ds = u(s, X) together with dP/ds = -P grad u(s, X), P(t1) = I, using
/// classical RK4; then F = P(t0) F0(X(t0)). t1 < t0 is allowed.
CharacteristicPoint characteristics_point(const MatrixSampler& F0, const AnalyticVelocity& vel, const Vec2& x,
                                          double t0, double t1, int substeps, const Grid& domain);

struct CharacteristicsResult {
  MatrixField F;
  int exited = 0;  ///< number of cells whose characteristic left the domain
  std::vector<char> exited_flags;
};

/// characteristics_point at every cell center from t0 = 0 to t.
CharacteristicsResult characteristics_oracle(const Grid& grid, const MatrixSampler& F0, const AnalyticVelocity& vel,
                                             double t, int substeps);

struct DivergenceNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

DivergenceNorms div_matrix_monitor(const MatrixField& F);

/// Column s of the result is the discrete perpendicular gradient
/// (d_y phi_s, -d_x phi_s) built from diff_centered; its divergence_matrix
/// vanishes up to rounding.
MatrixField curl_columns(const ScalarField& phi0, const ScalarField& phi1);

/// Normalized bump weights exp(-1 / (1 - r^2)), r = |offset| / delta, indexed
/// by offsets in [-R, R]^2 (row-major with R = rx along x, ry along y).
struct MollifierKernel {
  int rx = 0;
  int ry = 0;
  std::vector<double> w;  ///< (2 rx + 1) * (2 ry + 1), sums to 1
  double at(int di, int dj) const { return w[static_cast<std::size_t>((di + rx) + (2 * rx + 1) * (dj + ry))]; }
};

MollifierKernel mollifier_kernel(const Grid& grid, double delta);

/// Componentwise convolution with mirror-reflected extension. If delta is
/// smaller than the grid spacing a warning is printed to stderr and F0 is
/// returned unchanged (`degenerate` set when given).
MatrixField mollify_initial(const MatrixField& F0, double delta, bool* degenerate = nullptr);

}  // namespace mvsim
