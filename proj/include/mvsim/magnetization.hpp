/// @file magnetization.hpp
/// @brief Penalized convective Landau-Lifshitz-Gilbert stepper.
///
/// Pointwise the update solves (I - m x) V = G with
///   G = 2 laplacian(M) - eps^-1 (|M|^2 - 1) M - 2 M x (M x H)
/// and m = Theta_k(|M|) M (or m = M without cut-off), then
///   M+ = M + dt (V - (u . grad) M).

#pragma once

#include "mvsim/fields.hpp"

namespace mvsim {

struct PenaltySpec {
  double eps = 1e-2;
  bool semi_implicit = false;
};

/// Solves x - m x x = g in closed form.
Vec3 skew_solve(const Vec3& m, const Vec3& g);

/// Theta_k(s) = 1 on [0,k), 2 - s/k on [k,2k), 0 beyond. Throws ParameterError for k <= 0.
double theta_cutoff(double s, double k);

/// Clamp g(s) = min(max(s,0),1) and its primitive G.
double penalty_g(double s);
double penalty_G(double s);

/// The driving field G above, cell-wise.
Vec3Field llg_rhs(const Vec3Field& M, const Vec3Field& H, const PenaltySpec& spec);

/// dt <= cfl * min(1 / (4 (hx^-2 + hy^-2)), eps / 4, h / max|u|).
double llg_stable_dt(const Grid& grid, double eps, double umax, double cfl);

struct LlgStep {
  Vec3Field M;  ///< new magnetization
  Vec3Field V;  ///< (M+ - M) / dt + (u . grad) M
};

/// One explicit step. cutoff_k = 0 disables the cut-off. Throws ConfigError
/// when dt exceeds llg_stable_dt(grid, eps, max|u|, 1).
LlgStep llg_step(const Vec3Field& M, const VelocityField& u, const Vec3Field& H, double dt,
                 const PenaltySpec& spec, double cutoff_k,
                 AdvectionScheme scheme = AdvectionScheme::upwind);

struct LlgForms {
  Vec3Field r1, r2, r3;
};

/// Residuals of the three equivalent LLG forms with W = laplacian(M) + H:
///   1: -M x W - M x (M x W)
///   2: -M x W + W + M (|grad M|^2 - M . H)
///   3: -2 M x W + M x (Mdot + (u . grad) M)
/// each minus the material derivative Mdot + (u . grad) M (central).
/// Throws PreconditionError if ||M| - 1| > 1e-8 somewhere.
LlgForms llg_form_eval(const Vec3Field& M, const VelocityField& u, const Vec3Field& H,
                       const Vec3Field& Mdot);

struct SphereDefect {
  double l2 = 0.0;              ///< || |M|^2 - 1 ||
  double maxabs = 0.0;          ///< max |M|
  double penalty_energy = 0.0;  ///< (4 eps)^-1 l2^2
};

SphereDefect sphere_defect(const Vec3Field& M, double eps);

/// Integral of G(|M|^2 - 1).
double lyapunov_G(const Vec3Field& M);

}  // namespace mvsim
