/// @file energetics.hpp
/// @brief Energy components, accumulated dissipation and external work, the
/// energy-inequality residual and the eps-sweep diagnostics.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mvsim/fields.hpp"

namespace mvsim {

struct EnergyLedger {
  double t = 0.0;
  double e_kin = 0.0;       ///< 1/2 ||u||^2
  double e_elastic = 0.0;   ///< 1/2 ||F||^2
  double e_exchange = 0.0;  ///< 1/2 ||grad M||^2 (face differences)
  double e_penalty = 0.0;   ///< (4 eps)^-1 || |M|^2 - 1 ||^2
  double d_visc = 0.0;      ///< cumulative nu <-L u, u> dt
  double d_hyper = 0.0;     ///< cumulative eps <-L^3 u, u> dt
  double d_llg = 0.0;       ///< cumulative 1/2 ||dM/dt + (u . grad) M||^2 dt
  double work_field = 0.0;  ///< cumulative -<M x (M x H), V> dt
  double work_kelvin = 0.0; ///< cumulative <(grad H)^T M, u> dt
  double residual = 0.0;

  double work_ext() const { return work_field + work_kelvin; }
  /// Stored energy entering the residual: the penalty enters with half the
  /// reported e_penalty, i.e. weight (8 eps)^-1.
  double stored() const { return e_kin + e_elastic + e_exchange + 0.5 * e_penalty; }
  double dissipated() const { return d_visc + d_hyper + d_llg; }
};

/// Instantaneous components of a state; cumulative fields are zero.
EnergyLedger total_energy(const StateSnapshot& s, double eps);

/// Adds one step of dissipation and work (rectangle rule at the new state)
/// and refreshes the instantaneous components from `now`. The material
/// derivative uses the stepper's stencil: (M+ - M) / dt + advect(u, M) with
/// the old u and M. Viscous terms use u_star (the implicit solve's output,
/// before projection) when given, else now.u; none when params.couple_u is off.
EnergyLedger accumulate_dissipation(const EnergyLedger& ledger, const StateSnapshot& before,
                                    const StateSnapshot& now, double dt, const Vec3Field& H,
                                    const SimParams& params, const VelocityField* u_star = nullptr);

/// [E(t) + D(0, t)] - [E(0) + W(0, t)] with E = EnergyLedger::stored().
double energy_residual(const EnergyLedger& ledger, const EnergyLedger& ledger0);

/// Least-squares slope of log(defect) against log(eps). Throws ParameterError
/// with fewer than 3 distinct eps, non-positive entries, or a span below two decades.
double eps_sweep_order(const std::vector<std::pair<double, double>>& results);

/// Concentration proxy between consecutive eps levels:
/// | ||F_a||^2 - ||F_b||^2 | + | ||grad M_a||^2 - ||grad M_b||^2 |, per output time.
/// runs[k] is the snapshot sequence of level k. Throws ShapeError when runs
/// differ in length, grid or output times.
std::vector<std::vector<double>> defect_proxy(const std::vector<std::vector<StateSnapshot>>& runs);

/// sum_k dirichlet_form(M_k)
double grad_norm_sq(const Vec3Field& M);

struct DiagnosticsRow {
  EnergyLedger ledger;
  double max_abs_M = 0.0;
  double div_u_linf = 0.0;
  double div_F_l2 = 0.0;
};

const std::string& csv_header();
/// Values formatted with %.17g, no trailing newline.
std::string csv_row(const DiagnosticsRow& row);

}  // namespace mvsim
