/// @file studies.hpp
/// @brief Verification, epsilon sweep and convergence drivers behind the CLI.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mvsim/config.hpp"

namespace mvsim {

struct CheckLine {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct StudyReport {
  std::vector<CheckLine> checks;
  bool pass() const;
  /// One `PASS|FAIL name value=... threshold=... detail` line per check.
  void print(std::ostream& os) const;
};

/// Smooth unit field used by the form-equivalence check.
Vec3Field smooth_unit_field(const Grid& g);

/// LLG form equivalence (max form-2 residual <= 200 h^2 with Mdot from form 1)
/// and transport vs characteristics (max gap <= 10 (dt + h) plus the u = 0
/// case, which must be exact). `refine` repeats both on the doubled grid
/// and requires each residual to shrink by at least 3.
StudyReport run_verification(const RunConfig& c, bool refine);

struct SweepRow {
  double eps = 0.0;
  double defect_l2_sup = 0.0;  ///< sup_t || |M|^2 - 1 ||
  double defect_st = 0.0;      ///< (int_0^T || |M|^2 - 1 ||^2 dt)^(1/2)
  double energy_final = 0.0;
  double proxy = 0.0;  ///< sup_t defect gap to the previous row, NaN for the first
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double slope = 0.0;     ///< NaN when the eps set does not allow a fit
  double slope_st = 0.0;  ///< same fit for the space-time defect
};

/// One run per eps with a common dt (params.dt, or the stable step of the
/// smallest eps). Rows are appended to `<out_dir>/sweep.csv` as runs finish,
/// so a failing run leaves the completed rows on disk.
SweepResult sweep(const RunConfig& c, const std::vector<double>& eps_list, std::ostream* log = nullptr);

struct OrderStudy {
  std::string equation;
  std::string kind;  ///< space or time
  std::vector<double> sizes;
  std::vector<double> errors;
  double order = 0.0;  ///< from the two finest levels
  double threshold = 0.0;
  bool pass() const { return order >= threshold; }
};

/// Momentum (manufactured solution, space and time), transport (exp(tA)) and
/// LLG (uniform precession vs RK4). Writes `<out_dir>/convergence.csv`.
std::vector<OrderStudy> convergence_study(const RunConfig& c, int levels, std::ostream* log = nullptr);

}  // namespace mvsim
