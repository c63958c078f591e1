/// @file simulation.hpp
/// @brief Time loop: M step, F step, u step, ledger, in that order.

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mvsim/config.hpp"
#include "mvsim/energetics.hpp"
#include "mvsim/fields.hpp"

namespace mvsim {

struct StepInfo {
  int step = 0;
  double dt = 0.0;
  const StateSnapshot* state = nullptr;
  const EnergyLedger* ledger = nullptr;
};

using StepObserver = std::function<void(const StepInfo&)>;

struct RunOptions {
  bool write_files = true;     ///< CSV and snapshots under out_dir
  std::ostream* log = nullptr;  ///< summary line destination
  StepObserver observer;       ///< called after step 0 and every step
  bool keep_states = false;    ///< keep the state at every CSV row
};

struct RunResult {
  StateSnapshot final_state;
  EnergyLedger ledger0;
  EnergyLedger ledger;
  std::vector<DiagnosticsRow> rows;
  std::vector<StateSnapshot> states;
  int steps = 0;
  double sphere_l2_sup = 0.0;  ///< sup over steps of || |M|^2 - 1 ||
  std::string summary;
};

/// Step size for the current state: params.dt when positive, otherwise
/// cfl_safety times the smallest stability limit of the three sub-steps.
double select_dt(const RunConfig& c, const StateSnapshot& s);

/// Step count and uniform step for a fixed params.dt: ceil(t_end / dt) steps.
int fixed_step_count(const SimParams& p);

DiagnosticsRow diagnostics_row(const StateSnapshot& s, const EnergyLedger& l);

/// Snapshot file with records u, v, p, F (4 comps), M (3 comps).
void write_state(const std::string& path, const StateSnapshot& s);
StateSnapshot read_state(const std::string& path);

/// Errors from a sub-step are rethrown with the same type, prefixed with the
/// stage name and step index. Non-finite values raise SolverError.
RunResult run_simulation(const RunConfig& c, const RunOptions& opt = {});

}  // namespace mvsim
