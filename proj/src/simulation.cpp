#include "mvsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "mvsim/deformation.hpp"
#include "mvsim/errors.hpp"
#include "mvsim/magnetization.hpp"
#include "mvsim/momentum.hpp"
#include "mvsim/operators.hpp"
#include "mvsim/parallel.hpp"
#include "mvsim/scenarios.hpp"

namespace mvsim {

namespace {

std::string where(const char* stage, int step) {
  return std::string("stage ") + stage + " at step " + std::to_string(step) + ": ";
}

template <class Fn>
auto staged(const char* stage, int step, Fn&& fn) {
  try {
    return fn();
  } catch (const SolverError& e) {
    throw SolverError(where(stage, step) + e.what(), e.final_residual());
  } catch (const ConfigError& e) {
    throw ConfigError(where(stage, step) + e.what());
  } catch (const ParameterError& e) {
    throw ParameterError(where(stage, step) + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(where(stage, step) + e.what());
  } catch (const PreconditionError& e) {
    throw PreconditionError(where(stage, step) + e.what());
  }
}

bool finite(const ScalarField& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](double x) { return std::isfinite(x); });
}

template <std::size_t N>
bool finite(const CellVectorField<N>& f) {
  return std::all_of(f.c.begin(), f.c.end(), [](const ScalarField& c) { return finite(c); });
}

void require_finite(bool ok, const char* stage, int step) {
  if (!ok) throw SolverError(where(stage, step) + "non-finite values", std::nan(""));
}

double umax(const VelocityField& u) { return linf_norm(u); }

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06d.txt", step);
  return buf;
}

}  // namespace

int fixed_step_count(const SimParams& p) {
  if (!(p.dt > 0.0)) throw ParameterError("fixed_step_count needs dt > 0");
  const double n = std::ceil(p.t_end / p.dt * (1.0 - 1e-12));
  if (n > 1e9) throw ConfigError("t_end / dt exceeds 1e9 steps");
  return static_cast<int>(n);
}

double select_dt(const RunConfig& c, const StateSnapshot& s) {
  const SimParams& p = c.params;
  if (p.dt > 0.0) return p.t_end / std::max(fixed_step_count(p), 1);
  const Grid& g = s.grid();
  const double um = umax(s.u);
  const double limit = std::min(llg_stable_dt(g, p.eps, um, 1.0), transport_stable_dt(g, um, p.f_diffusion, 1.0));
  return p.cfl_safety * limit;
}

DiagnosticsRow diagnostics_row(const StateSnapshot& s, const EnergyLedger& l) {
  DiagnosticsRow r;
  r.ledger = l;
  r.max_abs_M = linf_norm(s.M);
  r.div_u_linf = linf_norm(divergence_vector(s.u));
  r.div_F_l2 = div_matrix_monitor(s.F).l2;
  return r;
}

void write_state(const std::string& path, const StateSnapshot& s) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write snapshot '" + path + "'");
  const ScalarField* u[] = {&s.u.u};
  const ScalarField* v[] = {&s.u.v};
  const ScalarField* p[] = {&s.p};
  const ScalarField* F[] = {&s.F.c[0], &s.F.c[1], &s.F.c[2], &s.F.c[3]};
  const ScalarField* M[] = {&s.M.c[0], &s.M.c[1], &s.M.c[2]};
  write_snapshot(f, "u", s.t, u);
  write_snapshot(f, "v", s.t, v);
  write_snapshot(f, "p", s.t, p);
  write_snapshot(f, "F", s.t, F);
  write_snapshot(f, "M", s.t, M);
  if (!f) throw ConfigError("write failed for snapshot '" + path + "'");
}

StateSnapshot read_state(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open snapshot '" + path + "'");
  SnapshotRecord u = read_snapshot(f), v = read_snapshot(f), p = read_snapshot(f);
  SnapshotRecord F = read_snapshot(f), M = read_snapshot(f);
  if (u.name != "u" || v.name != "v" || p.name != "p" || F.name != "F" || M.name != "M" ||
      F.components.size() != 4 || M.components.size() != 3)
    throw ParameterError("snapshot '" + path + "': unexpected records");
  StateSnapshot s(p.components[0].grid());
  s.t = p.t;
  s.u.u = u.components[0];
  s.u.v = v.components[0];
  s.p = p.components[0];
  for (int k = 0; k < 4; ++k) s.F.c[k] = F.components[k];
  for (int k = 0; k < 3; ++k) s.M.c[k] = M.components[k];
  return s;
}

RunResult run_simulation(const RunConfig& c, const RunOptions& opt) {
  c.validate();
  set_num_threads(effective_threads(c));
  const SimParams& p = c.params;
  const Vec3Field H = external_field(c);

  RunResult res;
  StateSnapshot s = initial_state(c);
  res.ledger0 = total_energy(s, p.eps);
  res.ledger0.residual = 0.0;
  EnergyLedger ledger = res.ledger0;

  std::ofstream csv;
  std::filesystem::path out(c.out_dir);
  if (opt.write_files) {
    std::filesystem::create_directories(out);
    csv.open(out / c.csv_path);
    if (!csv) throw ConfigError("cannot write CSV '" + (out / c.csv_path).string() + "'");
    csv << csv_header() << '\n';
  }

  auto emit = [&] {
    const DiagnosticsRow row = diagnostics_row(s, ledger);
    res.rows.push_back(row);
    if (opt.keep_states) res.states.push_back(s);
    if (csv.is_open()) csv << csv_row(row) << '\n' << std::flush;
  };
  auto snapshot = [&](int step) {
    if (opt.write_files && c.snapshot_stride > 0 && step % c.snapshot_stride == 0)
      write_state((out / snapshot_name(step)).string(), s);
  };
  auto observe = [&](int step, double dt) {
    if (opt.observer) opt.observer(StepInfo{step, dt, &s, &ledger});
  };

  res.sphere_l2_sup = sphere_defect(s.M, p.eps).l2;
  emit();
  snapshot(0);
  observe(0, 0.0);

  const bool fixed = p.dt > 0.0;
  const int nfixed = fixed ? fixed_step_count(p) : 0;
  const double t_tol = 1e-12 * std::max(p.t_end, 1.0);
  const PenaltySpec spec{p.eps, p.semi_implicit};
  int step = 0;
  bool last_emitted = true;
  while (fixed ? step < nfixed : s.t < p.t_end - t_tol) {
    double dt = select_dt(c, s);
    if (!fixed) dt = std::min(dt, p.t_end - s.t);
    const int n = step + 1;

    StateSnapshot next = s;
    next.t = fixed ? p.t_end * n / nfixed : s.t + dt;
    if (!fixed && p.t_end - next.t <= t_tol) next.t = p.t_end;

    next.M = staged("llg", n, [&] { return llg_step(s.M, s.u, H, dt, spec, p.cutoff_k, p.m_advection).M; });
    require_finite(finite(next.M), "llg", n);

    next.F = staged("transport", n, [&] { return transport_step(s.F, s.u, dt, p.f_diffusion, p.f_advection); });
    require_finite(finite(next.F), "transport", n);

    VelocityField u_star;
    if (p.couple_u) {
      const MomentumResult mr = staged("momentum", n, [&] {
        const VelocityField body = magnetic_body_force(next.M, H, s.u, p);
        return momentum_step(s.u, next.F, body, dt, p);
      });
      require_finite(finite(mr.u.u) && finite(mr.u.v) && finite(mr.p), "momentum", n);
      next.u = mr.u;
      next.p = mr.p;
      u_star = mr.u_star;
    }

    ledger = staged("diagnostics", n, [&] {
      return accumulate_dissipation(ledger, s, next, dt, H, p, p.couple_u ? &u_star : nullptr);
    });
    ledger.residual = energy_residual(ledger, res.ledger0);
    s = std::move(next);
    step = n;
    res.sphere_l2_sup = std::max(res.sphere_l2_sup, sphere_defect(s.M, p.eps).l2);

    last_emitted = step % c.csv_stride == 0;
    if (last_emitted) emit();
    snapshot(step);
    observe(step, dt);
  }
  if (!last_emitted) emit();

  res.steps = step;
  res.ledger = ledger;
  res.summary = "OK t_end=" + fmt(s.t) + " residual=" + fmt(ledger.residual) + " maxM=" + fmt(linf_norm(s.M));
  res.final_state = std::move(s);
  if (opt.log) *opt.log << res.summary << '\n';
  return res;
}

}  // namespace mvsim
