#include "mvsim/energetics.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "mvsim/errors.hpp"
#include "mvsim/momentum.hpp"
#include "mvsim/operators.hpp"

namespace mvsim {

double grad_norm_sq(const Vec3Field& M) {
  double s = 0.0;
  for (const ScalarField& c : M.c) s += dirichlet_form(c);
  return s;
}

EnergyLedger total_energy(const StateSnapshot& s, double eps) {
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  EnergyLedger e;
  e.t = s.t;
  e.e_kin = 0.5 * l2_inner(s.u, s.u);
  e.e_elastic = 0.5 * l2_inner(s.F, s.F);
  e.e_exchange = 0.5 * grad_norm_sq(s.M);
  const Grid& g = s.grid();
  double pen = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double d = s.M.at(i, j).squaredNorm() - 1.0;
      pen += d * d;
    }
  e.e_penalty = pen * g.cell_volume() / (4.0 * eps);
  return e;
}

EnergyLedger accumulate_dissipation(const EnergyLedger& ledger, const StateSnapshot& before,
                                    const StateSnapshot& now, double dt, const Vec3Field& H,
                                    const SimParams& params, const VelocityField* u_star) {
  if (!(dt > 0.0)) throw ParameterError("accumulate_dissipation needs dt > 0");
  if (!(before.grid() == now.grid()) || !(H.grid() == now.grid()))
    throw ShapeError("accumulate_dissipation: grids differ");
  EnergyLedger out = total_energy(now, params.eps);
  out.d_visc = ledger.d_visc;
  out.d_hyper = ledger.d_hyper;
  out.d_llg = ledger.d_llg;
  out.work_field = ledger.work_field;
  out.work_kelvin = ledger.work_kelvin;

  if (params.couple_u) {
    const VelocityField& w = u_star ? *u_star : now.u;
    if (!(w.grid() == now.grid())) throw ShapeError("accumulate_dissipation: u_star grid differs");
    const VelocityField lw = laplacian(w);
    out.d_visc += dt * params.viscosity * -l2_inner(lw, w);
    // <L^3 w, w> = <L(Lw), Lw> for clamped w
    if (params.hyperviscosity_on) out.d_hyper += dt * params.eps * -l2_inner(laplacian(lw), lw);
  }

  Vec3Field V = now.M;
  V -= before.M;
  V *= 1.0 / dt;
  V += advect(before.u, before.M, params.m_advection);
  out.d_llg += 0.5 * dt * l2_inner(V, V);

  const Grid& g = now.grid();
  double wf = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 m = before.M.at(i, j);
      wf -= m.cross(m.cross(H.at(i, j))).dot(V.at(i, j));
    }
  out.work_field += dt * wf * g.cell_volume();

  // Kelvin force as applied by the momentum step
  const double wk = l2_inner(cell_to_faces(kelvin_force(H, now.M)), now.u);
  out.work_kelvin += dt * wk;
  out.t = now.t;
  return out;
}

double energy_residual(const EnergyLedger& l, const EnergyLedger& l0) {
  return (l.stored() + l.dissipated()) - (l0.stored() + l.work_ext());
}

double eps_sweep_order(const std::vector<std::pair<double, double>>& results) {
  std::set<double> distinct;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [eps, defect] : results) {
    if (!(eps > 0.0) || !(defect > 0.0)) throw ParameterError("eps sweep needs positive eps and defect values");
    distinct.insert(eps);
    lo = std::min(lo, eps);
    hi = std::max(hi, eps);
  }
  if (distinct.size() < 3) throw ParameterError("eps sweep needs at least 3 distinct eps values");
  if (hi / lo < 100.0 * (1.0 - 1e-12)) throw ParameterError("eps sweep must span at least two decades");
  double sx = 0.0, sy = 0.0;
  const double n = static_cast<double>(results.size());
  for (const auto& [eps, defect] : results) {
    sx += std::log(eps);
    sy += std::log(defect);
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [eps, defect] : results) {
    const double dx = std::log(eps) - mx;
    sxy += dx * (std::log(defect) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<std::vector<double>> defect_proxy(const std::vector<std::vector<StateSnapshot>>& runs) {
  std::vector<std::vector<double>> out;
  if (runs.empty()) return out;
  const std::size_t nt = runs[0].size();
  for (const auto& r : runs) {
    if (r.size() != nt) throw ShapeError("defect_proxy: runs have different lengths");
    for (std::size_t k = 0; k < nt; ++k) {
      if (!(r[k].grid() == runs[0][k].grid())) throw ShapeError("defect_proxy: runs use different grids");
      if (r[k].t != runs[0][k].t) throw ShapeError("defect_proxy: runs use different output times");
    }
  }
  for (std::size_t lvl = 0; lvl + 1 < runs.size(); ++lvl) {
    std::vector<double> row(nt);
    for (std::size_t k = 0; k < nt; ++k) {
      const StateSnapshot& a = runs[lvl][k];
      const StateSnapshot& b = runs[lvl + 1][k];
      row[k] = std::abs(l2_inner(a.F, a.F) - l2_inner(b.F, b.F)) + std::abs(grad_norm_sq(a.M) - grad_norm_sq(b.M));
    }
    out.push_back(std::move(row));
  }
  return out;
}

const std::string& csv_header() {
  static const std::string h =
      "t,e_kin,e_elastic,e_exchange,e_penalty,d_visc,d_hyper,d_llg,work_ext,residual,max_abs_M,div_u_linf,div_F_l2";
  return h;
}

std::string csv_row(const DiagnosticsRow& r) {
  const EnergyLedger& l = r.ledger;
  const double v[] = {l.t,      l.e_kin,      l.e_elastic, l.e_exchange, l.e_penalty,   l.d_visc,  l.d_hyper,
                      l.d_llg,  l.work_ext(), l.residual,  r.max_abs_M,  r.div_u_linf, r.div_F_l2};
  std::string s;
  char buf[40];
  for (std::size_t k = 0; k < std::size(v); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", v[k]);
    if (k) s += ',';
    s += buf;
  }
  return s;
}

}  // namespace mvsim
