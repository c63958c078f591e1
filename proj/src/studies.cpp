#include "mvsim/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>

#include "mvsim/deformation.hpp"
#include "mvsim/energetics.hpp"
#include "mvsim/errors.hpp"
#include "mvsim/magnetization.hpp"
#include "mvsim/momentum.hpp"
#include "mvsim/scenarios.hpp"
#include "mvsim/simulation.hpp"

namespace mvsim {

namespace {

const double kPi = std::acos(-1.0);
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double max_cell_gap(const MatrixField& a, const MatrixField& b) {
  const Grid& g = a.grid();
  double m = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) m = std::max(m, (a.at(i, j) - b.at(i, j)).cwiseAbs().maxCoeff());
  return m;
}

Grid doubled(const Grid& g) { return Grid::make(g.lx, g.ly, 2 * g.nx, 2 * g.ny); }

double form_residual(const Grid& g) {
  const Vec3Field M = smooth_unit_field(g);
  Vec3Field H(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      H.set(i, j, Vec3(std::cos(kPi * g.xc(i) / g.lx), 0.5, std::cos(kPi * g.yc(j) / g.ly)));
  const VelocityField u(g);
  const Vec3Field Mdot = llg_form_eval(M, u, H, Vec3Field(g)).r1;
  const LlgForms f = llg_form_eval(M, u, H, Mdot);
  return std::max(linf_norm(f.r2), linf_norm(f.r3));
}

struct TransportGap {
  double gap = 0.0;
  double scale = 0.0;  ///< dt + h
  int exited = 0;
};

TransportGap transport_gap(const Grid& g, bool zero_velocity) {
  const double L = std::min(g.lx, g.ly);
  const Vec2 c(0.5 * g.lx, 0.5 * g.ly);
  const CompactVortex v{c, 0.4 * L, 0.2 * L};
  const CompactVortex b0{c + Vec2(-0.05, 0.05) * L, 0.3 * L, 0.02 * L};
  const CompactVortex b1{c + Vec2(0.05, -0.05) * L, 0.3 * L, 0.02 * L};
  auto cell = [&](const CompactVortex& b) {
    ScalarField phi(g, Layout::cell);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) phi(i, j) = b.psi(Vec2(g.xc(i), g.yc(j)));
    return phi;
  };
  MatrixField F = MatrixField::identity(g);
  F += curl_columns(cell(b0), cell(b1));
  const MatrixField F_init = F;

  const double h = std::min(g.hx, g.hy);
  const double dt = 0.25 * h;
  const int steps = static_cast<int>(std::lround(0.25 / dt));
  const VelocityField u =
      zero_velocity ? VelocityField(g) : velocity_from_stream(g, [&](double x, double y) { return v.psi(Vec2(x, y)); });
  for (int k = 0; k < steps; ++k) F = transport_step(F, u, dt, 0.0);

  AnalyticVelocity vel = v.analytic();
  MatrixSampler F0 = [&](const Vec2& x) {
    Mat2 a = Mat2::Identity();
    a.col(0) += b0.velocity(x);
    a.col(1) += b1.velocity(x);
    return a;
  };
  if (zero_velocity) {
    vel = {[](double, const Vec2&) { return Vec2(Vec2::Zero()); }, [](double, const Vec2&) { return Mat2(Mat2::Zero()); }};
    F0 = [&](const Vec2& x) {
      const int i = std::clamp(static_cast<int>(x[0] / g.hx), 0, g.nx - 1);
      const int j = std::clamp(static_cast<int>(x[1] / g.hy), 0, g.ny - 1);
      return F_init.at(i, j);
    };
  }
  const CharacteristicsResult r = characteristics_oracle(g, F0, vel, steps * dt, 100);
  return {max_cell_gap(F, r.F), dt + h, r.exited};
}

// Manufactured flow: psi = A cos(t) S(x) S(y), S = sin^2(pi z);
// p = A cos(t) cos(pi x) cos(pi y); unit square.
struct Manufactured {
  double A = 0.1;

  static double S(double z) { return std::pow(std::sin(kPi * z), 2); }
  static double S1(double z) { return kPi * std::sin(2 * kPi * z); }
  static double S2(double z) { return 2 * kPi * kPi * std::cos(2 * kPi * z); }
  static double S3(double z) { return -4 * kPi * kPi * kPi * std::sin(2 * kPi * z); }

  Vec2 u(double t, double x, double y) const { return A * std::cos(t) * Vec2(S(x) * S1(y), -S1(x) * S(y)); }

  Vec2 forcing(double t, double x, double y) const {
    const double a = A * std::cos(t);
    const Vec2 vel = u(t, x, y);
    const Vec2 ut = -A * std::sin(t) * Vec2(S(x) * S1(y), -S1(x) * S(y));
    Mat2 grad;
    grad << a * S1(x) * S1(y), a * S(x) * S2(y), -a * S2(x) * S(y), -a * S1(x) * S1(y);
    const Vec2 lap = a * Vec2(S2(x) * S1(y) + S(x) * S3(y), -(S3(x) * S(y) + S1(x) * S2(y)));
    const Vec2 gp = -a * kPi * Vec2(std::sin(kPi * x) * std::cos(kPi * y), std::cos(kPi * x) * std::sin(kPi * y));
    return ut + grad * vel - lap + gp;
  }

  static VelocityField faces(const Grid& g, const std::function<Vec2(double, double)>& f) {
    VelocityField out(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) out.u(i, j) = f(g.xf(i), g.yc(j))[0];
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out.v(i, j) = f(g.xc(i), g.yf(j))[1];
    return out;
  }

  VelocityField run(int n, int steps, double t_end) const {
    const Grid g = Grid::make(1, 1, n, n);
    SimParams p;
    p.hyperviscosity_on = false;
    p.helmholtz_tol = 1e-13;
    p.poisson_tol = 1e-12;
    VelocityField vel = faces(g, [&](double x, double y) { return u(0.0, x, y); });
    const MatrixField F(g);
    const double dt = t_end / steps;
    for (int k = 1; k <= steps; ++k) {
      const VelocityField body = faces(g, [&](double x, double y) { return forcing(k * dt, x, y); });
      vel = momentum_step(vel, F, body, dt, p).u;
    }
    return vel;
  }
};

Mat2 expm(const Mat2& A) {
  // scaling and squaring with a Taylor core
  int s = 0;
  double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();
  while (nrm > 0.5) {
    nrm *= 0.5;
    ++s;
  }
  const Mat2 B = A / std::ldexp(1.0, s);
  Mat2 term = Mat2::Identity(), sum = Mat2::Identity();
  for (int k = 1; k < 30; ++k) {
    term = term * B / k;
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

Vec3 precession_rhs(const Vec3& m, const Vec3& h) { return skew_solve(m, -2.0 * m.cross(m.cross(h))); }

Vec3 precession_rk4(Vec3 m, const Vec3& h, double t, int steps) {
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Vec3 k1 = precession_rhs(m, h);
    const Vec3 k2 = precession_rhs(m + 0.5 * dt * k1, h);
    const Vec3 k3 = precession_rhs(m + 0.5 * dt * k2, h);
    const Vec3 k4 = precession_rhs(m + dt * k3, h);
    m += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return m;
}

double observed_order(const OrderStudy& s) {
  const std::size_t n = s.errors.size();
  return std::log(s.errors[n - 2] / s.errors[n - 1]) / std::log(s.sizes[n - 2] / s.sizes[n - 1]);
}

}  // namespace

bool StudyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.pass; });
}

void StudyReport::print(std::ostream& os) const {
  for (const CheckLine& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << num(c.value) << " threshold=" << num(c.threshold);
    if (!c.detail.empty()) os << ' ' << c.detail;
    os << '\n';
  }
}

Vec3Field smooth_unit_field(const Grid& g) {
  Vec3Field M(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.xc(i) / g.lx, y = g.yc(j) / g.ly;
      const Vec3 v(0.6 * std::cos(kPi * x) + 0.2 * std::cos(2 * kPi * y), 0.5 * std::cos(kPi * y) * std::cos(kPi * x),
                   1.0 + 0.3 * std::cos(2 * kPi * x));
      M.set(i, j, v.normalized());
    }
  return M;
}

StudyReport run_verification(const RunConfig& c, bool refine) {
  c.validate();
  const Grid g = c.grid();
  const double h = std::min(g.hx, g.hy);
  StudyReport rep;

  const double f1 = form_residual(g);
  const double form_tol = 200.0 * h * h;
  rep.checks.push_back(
      {"llg-forms", f1, form_tol, f1 <= form_tol, "grid=" + std::to_string(g.nx) + "x" + std::to_string(g.ny)});

  const TransportGap t1 = transport_gap(g, false);
  rep.checks.push_back({"transport-characteristics", t1.gap, 10.0 * t1.scale, t1.gap <= 10.0 * t1.scale && t1.exited == 0,
                        "gap/(dt+h)=" + num(t1.gap / t1.scale) + " exited=" + std::to_string(t1.exited)});

  const TransportGap t0 = transport_gap(g, true);
  rep.checks.push_back({"transport-characteristics-u0", t0.gap, 0.0, t0.gap == 0.0, ""});

  if (refine) {
    const Grid g2 = doubled(g);
    const double f2 = form_residual(g2);
    rep.checks.push_back({"llg-forms-refined", f1 / f2, 3.0, f1 / f2 >= 3.0,
                          "coarse=" + num(f1) + " fine=" + num(f2) + " order=" + num(std::log2(f1 / f2))});
    const TransportGap t2 = transport_gap(g2, false);
    rep.checks.push_back({"transport-characteristics-refined", t1.gap / t2.gap, 3.0, t1.gap / t2.gap >= 3.0,
                          "coarse=" + num(t1.gap) + " fine=" + num(t2.gap) + " order=" + num(std::log2(t1.gap / t2.gap))});
  }
  return rep;
}

SweepResult sweep(const RunConfig& c, const std::vector<double>& eps_list, std::ostream* log) {
  c.validate();
  if (eps_list.size() < 3) throw ConfigError("sweep needs at least 3 eps values");
  for (double e : eps_list)
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("sweep eps values must be positive");

  RunConfig base = c;
  if (!(base.params.dt > 0.0)) {
    RunConfig k = c;
    k.params.eps = *std::min_element(eps_list.begin(), eps_list.end());
    base.params.dt = select_dt(k, initial_state(k));
  }
  const int nsteps = fixed_step_count(base.params);
  base.csv_stride = std::max(base.csv_stride, (nsteps + 199) / 200);

  const std::filesystem::path out(c.out_dir);
  std::filesystem::create_directories(out);
  std::ofstream csv(out / "sweep.csv");
  if (!csv) throw ConfigError("cannot write '" + (out / "sweep.csv").string() + "'");
  csv << "eps,defect_l2_sup,energy_final,proxy\n" << std::flush;

  SweepResult res;
  std::vector<StateSnapshot> prev;
  for (double e : eps_list) {
    RunConfig r = base;
    r.params.eps = e;
    SweepRow row;
    row.eps = e;
    double st = 0.0;
    RunOptions o;
    o.write_files = false;
    o.keep_states = true;
    o.observer = [&](const StepInfo& s) {
      if (s.step > 0) st += s.dt * std::pow(sphere_defect(s.state->M, e).l2, 2);
    };
    RunResult run = run_simulation(r, o);
    row.defect_l2_sup = run.sphere_l2_sup;
    row.defect_st = std::sqrt(st);
    row.energy_final = run.ledger.stored();
    if (prev.empty()) {
      row.proxy = kNaN;
    } else {
      const std::vector<double> d = defect_proxy({prev, run.states})[0];
      row.proxy = *std::max_element(d.begin(), d.end());
    }
    prev = std::move(run.states);
    res.rows.push_back(row);
    csv << full(row.eps) << ',' << full(row.defect_l2_sup) << ',' << full(row.energy_final) << ',' << full(row.proxy)
        << '\n'
        << std::flush;
    if (log)
      *log << "eps=" << num(e) << " defect_sup=" << num(row.defect_l2_sup) << " defect_st=" << num(row.defect_st)
           << " energy=" << num(row.energy_final) << " proxy=" << num(row.proxy) << '\n';
  }

  std::vector<std::pair<double, double>> sup, stl;
  for (const SweepRow& r : res.rows) {
    sup.emplace_back(r.eps, r.defect_l2_sup);
    stl.emplace_back(r.eps, r.defect_st);
  }
  try {
    res.slope = eps_sweep_order(sup);
    res.slope_st = eps_sweep_order(stl);
  } catch (const ParameterError& e) {
    res.slope = res.slope_st = kNaN;
    if (log) *log << "no slope fit: " << e.what() << '\n';
  }
  if (log) *log << "slope sup_t=" << num(res.slope) << " space-time=" << num(res.slope_st) << '\n';
  return res;
}

std::vector<OrderStudy> convergence_study(const RunConfig& c, int levels, std::ostream* log) {
  c.validate();
  if (levels < 3) throw ConfigError("convergence study needs at least 3 levels");
  if (levels > 4) throw ConfigError("convergence study supports at most 4 levels");
  std::vector<OrderStudy> out;
  const Manufactured mms;
  const double t_mms = 0.05;

  OrderStudy ms{"momentum", "space", {}, {}, 0.0, 1.8};
  for (int k = 0; k < levels; ++k) {
    const int n = 16 << k;
    const double h = 1.0 / n;
    const int steps = static_cast<int>(std::ceil(t_mms / (0.5 * h * h)));
    VelocityField d = mms.run(n, steps, t_mms);
    d -= Manufactured::faces(d.grid(), [&](double x, double y) { return mms.u(t_mms, x, y); });
    ms.sizes.push_back(h);
    ms.errors.push_back(l2_norm(d));
  }
  out.push_back(ms);

  OrderStudy mt{"momentum", "time", {}, {}, 0.0, 0.9};
  const int base_steps = 20;
  const VelocityField ref = mms.run(32, base_steps << (levels + 4), t_mms);
  for (int k = 0; k < levels; ++k) {
    const int steps = base_steps << k;
    VelocityField d = mms.run(32, steps, t_mms);
    d -= ref;
    mt.sizes.push_back(t_mms / steps);
    mt.errors.push_back(l2_norm(d));
  }
  out.push_back(mt);

  OrderStudy tt{"transport", "time", {}, {}, 0.0, 0.9};
  {
    Mat2 A;
    A << 0.0, 0.5, -0.5, 0.0;
    const Grid g = Grid::make(1, 1, 64, 64);
    VelocityField u(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) u.u(i, j) = A(0, 1) * (g.yc(j) - 0.5);
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) u.v(i, j) = A(1, 0) * (g.xc(i) - 0.5);
    const double t = 0.4;
    const Mat2 exact = expm(t * A);
    for (int k = 0; k < levels; ++k) {
      const int steps = 20 << k;
      MatrixField F = MatrixField::identity(g);
      for (int n = 0; n < steps; ++n) F = transport_step(F, u, t / steps, 0.0);
      tt.sizes.push_back(t / steps);
      tt.errors.push_back((F.at(g.nx / 2, g.ny / 2) - exact).cwiseAbs().maxCoeff());
    }
  }
  out.push_back(tt);

  OrderStudy lt{"llg", "time", {}, {}, 0.0, 0.9};
  {
    const Grid g = Grid::make(8.0, 8.0, 4, 4);
    const Vec3 hv(0.0, 0.0, 0.8);
    const double t = 0.5;
    const Vec3 ref_m = precession_rk4(Vec3(1, 0, 0), hv, t, 4000);
    Vec3Field H(g), M0(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        H.set(i, j, hv);
        M0.set(i, j, Vec3(1, 0, 0));
      }
    for (int k = 0; k < levels; ++k) {
      const int steps = 200 << k;
      Vec3Field M = M0;
      for (int n = 0; n < steps; ++n) M = llg_step(M, VelocityField(g), H, t / steps, {1.0, false}, 0.0).M;
      lt.sizes.push_back(t / steps);
      lt.errors.push_back((M.at(2, 2) - ref_m).norm());
    }
  }
  out.push_back(lt);

  for (OrderStudy& s : out) s.order = observed_order(s);

  const std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "convergence.csv");
  if (!csv) throw ConfigError("cannot write '" + (dir / "convergence.csv").string() + "'");
  csv << "equation,kind,level,size,error,order\n";
  for (const OrderStudy& s : out)
    for (std::size_t k = 0; k < s.sizes.size(); ++k) {
      const double o = k == 0 ? kNaN : std::log(s.errors[k - 1] / s.errors[k]) / std::log(s.sizes[k - 1] / s.sizes[k]);
      csv << s.equation << ',' << s.kind << ',' << k << ',' << full(s.sizes[k]) << ',' << full(s.errors[k]) << ','
          << full(o) << '\n';
    }
  if (log) {
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %-6s %10s %12s %8s\n", "equation", "kind", "size", "error", "order");
    *log << line;
    for (const OrderStudy& s : out) {
      for (std::size_t k = 0; k < s.sizes.size(); ++k) {
        std::snprintf(line, sizeof line, "%-10s %-6s %10.3e %12.4e\n", s.equation.c_str(), s.kind.c_str(), s.sizes[k],
                      s.errors[k]);
        *log << line;
      }
      std::snprintf(line, sizeof line, "%-10s %-6s observed order %.3f (need >= %.1f) %s\n", s.equation.c_str(),
                    s.kind.c_str(), s.order, s.threshold, s.pass() ? "PASS" : "FAIL");
      *log << line;
    }
  }
  return out;
}

}  // namespace mvsim
