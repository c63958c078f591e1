#include "mvsim/magnetization.hpp"

#include <limits>
#include <sstream>

#include "mvsim/errors.hpp"
#include "mvsim/operators.hpp"
#include "mvsim/parallel.hpp"

namespace mvsim {

Vec3 skew_solve(const Vec3& m, const Vec3& g) {
  return (g + m.cross(g) + m * m.dot(g)) / (1.0 + m.squaredNorm());
}

double theta_cutoff(double s, double k) {
  if (!(k > 0.0)) throw ParameterError("theta_cutoff needs k > 0");
  const double r = s / k;
  if (r < 1.0) return 1.0;
  if (r < 2.0) return 2.0 - r;
  return 0.0;
}

double penalty_g(double s) {
  if (s < 0.0) return 0.0;
  if (s < 1.0) return s;
  return 1.0;
}

double penalty_G(double s) {
  if (s < 0.0) return 0.0;
  if (s < 1.0) return 0.5 * s * s;
  return s - 0.5;
}

namespace {

// Driving field without the penalty term: 2 lap M - 2 M x (M x H).
Vec3Field conservative_drive(const Vec3Field& M, const Vec3Field& H) {
  Vec3Field G = laplacian(M, BcMode::NeumannZero);
  G *= 2.0;
  const Grid& g = M.grid();
  parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 m = M.at(i, j);
      const Vec3 h = H.at(i, j);
      G.set(i, j, G.at(i, j) - 2.0 * m.cross(m.cross(h)));
    }
  });
  return G;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw ShapeError(std::string(what) + ": grids differ");
}

}  // namespace

Vec3Field llg_rhs(const Vec3Field& M, const Vec3Field& H, const PenaltySpec& spec) {
  require_same_grid(M.grid(), H.grid(), "llg_rhs");
  if (!(spec.eps > 0.0)) throw ParameterError("eps must be positive");
  Vec3Field G = conservative_drive(M, H);
  const Grid& g = M.grid();
  const double ie = 1.0 / spec.eps;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 m = M.at(i, j);
      G.set(i, j, G.at(i, j) - ie * (m.squaredNorm() - 1.0) * m);
    }
  return G;
}

double llg_stable_dt(const Grid& grid, double eps, double umax, double cfl) {
  double dt = 1.0 / (4.0 * (1.0 / (grid.hx * grid.hx) + 1.0 / (grid.hy * grid.hy)));
  dt = std::min(dt, eps / 4.0);
  if (umax > 0.0) dt = std::min(dt, grid.min_spacing() / umax);
  return cfl * dt;
}

LlgStep llg_step(const Vec3Field& M, const VelocityField& u, const Vec3Field& H, double dt,
                 const PenaltySpec& spec, double cutoff_k, AdvectionScheme scheme) {
  const Grid& g = M.grid();
  require_same_grid(g, H.grid(), "llg_step");
  require_same_grid(g, u.grid(), "llg_step");
  if (!(spec.eps > 0.0)) throw ParameterError("eps must be positive");
  if (cutoff_k < 0.0) throw ParameterError("cutoff_k must be non-negative");
  const double limit = llg_stable_dt(g, spec.eps, u.max_abs(), 1.0);
  if (!(dt > 0.0) || dt > limit) {
    std::ostringstream os;
    os << "LLG time step " << dt << " violates the stability bound " << limit;
    throw ConfigError(os.str());
  }
  const Vec3Field Gc = conservative_drive(M, H);
  const Vec3Field adv = advect(u, M, scheme);
  const double ie = 1.0 / spec.eps;
  LlgStep out{Vec3Field(g), Vec3Field(g)};
  parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 m0 = M.at(i, j);
      const double c = ie * (m0.squaredNorm() - 1.0);
      const Vec3 m = cutoff_k > 0.0 ? theta_cutoff(m0.norm(), cutoff_k) * m0 : m0;
      const Vec3 a = adv.at(i, j);
      Vec3 mn;
      if (spec.semi_implicit) {
        // the penalty part of G is parallel to m and passes through skew_solve unchanged
        const Vec3 v = skew_solve(m, Gc.at(i, j));
        mn = (m0 + dt * (v - a)) / (1.0 + dt * c);
      } else {
        const Vec3 v = skew_solve(m, Gc.at(i, j) - c * m0);
        mn = m0 + dt * (v - a);
      }
      out.M.set(i, j, mn);
      out.V.set(i, j, (mn - m0) / dt + a);
    }
  });
  return out;
}

LlgForms llg_form_eval(const Vec3Field& M, const VelocityField& u, const Vec3Field& H,
                       const Vec3Field& Mdot) {
  const Grid& g = M.grid();
  require_same_grid(g, H.grid(), "llg_form_eval");
  require_same_grid(g, Mdot.grid(), "llg_form_eval");
  require_same_grid(g, u.grid(), "llg_form_eval");
  double worst = -1.0;
  int wi = 0, wj = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double d = std::abs(M.at(i, j).norm() - 1.0);
      if (!(d <= worst)) {
        worst = d;
        wi = i;
        wj = j;
      }
    }
  if (!(worst <= 1e-8)) {
    std::ostringstream os;
    os << "llg_form_eval: |M| off the unit sphere by " << worst << " at cell (" << wi << ", " << wj
       << ")";
    throw PreconditionError(os.str());
  }
  const Vec3Field lap = laplacian(M, BcMode::NeumannZero);
  const Vec3Field adv = advect(u, M, AdvectionScheme::central);
  std::array<ScalarField, 3> dx, dy;
  for (std::size_t k = 0; k < 3; ++k) {
    dx[k] = diff_centered(M.c[k], 0);
    dy[k] = diff_centered(M.c[k], 1);
  }
  LlgForms out{Vec3Field(g), Vec3Field(g), Vec3Field(g)};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 m = M.at(i, j);
      const Vec3 w = lap.at(i, j) + H.at(i, j);
      const Vec3 mat = Mdot.at(i, j) + adv.at(i, j);
      double grad2 = 0.0;
      for (std::size_t k = 0; k < 3; ++k) grad2 += dx[k](i, j) * dx[k](i, j) + dy[k](i, j) * dy[k](i, j);
      const Vec3 mxw = m.cross(w);
      const Vec3 f1 = -mxw - m.cross(mxw);
      const Vec3 f2 = -mxw + w + m * (grad2 - m.dot(H.at(i, j)));
      const Vec3 f3 = -2.0 * mxw + m.cross(mat);
      out.r1.set(i, j, f1 - mat);
      out.r2.set(i, j, f2 - mat);
      out.r3.set(i, j, f3 - mat);
    }
  return out;
}

SphereDefect sphere_defect(const Vec3Field& M, double eps) {
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  const Grid& g = M.grid();
  double s = 0.0, mx = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double n2 = M.at(i, j).squaredNorm();
      s += (n2 - 1.0) * (n2 - 1.0);
      mx = std::max(mx, std::sqrt(n2));
    }
  SphereDefect d;
  const double l2sq = s * g.cell_volume();
  d.l2 = std::sqrt(l2sq);
  d.maxabs = mx;
  d.penalty_energy = l2sq / (4.0 * eps);
  return d;
}

double lyapunov_G(const Vec3Field& M) {
  const Grid& g = M.grid();
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) s += penalty_G(M.at(i, j).squaredNorm() - 1.0);
  return s * g.cell_volume();
}

}  // namespace mvsim
