#include "mvsim/deformation.hpp"

#include <iostream>
#include <sstream>

#include "mvsim/errors.hpp"
#include "mvsim/operators.hpp"
#include "mvsim/parallel.hpp"

namespace mvsim {

double transport_stable_dt(const Grid& grid, double umax, double f_diffusion, double cfl) {
  double dt = std::numeric_limits<double>::infinity();
  if (umax > 0.0) dt = grid.min_spacing() / umax;
  if (f_diffusion > 0.0)
    dt = std::min(dt, 1.0 / (2.0 * f_diffusion * (1.0 / (grid.hx * grid.hx) + 1.0 / (grid.hy * grid.hy))));
  return cfl * dt;
}

MatrixField transport_step(const MatrixField& F, const VelocityField& u, double dt, double f_diffusion,
                           AdvectionScheme scheme) {
  const Grid& g = F.grid();
  if (!(g == u.grid())) throw ShapeError("transport_step: grids differ");
  if (!(f_diffusion >= 0.0)) throw ParameterError("f_diffusion must be non-negative");
  const double limit = transport_stable_dt(g, u.max_abs(), f_diffusion, 1.0);
  if (!(dt >= 0.0) || dt > limit) {
    std::ostringstream os;
    os << "transport time step " << dt << " violates the CFL bound " << limit;
    throw ConfigError(os.str());
  }
  const MatrixField adv = advect(u, F, scheme);
  const MatrixField J = jacobian(u);
  MatrixField out = F;
  if (f_diffusion > 0.0) out.axpy(dt * f_diffusion, laplacian(F, BcMode::NeumannZero));
  parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      const Mat2 src = J.at(i, j) * F.at(i, j) - adv.at(i, j);
      out.set(i, j, out.at(i, j) + dt * src);
    }
  });
  return out;
}

double CompactVortex::psi(const Vec2& x) const {
  const double q = (x - center).squaredNorm() / (radius * radius);
  return q < 1.0 ? amplitude * std::pow(1.0 - q, 4) : 0.0;
}

Vec2 CompactVortex::gradient_psi(const Vec2& x) const {
  const Vec2 d = x - center;
  const double r2 = radius * radius;
  const double q = d.squaredNorm() / r2;
  if (q >= 1.0) return Vec2::Zero();
  return amplitude * (-4.0 * std::pow(1.0 - q, 3)) * (2.0 / r2) * d;
}

Mat2 CompactVortex::hessian_psi(const Vec2& x) const {
  const Vec2 d = x - center;
  const double r2 = radius * radius;
  const double q = d.squaredNorm() / r2;
  if (q >= 1.0) return Mat2::Zero();
  const double b1 = -4.0 * std::pow(1.0 - q, 3);
  const double b2 = 12.0 * (1.0 - q) * (1.0 - q);
  const Vec2 dq = (2.0 / r2) * d;
  return amplitude * (b2 * dq * dq.transpose() + b1 * (2.0 / r2) * Mat2::Identity());
}

Vec2 CompactVortex::velocity(const Vec2& x) const {
  const Vec2 gp = gradient_psi(x);
  return {gp[1], -gp[0]};
}

Mat2 CompactVortex::velocity_gradient(const Vec2& x) const {
  const Mat2 hs = hessian_psi(x);
  Mat2 g;
  g << hs(1, 0), hs(1, 1), -hs(0, 0), -hs(0, 1);
  return g;
}

AnalyticVelocity CompactVortex::analytic() const {
  const CompactVortex v = *this;
  return {[v](double, const Vec2& x) { return v.velocity(x); },
          [v](double, const Vec2& x) { return v.velocity_gradient(x); }};
}

namespace {

struct CharState {
  Vec2 x;
  Mat2 p;
};

CharState char_rhs(const AnalyticVelocity& vel, double s, const CharState& y) {
  return {vel.u(s, y.x), -y.p * vel.grad(s, y.x)};
}

bool inside(const Grid& g, const Vec2& x) {
  const double tol = 1e-12 * (g.lx + g.ly);
  return x[0] >= -tol && x[0] <= g.lx + tol && x[1] >= -tol && x[1] <= g.ly + tol;
}

}  // namespace

CharacteristicPoint characteristics_point(const MatrixSampler& F0, const AnalyticVelocity& vel, const Vec2& x,
                                          double t0, double t1, int substeps, const Grid& domain) {
  if (substeps < 1) throw ParameterError("characteristics need at least one substep");
  CharState y{x, Mat2::Identity()};
  const double h = (t0 - t1) / substeps;  // negative when integrating backward
  CharacteristicPoint out;
  double s = t1;
  auto axpy = [](const CharState& a, double c, const CharState& b) { return CharState{a.x + c * b.x, a.p + c * b.p}; };
  for (int n = 0; n < substeps; ++n) {
    const CharState k1 = char_rhs(vel, s, y);
    const CharState k2 = char_rhs(vel, s + 0.5 * h, axpy(y, 0.5 * h, k1));
    const CharState k3 = char_rhs(vel, s + 0.5 * h, axpy(y, 0.5 * h, k2));
    const CharState k4 = char_rhs(vel, s + h, axpy(y, h, k3));
    y.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    y.p += h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
    s = t1 + (n + 1) * h;
    if (!inside(domain, y.x)) out.exited = true;
  }
  out.F = y.p * F0(y.x);
  return out;
}

CharacteristicsResult characteristics_oracle(const Grid& grid, const MatrixSampler& F0, const AnalyticVelocity& vel,
                                             double t, int substeps) {
  CharacteristicsResult r;
  r.F = MatrixField(grid);
  r.exited_flags.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const CharacteristicPoint p =
          characteristics_point(F0, vel, Vec2(grid.xc(i), grid.yc(j)), 0.0, t, substeps, grid);
      r.F.set(i, j, p.F);
      if (p.exited) {
        r.exited_flags[static_cast<std::size_t>(i + grid.nx * j)] = 1;
        ++r.exited;
      }
    }
  return r;
}

DivergenceNorms div_matrix_monitor(const MatrixField& F) {
  const VelocityField d = divergence_matrix(F);
  return {l2_norm(d), linf_norm(d)};
}

MatrixField curl_columns(const ScalarField& phi0, const ScalarField& phi1) {
  require_same_shape(phi0, phi1, "curl_columns");
  if (phi0.layout() != Layout::cell) throw ShapeError("curl_columns expects cell fields");
  MatrixField F(phi0.grid());
  const ScalarField* phi[2] = {&phi0, &phi1};
  for (int s = 0; s < 2; ++s) {
    F(0, s) = diff_centered(*phi[s], 1);
    F(1, s) = diff_centered(*phi[s], 0);
    F(1, s) *= -1.0;
  }
  return F;
}

MollifierKernel mollifier_kernel(const Grid& grid, double delta) {
  if (!(delta > 0.0)) throw ParameterError("mollifier radius must be positive");
  MollifierKernel k;
  k.rx = static_cast<int>(std::floor(delta / grid.hx));
  k.ry = static_cast<int>(std::floor(delta / grid.hy));
  k.w.assign(static_cast<std::size_t>((2 * k.rx + 1) * (2 * k.ry + 1)), 0.0);
  double sum = 0.0;
  for (int dj = -k.ry; dj <= k.ry; ++dj)
    for (int di = -k.rx; di <= k.rx; ++di) {
      const double r2 = (di * grid.hx * di * grid.hx + dj * grid.hy * dj * grid.hy) / (delta * delta);
      const double w = r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
      k.w[static_cast<std::size_t>((di + k.rx) + (2 * k.rx + 1) * (dj + k.ry))] = w;
      sum += w;
    }
  for (double& w : k.w) w /= sum;
  return k;
}

namespace {

int reflect(int i, int n) {
  // mirror about the wall: -1 -> 0, -2 -> 1, n -> n-1
  while (i < 0 || i >= n) i = i < 0 ? -1 - i : 2 * n - 1 - i;
  return i;
}

}  // namespace

MatrixField mollify_initial(const MatrixField& F0, double delta, bool* degenerate) {
  const Grid& g = F0.grid();
  if (!(delta > 0.0)) throw ParameterError("mollifier radius must be positive");
  if (delta < g.min_spacing()) {
    std::cerr << "warning: mollifier radius " << delta << " is below the grid spacing; F0 left unchanged\n";
    if (degenerate) *degenerate = true;
    return F0;
  }
  if (degenerate) *degenerate = false;
  const MollifierKernel k = mollifier_kernel(g, delta);
  MatrixField out(g);
  for (std::size_t c = 0; c < 4; ++c) {
    const ScalarField& src = F0.c[c];
    ScalarField& dst = out.c[c];
    parallel_for(g.ny, [&](int j) {
      for (int i = 0; i < g.nx; ++i) {
        double s = 0.0;
        for (int dj = -k.ry; dj <= k.ry; ++dj)
          for (int di = -k.rx; di <= k.rx; ++di) {
            const double w = k.at(di, dj);
            if (w != 0.0) s += w * src(reflect(i + di, g.nx), reflect(j + dj, g.ny));
          }
        dst(i, j) = s;
      }
    });
  }
  return out;
}

}  // namespace mvsim
