#include "mvsim/momentum.hpp"

#include <sstream>

#include "mvsim/errors.hpp"
#include "mvsim/operators.hpp"
#include "mvsim/parallel.hpp"

namespace mvsim {

MatrixField elastic_stress(const MatrixField& F) {
  const Grid& g = F.grid();
  MatrixField S(g);
  parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      const Mat2 f = F.at(i, j);
      S.set(i, j, f * f.transpose());
    }
  });
  return S;
}

MatrixField magnetic_stress(const Vec3Field& M) {
  const Grid& g = M.grid();
  std::array<ScalarField, 3> dx, dy;
  for (std::size_t k = 0; k < 3; ++k) {
    dx[k] = diff_centered(M.c[k], 0);
    dy[k] = diff_centered(M.c[k], 1);
  }
  MatrixField S(g);
  parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      double xx = 0.0, xy = 0.0, yy = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        xx += dx[k](i, j) * dx[k](i, j);
        xy += dx[k](i, j) * dy[k](i, j);
        yy += dy[k](i, j) * dy[k](i, j);
      }
      Mat2 s;
      s << xx, xy, xy, yy;
      S.set(i, j, s);
    }
  });
  return S;
}

Vec2Field kelvin_force(const Vec3Field& H, const Vec3Field& M) {
  const Grid& g = M.grid();
  if (!(g == H.grid())) throw ShapeError("kelvin_force: grids differ");
  Vec2Field out(g);
  for (int axis = 0; axis < 2; ++axis) {
    ScalarField& o = out.c[static_cast<std::size_t>(axis)];
    for (std::size_t k = 0; k < 3; ++k) {
      const ScalarField d = diff_centered(H.c[k], axis);
      for (std::size_t n = 0; n < o.size(); ++n) o.values()[n] += d.values()[n] * M.c[k].values()[n];
    }
  }
  return out;
}

VelocityField cell_to_faces(const Vec2Field& f) {
  const Grid& g = f.grid();
  VelocityField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) out.u(i, j) = 0.5 * (f.c[0](i - 1, j) + f.c[0](i, j));
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.v(i, j) = 0.5 * (f.c[1](i, j - 1) + f.c[1](i, j));
  return out;
}

Vec3Field exchange_penalty_field(const Vec3Field& M, double eps) {
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  Vec3Field G = laplacian(M, BcMode::NeumannZero);
  G *= 2.0;
  const Grid& g = M.grid();
  const double ie = 1.0 / eps;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 m = M.at(i, j);
      G.set(i, j, G.at(i, j) - ie * (m.squaredNorm() - 1.0) * m);
    }
  return G;
}

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// -1/2 [ (M_R - M_L).(G_L + G_R) / (2h) + sgn(u_f) (M_L - M_R).(G_L - G_R) / (2h) ]
double face_coupling(const Vec3& ml, const Vec3& mr, const Vec3& gl, const Vec3& gr, double uf, double h,
                     bool upwind) {
  double c = (mr - ml).dot(gl + gr) / (2.0 * h);
  if (upwind) c += sgn(uf) * (ml - mr).dot(gl - gr) / (2.0 * h);
  return -0.5 * c;
}

}  // namespace

VelocityField magnetic_force_consistent(const Vec3Field& M, const VelocityField& u, double eps,
                                        AdvectionScheme scheme) {
  const Grid& g = M.grid();
  if (!(g == u.grid())) throw ShapeError("magnetic_force_consistent: grids differ");
  const Vec3Field G = exchange_penalty_field(M, eps);
  const bool up = scheme == AdvectionScheme::upwind;
  VelocityField f(g);
  parallel_for(g.ny, [&](int j) {
    for (int i = 1; i < g.nx; ++i)
      f.u(i, j) = face_coupling(M.at(i - 1, j), M.at(i, j), G.at(i - 1, j), G.at(i, j), u.u(i, j), g.hx, up);
  });
  parallel_for(g.ny - 1, [&](int jm) {
    const int j = jm + 1;
    for (int i = 0; i < g.nx; ++i)
      f.v(i, j) = face_coupling(M.at(i, j - 1), M.at(i, j), G.at(i, j - 1), G.at(i, j), u.v(i, j), g.hy, up);
  });
  return f;
}

VelocityField magnetic_force_stress(const Vec3Field& M) {
  VelocityField f = divergence_matrix(magnetic_stress(M));
  f *= -1.0;
  return f;
}

VelocityField magnetic_body_force(const Vec3Field& M, const Vec3Field& H, const VelocityField& u,
                                  const SimParams& params) {
  VelocityField f = params.magnetic_force == MagneticForceForm::consistent
                        ? magnetic_force_consistent(M, u, params.eps, params.m_advection)
                        : magnetic_force_stress(M);
  f += cell_to_faces(kelvin_force(H, M));
  return f;
}

MomentumResult momentum_step(const VelocityField& u, const MatrixField& F, const VelocityField& body, double dt,
                             const SimParams& params) {
  const Grid& g = u.grid();
  if (!(g == F.grid()) || !(g == body.grid())) throw ShapeError("momentum_step: grids differ");
  if (!(dt > 0.0)) throw ParameterError("momentum_step needs dt > 0");
  const double umax = u.max_abs();
  if (umax > 0.0 && dt > g.min_spacing() / umax) {
    std::ostringstream os;
    os << "momentum time step " << dt << " violates the advective CFL bound " << g.min_spacing() / umax;
    throw ConfigError(os.str());
  }
  VelocityField rhs = divergence_matrix(elastic_stress(F));
  rhs -= advect(u, u, params.u_advection);
  rhs += body;
  rhs *= dt;
  rhs += u;
  MomentumResult out;
  const double b = params.hyperviscosity_on ? dt * params.eps : 0.0;
  out.u_star = helmholtz_solve(rhs, dt * params.viscosity, b, params.helmholtz_tol, params.solver, &out.helmholtz);
  Projection pr = project_div_free(out.u_star, params.poisson_tol, params.solver);
  out.u = std::move(pr.u);
  out.p = std::move(pr.phi);
  out.p *= 1.0 / dt;
  return out;
}

}  // namespace mvsim
