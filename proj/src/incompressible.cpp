#include "mvsim/incompressible.hpp"

#include <sstream>

#include "mvsim/errors.hpp"
#include "mvsim/operators.hpp"
#include "spectral.hpp"

namespace mvsim {

namespace {

using spectral::Basis;

// Preconditioned conjugate gradients. `done(r, x)` decides convergence.
template <class T, class Apply, class Prec, class Done>
int pcg(T& x, const T& b, Apply&& apply, Prec&& prec, Done&& done, int max_iter) {
  T r = b;
  r -= apply(x);
  if (done(r, x)) return 0;
  T z = prec(r);
  T p = z;
  double rz = l2_inner(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    const T ap = apply(p);
    const double pap = l2_inner(p, ap);
    if (!(pap > 0.0)) return -it;
    const double alpha = rz / pap;
    x.axpy(alpha, p);
    r.axpy(-alpha, ap);
    if (done(r, x)) return it;
    z = prec(r);
    const double rz_new = l2_inner(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    p *= beta;
    p += z;
  }
  return -max_iter;
}

void subtract_mean(ScalarField& f) {
  const double m = mean(f);
  for (double& x : f.values()) x -= m;
}

ScalarField poisson_spectral(const ScalarField& rhs) {
  const Grid& g = rhs.grid();
  const auto& bx = spectral::basis(Basis::cell_even, g.nx);
  const auto& by = spectral::basis(Basis::cell_even, g.ny);
  Eigen::MatrixXd y = bx.q.transpose() * rhs.as_matrix() * by.q;
  for (int l = 0; l < g.ny; ++l)
    for (int k = 0; k < g.nx; ++k) {
      const double s = bx.lambda(k) / (g.hx * g.hx) + by.lambda(l) / (g.hy * g.hy);
      y(k, l) = (k == 0 && l == 0) ? 0.0 : y(k, l) / s;
    }
  ScalarField out(g, Layout::cell);
  out.as_matrix() = bx.q * y * by.q.transpose();
  subtract_mean(out);
  return out;
}

// Direct solve of (I - a L - b L^3) on one velocity component.
void helmholtz_component(const ScalarField& rhs, ScalarField& out, double a, double b) {
  const Grid& g = rhs.grid();
  const bool xf = rhs.layout() == Layout::xface;
  const auto& bx = xf ? spectral::basis(Basis::node_dirichlet, g.nx)
                      : spectral::basis(Basis::cell_odd, g.nx);
  const auto& by = xf ? spectral::basis(Basis::cell_odd, g.ny)
                      : spectral::basis(Basis::node_dirichlet, g.ny);
  const auto r = rhs.as_matrix();
  const int i0 = xf ? 1 : 0;
  const int j0 = xf ? 0 : 1;
  const int mi = static_cast<int>(bx.q.rows());
  const int mj = static_cast<int>(by.q.rows());
  Eigen::MatrixXd y = bx.q.transpose() * r.block(i0, j0, mi, mj) * by.q;
  for (int l = 0; l < mj; ++l)
    for (int k = 0; k < mi; ++k) {
      const double lam = bx.lambda(k) / (g.hx * g.hx) + by.lambda(l) / (g.hy * g.hy);
      y(k, l) /= 1.0 - a * lam - b * lam * lam * lam;
    }
  out.fill(0.0);
  out.as_matrix().block(i0, j0, mi, mj) = bx.q * y * by.q.transpose();
}

VelocityField helmholtz_spectral(const VelocityField& rhs, double a, double b) {
  VelocityField out(rhs.grid());
  helmholtz_component(rhs.u, out.u, a, b);
  helmholtz_component(rhs.v, out.v, a, b);
  return out;
}

double largest_symbol(const Grid& g, double a, double b) {
  const double lam = 4.0 / (g.hx * g.hx) + 4.0 / (g.hy * g.hy);
  return 1.0 + a * lam + b * lam * lam * lam;
}

bool is_zero(std::span<const double> v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

ScalarField poisson_impl(const ScalarField& rhs_in, double tol, SolverKind kind,
                         SolveStats* stats, double mean_scale) {
  if (rhs_in.layout() != Layout::cell) throw ShapeError("Poisson rhs must be cell-centered");
  if (!(tol > 0.0)) throw ParameterError("Poisson tolerance must be positive");
  const Grid& g = rhs_in.grid();
  if (stats) *stats = {};
  if (is_zero(rhs_in.values())) return ScalarField(g, Layout::cell);
  const double norm_in = l2_norm(rhs_in);
  const double m = mean(rhs_in);
  if (std::abs(m) > 1e-10 * (norm_in + mean_scale)) {
    std::ostringstream os;
    os << "Poisson rhs violates solvability: mean " << m << " vs norm " << norm_in;
    throw PreconditionError(os.str());
  }
  ScalarField rhs = rhs_in;
  subtract_mean(rhs);
  const double bnorm = l2_norm(rhs);
  // -L is SPD on mean-zero fields
  ScalarField nrhs = rhs;
  nrhs *= -1.0;
  auto apply = [](const ScalarField& x) {
    ScalarField y = laplacian(x, BcMode::NeumannZero);
    y *= -1.0;
    return y;
  };
  double relres = 0.0;
  auto done = [&](const ScalarField& r, const ScalarField&) {
    relres = bnorm > 0.0 ? l2_norm(r) / bnorm : 0.0;
    return relres <= tol;
  };
  const int max_iter = default_max_iterations(g);
  ScalarField x(g, Layout::cell);
  int it = 0;
  if (kind == SolverKind::spectral) {
    auto prec = [](const ScalarField& r) {
      ScalarField z = poisson_spectral(r);
      z *= -1.0;
      return z;
    };
    x = poisson_spectral(rhs);
    it = pcg(x, nrhs, apply, prec, done, max_iter);
  } else {
    it = pcg(x, nrhs, apply, [](const ScalarField& r) { return r; }, done, max_iter);
  }
  if (stats) *stats = {std::abs(it), relres};
  if (it < 0) {
    std::ostringstream os;
    os << "Poisson solve did not converge after " << -it << " iterations, relative residual "
       << relres;
    throw SolverError(os.str(), relres);
  }
  subtract_mean(x);
  return x;
}

}  // namespace

int default_max_iterations(const Grid& grid) { return 10 * (grid.nx + grid.ny); }

ScalarField solve_poisson_neumann(const ScalarField& rhs, double tol, SolverKind kind,
                                  SolveStats* stats) {
  return poisson_impl(rhs, tol, kind, stats, 0.0);
}

Projection project_div_free(const VelocityField& u, double tol, SolverKind kind) {
  const ScalarField d = divergence_vector(u);
  const Grid& g = u.grid();
  const double scale = l2_norm(u) / g.min_spacing();
  Projection out;
  out.phi = poisson_impl(d, tol, kind, nullptr, scale);
  out.u = u;
  out.u -= gradient_scalar(out.phi);
  return out;
}

VelocityField helmholtz_apply(const VelocityField& u, double a, double b) {
  VelocityField out = u;
  out.clamp_walls();
  if (a == 0.0 && b == 0.0) return out;
  const VelocityField l1 = laplacian(out);
  if (b != 0.0) {
    const VelocityField l3 = laplacian(laplacian(l1));
    out.axpy(-b, l3);
  }
  out.axpy(-a, l1);
  return out;
}

VelocityField helmholtz_solve(const VelocityField& rhs_in, double a, double b, double tol,
                              SolverKind kind, SolveStats* stats) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw ParameterError("helmholtz_solve needs a, b >= 0");
  if (!(tol > 0.0)) throw ParameterError("Helmholtz tolerance must be positive");
  if (stats) *stats = {};
  VelocityField rhs = rhs_in;
  rhs.clamp_walls();
  if (a == 0.0 && b == 0.0) return rhs;
  const Grid& g = rhs.grid();
  if (is_zero(rhs.u.values()) && is_zero(rhs.v.values())) return VelocityField(g);
  const double bnorm = l2_norm(rhs);
  const double anorm = largest_symbol(g, a, b);
  double relres = 0.0;
  // normwise backward error
  auto done = [&](const VelocityField& r, const VelocityField& x) {
    relres = l2_norm(r) / (bnorm + anorm * l2_norm(x));
    return relres <= tol;
  };
  auto apply = [&](const VelocityField& x) { return helmholtz_apply(x, a, b); };
  const int max_iter = default_max_iterations(g);
  VelocityField x(g);
  int it = 0;
  if (kind == SolverKind::spectral) {
    auto prec = [&](const VelocityField& r) { return helmholtz_spectral(r, a, b); };
    x = prec(rhs);
    it = pcg(x, rhs, apply, prec, done, max_iter);
  } else {
    it = pcg(x, rhs, apply, [](const VelocityField& r) { return r; }, done, max_iter);
  }
  if (stats) *stats = {std::abs(it), relres};
  if (it < 0) {
    std::ostringstream os;
    os << "Helmholtz solve did not converge after " << -it << " iterations, backward error "
       << relres;
    throw SolverError(os.str(), relres);
  }
  x.clamp_walls();
  return x;
}

}  // namespace mvsim
