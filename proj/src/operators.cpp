#include "mvsim/operators.hpp"

#include "mvsim/errors.hpp"
#include "mvsim/parallel.hpp"

namespace mvsim {

namespace {

double ghost_value(double f0, double f1, BcMode mode) {
  switch (mode) {
    case BcMode::VelocityClamped: return -f0;
    case BcMode::NeumannZero: return f0;
    case BcMode::ExtrapolateFirstOrder: return 2.0 * f0 - f1;
  }
  return f0;
}

// Centered difference along `axis` with ghosts f_{-1} = sign * f_0.
ScalarField centered(const ScalarField& f, int axis, double sign) {
  if (f.layout() != Layout::cell) throw ShapeError("centered difference needs a cell field");
  const Grid& g = f.grid();
  ScalarField out(g, Layout::cell);
  const int nx = g.nx, ny = g.ny;
  if (axis == 0) {
    const double s = 0.5 / g.hx;
    parallel_for(ny, [&](int j) {
      for (int i = 0; i < nx; ++i) {
        const double l = i > 0 ? f(i - 1, j) : sign * f(0, j);
        const double r = i + 1 < nx ? f(i + 1, j) : sign * f(nx - 1, j);
        out(i, j) = (r - l) * s;
      }
    });
  } else {
    const double s = 0.5 / g.hy;
    parallel_for(ny, [&](int j) {
      for (int i = 0; i < nx; ++i) {
        const double l = j > 0 ? f(i, j - 1) : sign * f(i, 0);
        const double r = j + 1 < ny ? f(i, j + 1) : sign * f(i, ny - 1);
        out(i, j) = (r - l) * s;
      }
    });
  }
  return out;
}

ScalarField average_to_cells(const ScalarField& w) {
  const Grid& g = w.grid();
  ScalarField out(g, Layout::cell);
  if (w.layout() == Layout::xface) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out(i, j) = 0.5 * (w(i, j) + w(i + 1, j));
  } else if (w.layout() == Layout::yface) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out(i, j) = 0.5 * (w(i, j) + w(i, j + 1));
  } else {
    throw ShapeError("average_to_cells needs a face field");
  }
  return out;
}

void require_cell(const ScalarField& f, const char* what) {
  if (f.layout() != Layout::cell) throw ShapeError(std::string(what) + " needs a cell field");
}

void require_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw ShapeError(std::string(what) + ": grids differ");
}

// Contribution of one dual face to (a . grad) f at the node with value fc.
// side = +1 for the face on the increasing side, -1 otherwise.
inline double face_term(double a, double fc, double fn, double side, double h, bool upwind) {
  double r = side * a * (fn - fc) * (0.5 / h);
  if (upwind) r += 0.5 * std::abs(a) * (fc - fn) / h;
  return r;
}

}  // namespace

VelocityField gradient_scalar(const ScalarField& phi) {
  require_cell(phi, "gradient_scalar");
  const Grid& g = phi.grid();
  VelocityField out(g);
  const double ix = 1.0 / g.hx, iy = 1.0 / g.hy;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) out.u(i, j) = (phi(i, j) - phi(i - 1, j)) * ix;
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.v(i, j) = (phi(i, j) - phi(i, j - 1)) * iy;
  return out;
}

ScalarField divergence_vector(const VelocityField& u) {
  const Grid& g = u.grid();
  require_grid(g, u.v.grid(), "divergence_vector");
  ScalarField out(g, Layout::cell);
  const double ix = 1.0 / g.hx, iy = 1.0 / g.hy;
  parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i)
      out(i, j) = (u.u(i + 1, j) - u.u(i, j)) * ix + (u.v(i, j + 1) - u.v(i, j)) * iy;
  });
  return out;
}

VelocityField divergence_matrix(const MatrixField& P) {
  const Grid& g = P.grid();
  // Column divergence d_s = sum_r d_r P_rs at cell centers.
  ScalarField d0 = diff_centered(P(0, 0), 0);
  d0 += diff_centered(P(1, 0), 1);
  ScalarField d1 = diff_centered(P(0, 1), 0);
  d1 += diff_centered(P(1, 1), 1);
  VelocityField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) out.u(i, j) = 0.5 * (d0(i - 1, j) + d0(i, j));
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.v(i, j) = 0.5 * (d1(i, j - 1) + d1(i, j));
  return out;
}

ScalarField laplacian(const ScalarField& f, BcMode mode) {
  const int ni = f.ni(), nj = f.nj();
  const Grid& g = f.grid();
  const bool x_nodes = f.layout() == Layout::xface;
  const bool y_nodes = f.layout() == Layout::yface;
  const bool clamped = mode == BcMode::VelocityClamped;
  const double ix2 = 1.0 / (g.hx * g.hx), iy2 = 1.0 / (g.hy * g.hy);
  ScalarField out(g, f.layout());
  auto edge = [&](int i, int j) {
    {
      const bool x_wall = x_nodes && (i == 0 || i == ni - 1);
      const bool y_wall = y_nodes && (j == 0 || j == nj - 1);
      if (clamped && (x_wall || y_wall)) {
        out(i, j) = 0.0;
        return;
      }
      const double c = f(i, j);
      double l, r, b, t;
      if (x_nodes && !clamped) {
        // Wall node of a face layout: reflect about the wall node itself.
        l = i > 0 ? f(i - 1, j) : (mode == BcMode::NeumannZero ? f(1, j) : 2.0 * c - f(1, j));
        r = i + 1 < ni ? f(i + 1, j)
                       : (mode == BcMode::NeumannZero ? f(ni - 2, j) : 2.0 * c - f(ni - 2, j));
      } else {
        l = i > 0 ? f(i - 1, j) : ghost_value(c, ni > 1 ? f(1, j) : c, mode);
        r = i + 1 < ni ? f(i + 1, j) : ghost_value(c, ni > 1 ? f(ni - 2, j) : c, mode);
      }
      if (y_nodes && !clamped) {
        b = j > 0 ? f(i, j - 1) : (mode == BcMode::NeumannZero ? f(i, 1) : 2.0 * c - f(i, 1));
        t = j + 1 < nj ? f(i, j + 1)
                       : (mode == BcMode::NeumannZero ? f(i, nj - 2) : 2.0 * c - f(i, nj - 2));
      } else {
        b = j > 0 ? f(i, j - 1) : ghost_value(c, nj > 1 ? f(i, 1) : c, mode);
        t = j + 1 < nj ? f(i, j + 1) : ghost_value(c, nj > 1 ? f(i, nj - 2) : c, mode);
      }
      out(i, j) = (l - 2.0 * c + r) * ix2 + (b - 2.0 * c + t) * iy2;
    }
  };
  parallel_for(nj, [&](int j) {
    if (j == 0 || j == nj - 1 || ni < 3) {
      for (int i = 0; i < ni; ++i) edge(i, j);
      return;
    }
    edge(0, j);
    const double* fc = &f.values()[static_cast<std::size_t>(ni * j)];
    const double* fb = fc - ni;
    const double* ft = fc + ni;
    double* o = &out(0, j);
    for (int i = 1; i < ni - 1; ++i)
      o[i] = (fc[i - 1] - 2.0 * fc[i] + fc[i + 1]) * ix2 + (fb[i] - 2.0 * fc[i] + ft[i]) * iy2;
    edge(ni - 1, j);
  });
  return out;
}

VelocityField laplacian(const VelocityField& u) {
  VelocityField out;
  out.u = laplacian(u.u, BcMode::VelocityClamped);
  out.v = laplacian(u.v, BcMode::VelocityClamped);
  return out;
}

Vec3Field laplacian(const Vec3Field& f, BcMode mode) {
  Vec3Field out;
  for (std::size_t k = 0; k < 3; ++k) out.c[k] = laplacian(f.c[k], mode);
  return out;
}

MatrixField laplacian(const MatrixField& f, BcMode mode) {
  MatrixField out;
  for (std::size_t k = 0; k < 4; ++k) out.c[k] = laplacian(f.c[k], mode);
  return out;
}

VelocityField trilaplacian(const VelocityField& u) {
  return laplacian(laplacian(laplacian(u)));
}

MatrixField jacobian(const VelocityField& u) {
  const ScalarField au = average_to_cells(u.u);
  const ScalarField av = average_to_cells(u.v);
  MatrixField J;
  J(0, 0) = centered(au, 0, -1.0);
  J(0, 1) = centered(au, 1, -1.0);
  J(1, 0) = centered(av, 0, -1.0);
  J(1, 1) = centered(av, 1, -1.0);
  return J;
}

Vec2Field cell_velocity(const VelocityField& u) {
  Vec2Field out;
  out.c[0] = average_to_cells(u.u);
  out.c[1] = average_to_cells(u.v);
  return out;
}

ScalarField diff_centered(const ScalarField& f, int axis) { return centered(f, axis, 1.0); }

double dirichlet_form(const ScalarField& f) {
  require_cell(f, "dirichlet_form");
  const Grid& g = f.grid();
  double sx = 0.0, sy = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const double d = f(i, j) - f(i - 1, j);
      sx += d * d;
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double d = f(i, j) - f(i, j - 1);
      sy += d * d;
    }
  return (sx / (g.hx * g.hx) + sy / (g.hy * g.hy)) * g.cell_volume();
}

ScalarField advect(const VelocityField& u, const ScalarField& f, AdvectionScheme scheme) {
  require_cell(f, "advect");
  require_grid(u.grid(), f.grid(), "advect");
  const Grid& g = f.grid();
  const bool up = scheme == AdvectionScheme::upwind;
  const int nx = g.nx, ny = g.ny;
  ScalarField out(g, Layout::cell);
  parallel_for(ny, [&](int j) {
    for (int i = 0; i < nx; ++i) {
      const double c = f(i, j);
      // mirror ghosts at walls
      const double fe = i + 1 < nx ? f(i + 1, j) : c;
      const double fw = i > 0 ? f(i - 1, j) : c;
      const double fn = j + 1 < ny ? f(i, j + 1) : c;
      const double fs = j > 0 ? f(i, j - 1) : c;
      out(i, j) = face_term(u.u(i + 1, j), c, fe, 1.0, g.hx, up) +
                  face_term(u.u(i, j), c, fw, -1.0, g.hx, up) +
                  face_term(u.v(i, j + 1), c, fn, 1.0, g.hy, up) +
                  face_term(u.v(i, j), c, fs, -1.0, g.hy, up);
    }
  });
  return out;
}

Vec3Field advect(const VelocityField& u, const Vec3Field& f, AdvectionScheme scheme) {
  Vec3Field out;
  for (std::size_t k = 0; k < 3; ++k) out.c[k] = advect(u, f.c[k], scheme);
  return out;
}

MatrixField advect(const VelocityField& u, const MatrixField& f, AdvectionScheme scheme) {
  MatrixField out;
  for (std::size_t k = 0; k < 4; ++k) out.c[k] = advect(u, f.c[k], scheme);
  return out;
}

VelocityField advect(const VelocityField& a, const VelocityField& w, AdvectionScheme scheme) {
  const Grid& g = w.grid();
  require_grid(a.grid(), g, "advect");
  const bool up = scheme == AdvectionScheme::upwind;
  const int nx = g.nx, ny = g.ny;
  VelocityField out(g);
  // x-faces: dual cell spans [x_{i-1/2}, x_{i+1/2}] x [y_j - h/2, y_j + h/2].
  parallel_for(ny, [&](int j) {
    for (int i = 1; i < nx; ++i) {
      const double c = w.u(i, j);
      const double ae = 0.5 * (a.u(i, j) + a.u(i + 1, j));
      const double aw = 0.5 * (a.u(i - 1, j) + a.u(i, j));
      const double an = 0.5 * (a.v(i - 1, j + 1) + a.v(i, j + 1));
      const double as = 0.5 * (a.v(i - 1, j) + a.v(i, j));
      const double wn = j + 1 < ny ? w.u(i, j + 1) : -c;
      const double ws = j > 0 ? w.u(i, j - 1) : -c;
      out.u(i, j) = face_term(ae, c, w.u(i + 1, j), 1.0, g.hx, up) +
                    face_term(aw, c, w.u(i - 1, j), -1.0, g.hx, up) +
                    face_term(an, c, wn, 1.0, g.hy, up) + face_term(as, c, ws, -1.0, g.hy, up);
    }
  });
  parallel_for(ny - 1, [&](int jm) {
    const int j = jm + 1;
    for (int i = 0; i < nx; ++i) {
      const double c = w.v(i, j);
      const double an = 0.5 * (a.v(i, j) + a.v(i, j + 1));
      const double as = 0.5 * (a.v(i, j - 1) + a.v(i, j));
      const double ae = 0.5 * (a.u(i + 1, j - 1) + a.u(i + 1, j));
      const double aw = 0.5 * (a.u(i, j - 1) + a.u(i, j));
      const double we = i + 1 < nx ? w.v(i + 1, j) : -c;
      const double ww = i > 0 ? w.v(i - 1, j) : -c;
      out.v(i, j) = face_term(an, c, w.v(i, j + 1), 1.0, g.hy, up) +
                    face_term(as, c, w.v(i, j - 1), -1.0, g.hy, up) +
                    face_term(ae, c, we, 1.0, g.hx, up) + face_term(aw, c, ww, -1.0, g.hx, up);
    }
  });
  return out;
}

}  // namespace mvsim
