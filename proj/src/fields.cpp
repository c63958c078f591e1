#include "mvsim/fields.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "mvsim/errors.hpp"

namespace mvsim {

Grid Grid::make(double lx, double ly, int nx, int ny) {
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw ParameterError("grid lengths must be positive and finite");
  if (nx < 4 || ny < 4) throw ParameterError("grid needs at least 4 cells per direction");
  Grid g;
  g.lx = lx;
  g.ly = ly;
  g.nx = nx;
  g.ny = ny;
  g.hx = lx / nx;
  g.hy = ly / ny;
  return g;
}

const char* layout_name(Layout layout) {
  switch (layout) {
    case Layout::cell: return "cell";
    case Layout::xface: return "xface";
    case Layout::yface: return "yface";
  }
  return "cell";
}

Layout parse_layout(const std::string& name) {
  if (name == "cell") return Layout::cell;
  if (name == "xface") return Layout::xface;
  if (name == "yface") return Layout::yface;
  throw ParameterError("unknown layout '" + name + "'");
}

ScalarField::ScalarField(const Grid& grid, Layout layout, double value)
    : grid_(grid), layout_(layout) {
  if (grid.nx < 1 || grid.ny < 1) throw ShapeError("field on an empty grid");
  ni_ = grid.nx + (layout == Layout::xface ? 1 : 0);
  nj_ = grid.ny + (layout == Layout::yface ? 1 : 0);
  data_.assign(static_cast<std::size_t>(ni_) * static_cast<std::size_t>(nj_), value);
}

void ScalarField::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool ScalarField::all_finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

void require_same_shape(const ScalarField& a, const ScalarField& b, const char* what) {
  if (a.layout() != b.layout() || !(a.grid() == b.grid()))
    throw ShapeError(std::string(what) + ": fields differ in grid or layout");
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t p = 0; p < data_.size(); ++p) data_[p] += other.data_[p];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t p = 0; p < data_.size(); ++p) data_[p] -= other.data_[p];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

void ScalarField::axpy(double s, const ScalarField& other) {
  require_same_shape(*this, other, "axpy");
  for (std::size_t p = 0; p < data_.size(); ++p) data_[p] += s * other.data_[p];
}

VelocityField& VelocityField::operator+=(const VelocityField& o) {
  u += o.u;
  v += o.v;
  return *this;
}

VelocityField& VelocityField::operator-=(const VelocityField& o) {
  u -= o.u;
  v -= o.v;
  return *this;
}

VelocityField& VelocityField::operator*=(double s) {
  u *= s;
  v *= s;
  return *this;
}

void VelocityField::axpy(double s, const VelocityField& o) {
  u.axpy(s, o.u);
  v.axpy(s, o.v);
}

void VelocityField::clamp_walls() {
  const int nx = grid().nx;
  const int ny = grid().ny;
  for (int j = 0; j < ny; ++j) {
    u(0, j) = 0.0;
    u(nx, j) = 0.0;
  }
  for (int i = 0; i < nx; ++i) {
    v(i, 0) = 0.0;
    v(i, ny) = 0.0;
  }
}

double VelocityField::max_abs() const { return std::max(linf_norm(u), linf_norm(v)); }

MatrixField MatrixField::identity(const Grid& grid) {
  MatrixField f(grid);
  f.c[0].fill(1.0);
  f.c[3].fill(1.0);
  return f;
}

void SimParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("eps must be positive");
  if (!(f_diffusion >= 0.0)) throw ParameterError("f_diffusion must be non-negative");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be non-negative");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be non-negative");
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0) throw ParameterError("cfl_safety must lie in (0, 1]");
  if (!(poisson_tol > 0.0)) throw ParameterError("poisson_tol must be positive");
  if (!(helmholtz_tol > 0.0)) throw ParameterError("helmholtz_tol must be positive");
  if (!(cutoff_k >= 0.0)) throw ParameterError("cutoff_k must be non-negative");
  if (cutoff_k > 0.0 && cutoff_k < 1.0) throw ParameterError("cutoff_k must be >= 1 when enabled");
  if (!(viscosity >= 0.0)) throw ParameterError("viscosity must be non-negative");
}

double l2_inner(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a, b, "l2_inner");
  const auto x = a.values();
  const auto y = b.values();
  double s = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) s += x[p] * y[p];
  return s * a.grid().cell_volume();
}

double l2_inner(const VelocityField& a, const VelocityField& b) {
  return l2_inner(a.u, b.u) + l2_inner(a.v, b.v);
}

double linf_norm(const ScalarField& a) {
  double best = 0.0;
  for (double x : a.values()) best = std::max(best, std::abs(x));
  return best;
}

double linf_norm(const VelocityField& a) { return a.max_abs(); }

double mean(const ScalarField& a) {
  double s = 0.0;
  for (double x : a.values()) s += x;
  return a.size() ? s / static_cast<double>(a.size()) : 0.0;
}

void write_snapshot(std::ostream& os, const std::string& name, double t,
                    std::span<const ScalarField* const> components) {
  if (components.empty()) throw ShapeError("snapshot needs at least one component");
  const ScalarField& first = *components[0];
  for (const ScalarField* c : components) require_same_shape(first, *c, "write_snapshot");
  const Grid& g = first.grid();
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  os << "MVSIM1 " << name << ' ' << layout_name(first.layout()) << ' ' << g.nx << ' ' << g.ny
     << ' ' << components.size() << ' ' << num(g.lx) << ' ' << num(g.ly) << ' ' << num(t) << '\n';
  for (std::size_t p = 0; p < first.size(); ++p) {
    for (std::size_t k = 0; k < components.size(); ++k) {
      if (k) os << ' ';
      os << num(components[k]->values()[p]);
    }
    os << '\n';
  }
}

SnapshotRecord read_snapshot(std::istream& is) {
  std::string line;
  if (!std::getline(is >> std::ws, line)) throw ParameterError("snapshot: missing header");
  std::istringstream hs(line);
  std::string magic, layout;
  SnapshotRecord rec;
  int nx = 0, ny = 0;
  std::size_t ncomp = 0;
  double lx = 0.0, ly = 0.0;
  if (!(hs >> magic >> rec.name >> layout >> nx >> ny >> ncomp >> lx >> ly >> rec.t) ||
      magic != "MVSIM1" || ncomp == 0)
    throw ParameterError("snapshot: malformed header");
  const Grid g = Grid::make(lx, ly, nx, ny);
  const Layout lay = parse_layout(layout);
  rec.components.assign(ncomp, ScalarField(g, lay));
  const std::size_t n = rec.components[0].size();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t k = 0; k < ncomp; ++k) {
      std::string tok;
      if (!(is >> tok)) throw ParameterError("snapshot: truncated data");
      rec.components[k].values()[p] = std::stod(tok);
    }
  }
  return rec;
}

}  // namespace mvsim
