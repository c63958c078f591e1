/// @file fields.hpp
/// @brief Rectangular MAC grid, field containers and L2/L-infinity arithmetic.
///
/// Pressure, magnetization and deformation gradient live at cell centers;
/// the velocity is staggered (x-component on x-faces, y-component on
/// y-faces). Node (i, j) of a layout is stored at i + ni * j, which makes the
/// data of a component a column-major ni x nj matrix.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mvsim {

using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

struct Grid {
  double lx = 1.0;
  double ly = 1.0;
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;

  /// Validates nx, ny >= 4 and positive lengths; throws ParameterError.
  static Grid make(double lx, double ly, int nx, int ny);

  double cell_volume() const { return hx * hy; }
  double xc(int i) const { return (i + 0.5) * hx; }
  double yc(int j) const { return (j + 0.5) * hy; }
  double xf(int i) const { return i * hx; }
  double yf(int j) const { return j * hy; }
  double min_spacing() const { return hx < hy ? hx : hy; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.nx == b.nx && a.ny == b.ny && a.lx == b.lx && a.ly == b.ly;
  }
};

enum class Layout { cell, xface, yface };

const char* layout_name(Layout layout);
Layout parse_layout(const std::string& name);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, Layout layout = Layout::cell, double value = 0.0);

  const Grid& grid() const { return grid_; }
  Layout layout() const { return layout_; }
  int ni() const { return ni_; }
  int nj() const { return nj_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i + ni_ * j)]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i + ni_ * j)]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  void fill(double value);
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);
  /// this += s * other
  void axpy(double s, const ScalarField& other);

  Eigen::Map<Eigen::MatrixXd> as_matrix() { return {data_.data(), ni_, nj_}; }
  Eigen::Map<const Eigen::MatrixXd> as_matrix() const { return {data_.data(), ni_, nj_}; }

 private:
  Grid grid_{};
  Layout layout_ = Layout::cell;
  int ni_ = 0;
  int nj_ = 0;
  std::vector<double> data_;
};

/// MAC velocity: u on x-faces ((nx+1) x ny), v on y-faces (nx x (ny+1)).
struct VelocityField {
  ScalarField u;
  ScalarField v;

  VelocityField() = default;
  explicit VelocityField(const Grid& grid)
      : u(grid, Layout::xface), v(grid, Layout::yface) {}

  const Grid& grid() const { return u.grid(); }
  VelocityField& operator+=(const VelocityField& o);
  VelocityField& operator-=(const VelocityField& o);
  VelocityField& operator*=(double s);
  void axpy(double s, const VelocityField& o);
  bool all_finite() const { return u.all_finite() && v.all_finite(); }
  /// Zeroes the normal components on the walls.
  void clamp_walls();
  double max_abs() const;
};

/// N cell-centered components.
template <std::size_t N>
struct CellVectorField {
  std::array<ScalarField, N> c;

  CellVectorField() = default;
  explicit CellVectorField(const Grid& grid) {
    for (auto& comp : c) comp = ScalarField(grid, Layout::cell);
  }

  const Grid& grid() const { return c[0].grid(); }
  static constexpr std::size_t components() { return N; }

  CellVectorField& operator+=(const CellVectorField& o) {
    for (std::size_t k = 0; k < N; ++k) c[k] += o.c[k];
    return *this;
  }
  CellVectorField& operator-=(const CellVectorField& o) {
    for (std::size_t k = 0; k < N; ++k) c[k] -= o.c[k];
    return *this;
  }
  CellVectorField& operator*=(double s) {
    for (auto& comp : c) comp *= s;
    return *this;
  }
  void axpy(double s, const CellVectorField& o) {
    for (std::size_t k = 0; k < N; ++k) c[k].axpy(s, o.c[k]);
  }
  bool all_finite() const {
    for (const auto& comp : c)
      if (!comp.all_finite()) return false;
    return true;
  }
};

struct Vec3Field : CellVectorField<3> {
  using CellVectorField<3>::CellVectorField;
  Vec3 at(int i, int j) const { return {c[0](i, j), c[1](i, j), c[2](i, j)}; }
  void set(int i, int j, const Vec3& m) {
    c[0](i, j) = m[0];
    c[1](i, j) = m[1];
    c[2](i, j) = m[2];
  }
};

using Vec2Field = CellVectorField<2>;

/// Cell-centered d x d matrix; component (r, s) is c[2 * r + s].
struct MatrixField : CellVectorField<4> {
  using CellVectorField<4>::CellVectorField;
  ScalarField& operator()(int r, int s) { return c[static_cast<std::size_t>(2 * r + s)]; }
  const ScalarField& operator()(int r, int s) const { return c[static_cast<std::size_t>(2 * r + s)]; }
  Mat2 at(int i, int j) const {
    Mat2 a;
    a << c[0](i, j), c[1](i, j), c[2](i, j), c[3](i, j);
    return a;
  }
  void set(int i, int j, const Mat2& a) {
    c[0](i, j) = a(0, 0);
    c[1](i, j) = a(0, 1);
    c[2](i, j) = a(1, 0);
    c[3](i, j) = a(1, 1);
  }
  static MatrixField identity(const Grid& grid);
};

enum class AdvectionScheme { upwind, central };
enum class SolverKind { spectral, cg };
enum class MagneticForceForm { consistent, stress };

struct SimParams {
  double eps = 1e-2;
  double f_diffusion = 0.0;
  double dt = 0.0;  ///< 0 selects the stability-limited step
  double t_end = 0.1;
  double cfl_safety = 0.5;
  double poisson_tol = 1e-10;
  double helmholtz_tol = 1e-10;
  bool hyperviscosity_on = true;
  double cutoff_k = 0.0;  ///< 0 disables the cut-off
  double viscosity = 1.0;
  bool semi_implicit = false;
  bool couple_u = true;  ///< false freezes the velocity at its initial value
  AdvectionScheme m_advection = AdvectionScheme::upwind;
  AdvectionScheme f_advection = AdvectionScheme::central;
  AdvectionScheme u_advection = AdvectionScheme::central;
  SolverKind solver = SolverKind::spectral;
  MagneticForceForm magnetic_force = MagneticForceForm::consistent;

  /// Throws ParameterError on eps <= 0, dt < 0, non-positive tolerances etc.
  void validate() const;
  bool operator==(const SimParams&) const = default;
};

struct StateSnapshot {
  double t = 0.0;
  VelocityField u;
  ScalarField p;
  MatrixField F;
  Vec3Field M;

  StateSnapshot() = default;
  explicit StateSnapshot(const Grid& grid)
      : u(grid), p(grid, Layout::cell), F(grid), M(grid) {}
  const Grid& grid() const { return p.grid(); }
};

// ---------------------------------------------------------------------------
// Inner products: sum over nodes of (a . b) * cell volume (midpoint rule).

double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_inner(const VelocityField& a, const VelocityField& b);
template <std::size_t N>
double l2_inner(const CellVectorField<N>& a, const CellVectorField<N>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < N; ++k) s += l2_inner(a.c[k], b.c[k]);
  return s;
}

template <class F>
double l2_norm(const F& a) {
  const double s = l2_inner(a, a);
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

double linf_norm(const ScalarField& a);
double linf_norm(const VelocityField& a);
/// Maximum over cells of the Euclidean length of the vector.
template <std::size_t N>
double linf_norm(const CellVectorField<N>& a) {
  const std::size_t n = a.c[0].size();
  double best = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    double s = 0.0;
    for (std::size_t k = 0; k < N; ++k) s += a.c[k].values()[p] * a.c[k].values()[p];
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

double mean(const ScalarField& a);

/// Throws ShapeError unless grids and layouts agree.
void require_same_shape(const ScalarField& a, const ScalarField& b, const char* what);

// ---------------------------------------------------------------------------
// Snapshot files: header `MVSIM1 <name> <layout> <nx> <ny> <ncomp> <Lx> <Ly> <t>`
// then one node per line with components separated by spaces.

struct SnapshotRecord {
  std::string name;
  double t = 0.0;
  std::vector<ScalarField> components;
};

void write_snapshot(std::ostream& os, const std::string& name, double t,
                    std::span<const ScalarField* const> components);
SnapshotRecord read_snapshot(std::istream& is);

}  // namespace mvsim

