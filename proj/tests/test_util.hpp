#pragma once

#include <functional>
#include <random>

#include "mvsim/fields.hpp"

namespace testutil {

using namespace mvsim;

inline ScalarField sample(const Grid& g, Layout lay, const std::function<double(double, double)>& f) {
  ScalarField out(g, lay);
  for (int j = 0; j < out.nj(); ++j)
    for (int i = 0; i < out.ni(); ++i) {
      const double x = lay == Layout::xface ? g.xf(i) : g.xc(i);
      const double y = lay == Layout::yface ? g.yf(j) : g.yc(j);
      out(i, j) = f(x, y);
    }
  return out;
}

inline ScalarField random_field(const Grid& g, Layout lay, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField f(g, lay);
  for (double& x : f.values()) x = d(rng);
  return f;
}

inline VelocityField random_clamped(const Grid& g, std::mt19937_64& rng) {
  VelocityField u(g);
  u.u = random_field(g, Layout::xface, rng);
  u.v = random_field(g, Layout::yface, rng);
  u.clamp_walls();
  return u;
}

/// Velocity from a stream function sampled at cell corners; exactly
/// discretely divergence-free and clamped when psi vanishes on the boundary.
inline VelocityField from_stream(const Grid& g, const std::function<double(double, double)>& psi) {
  VelocityField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      u.u(i, j) = (psi(g.xf(i), g.yf(j + 1)) - psi(g.xf(i), g.yf(j))) / g.hy;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      u.v(i, j) = -(psi(g.xf(i + 1), g.yf(j)) - psi(g.xf(i), g.yf(j))) / g.hx;
  return u;
}

/// Random stream function vanishing on the boundary.
inline VelocityField random_div_free(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> c((g.nx + 1) * (g.ny + 1), 0.0);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) c[i + (g.nx + 1) * j] = d(rng);
  VelocityField u(g);
  auto psi = [&](int i, int j) { return c[i + (g.nx + 1) * j]; };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) u.u(i, j) = (psi(i, j + 1) - psi(i, j)) / g.hy;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) u.v(i, j) = -(psi(i + 1, j) - psi(i, j)) / g.hx;
  return u;
}

inline double max_interior(const ScalarField& f, int margin, const std::function<double(double)>& map =
                                                                    [](double v) { return std::abs(v); }) {
  double m = 0.0;
  for (int j = margin; j < f.nj() - margin; ++j)
    for (int i = margin; i < f.ni() - margin; ++i) m = std::max(m, map(f(i, j)));
  return m;
}

}  // namespace testutil
