#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mvsim/errors.hpp"
#include "mvsim/magnetization.hpp"
#include "test_util.hpp"

using namespace mvsim;

namespace {

constexpr double pi = std::numbers::pi;

Vec3Field uniform(const Grid& g, const Vec3& m) {
  Vec3Field f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f.set(i, j, m);
  return f;
}

// Gaussian elimination with partial pivoting on the explicit matrix I - [m]x.
Vec3 solve_dense(const Vec3& m, const Vec3& g) {
  double a[3][4] = {{1.0, m[2], -m[1], g[0]}, {-m[2], 1.0, m[0], g[1]}, {m[1], -m[0], 1.0, g[2]}};
  for (int c = 0; c < 3; ++c) {
    int p = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    for (int k = 0; k < 4; ++k) std::swap(a[c][k], a[p][k]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return {a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]};
}

// Pointwise LLG right-hand side for a uniform field.
Vec3 ode_rhs(const Vec3& m, const Vec3& h, double eps) {
  const Vec3 g = -2.0 * m.cross(m.cross(h)) - (m.squaredNorm() - 1.0) / eps * m;
  return solve_dense(m, g);
}

Vec3 rk4(Vec3 m, const Vec3& h, double eps, double t, int steps) {
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Vec3 k1 = ode_rhs(m, h, eps);
    const Vec3 k2 = ode_rhs(m + 0.5 * dt * k1, h, eps);
    const Vec3 k3 = ode_rhs(m + 0.5 * dt * k2, h, eps);
    const Vec3 k4 = ode_rhs(m + dt * k3, h, eps);
    m += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return m;
}

Vec3Field smooth_unit_field(const Grid& g) {
  Vec3Field M(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.xc(i), y = g.yc(j);
      Vec3 v(0.6 * std::cos(pi * x) + 0.2 * std::cos(2 * pi * y), 0.5 * std::cos(pi * y) * std::cos(pi * x),
             1.0 + 0.3 * std::cos(2 * pi * x));
      M.set(i, j, v.normalized());
    }
  return M;
}

}  // namespace

TEST_CASE("skew_solve examples") {
  const Vec3 g(0.3, -1.2, 2.0);
  CHECK((skew_solve(Vec3::Zero(), g) - g).norm() == 0.0);
  const Vec3 x = skew_solve(Vec3(0, 0, 1), Vec3(1, 0, 0));
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x[2] == 0.0);
  const Vec3 z = skew_solve(Vec3(0, 0, 1), Vec3(0, 0, 1));
  CHECK((z - Vec3(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("skew_solve agrees with a dense solve") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    const double scale = std::pow(10.0, 3.0 * (d(rng) + 1.0) / 2.0);
    const Vec3 m = scale * Vec3(d(rng), d(rng), d(rng));
    const Vec3 g(d(rng), d(rng), d(rng));
    const Vec3 x = skew_solve(m, g);
    const Vec3 y = solve_dense(m, g);
    CHECK((x - y).norm() <= 1e-10 * (1.0 + y.norm()));
    CHECK((x - m.cross(x) - g).norm() <= 1e-12 * (g.norm() + (1.0 + m.norm()) * x.norm()));
  }
}

TEST_CASE("cut-off and penalty functions") {
  const double k = 2.5;
  CHECK(theta_cutoff(0.5 * k, k) == 1.0);
  CHECK(theta_cutoff(1.5 * k, k) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(theta_cutoff(3.0 * k, k) == 0.0);
  CHECK(theta_cutoff(k, k) == 1.0);
  CHECK(theta_cutoff(2.0 * k, k) == 0.0);
  CHECK_THROWS_AS(theta_cutoff(1.0, 0.0), ParameterError);

  CHECK(penalty_g(-1.0) == 0.0);
  CHECK(penalty_G(-1.0) == 0.0);
  CHECK(penalty_g(0.5) == 0.5);
  CHECK(penalty_G(0.5) == 0.125);
  CHECK(penalty_g(2.0) == 1.0);
  CHECK(penalty_G(2.0) == 1.5);
  // G' = g away from the kinks, G >= 0, G = 0 iff s <= 0
  for (double s = -2.0; s < 3.0; s += 0.0137) {
    const double h = 1e-6;
    if (std::abs(s) > 2 * h && std::abs(s - 1.0) > 2 * h)
      CHECK((penalty_G(s + h) - penalty_G(s - h)) / (2 * h) == doctest::Approx(penalty_g(s)).epsilon(1e-8));
    CHECK(penalty_G(s) >= 0.0);
    CHECK((penalty_G(s) == 0.0) == (s <= 0.0));
  }
}

TEST_CASE("llg_rhs examples") {
  const Grid g = Grid::make(1.0, 1.0, 6, 6);
  const Vec3Field zeroH(g);
  CHECK(linf_norm(llg_rhs(uniform(g, Vec3(0, 0, 1)), zeroH, {0.1, false})) == 0.0);
  const Vec3Field r = llg_rhs(uniform(g, Vec3(2, 0, 0)), zeroH, {1.0, false});
  CHECK((r.at(3, 3) - Vec3(-6, 0, 0)).norm() == 0.0);
  const Vec3Field rh = llg_rhs(uniform(g, Vec3(0, 0, 1)), uniform(g, Vec3(1, 0, 0)), {1.0, false});
  CHECK((rh.at(2, 4) - Vec3(2, 0, 0)).norm() == 0.0);
}

TEST_CASE("llg_step stationary state is bitwise fixed") {
  const Grid g = Grid::make(1.0, 1.0, 8, 8);
  const Vec3Field M = uniform(g, Vec3(0, 0, 1));
  const LlgStep s = llg_step(M, VelocityField(g), Vec3Field(g), 1e-3, {0.1, false}, 0.0);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t p = 0; p < M.c[k].size(); ++p) CHECK(s.M.c[k].values()[p] == M.c[k].values()[p]);
  CHECK(linf_norm(s.V) == 0.0);
}

TEST_CASE("llg_step stability gate") {
  const Grid g = Grid::make(1.0, 1.0, 16, 16);
  const Vec3Field M = uniform(g, Vec3(0, 0, 1));
  const double lim = llg_stable_dt(g, 0.1, 0.0, 1.0);
  CHECK(lim == doctest::Approx(1.0 / (8.0 * 256.0)));
  CHECK_THROWS_AS(llg_step(M, VelocityField(g), Vec3Field(g), 1.01 * lim, {0.1, false}, 0.0), ConfigError);
  CHECK_NOTHROW(llg_step(M, VelocityField(g), Vec3Field(g), lim, {0.1, false}, 0.0));
  VelocityField u(g);
  u.u.fill(1000.0);
  u.clamp_walls();
  CHECK(llg_stable_dt(g, 0.1, u.max_abs(), 0.5) == doctest::Approx(0.5 * g.hx / 1000.0));
}

TEST_CASE("penalty relaxation follows the scalar recursion and the exact solution") {
  const Grid g = Grid::make(4.0, 4.0, 4, 4);
  const PenaltySpec spec{1.0, false};
  Vec3Field M = uniform(g, Vec3(2, 0, 0));
  double r = 2.0;
  double prev = 2.0;
  for (int n = 0; n < 100; ++n) {
    const LlgStep s = llg_step(M, VelocityField(g), Vec3Field(g), 0.01, spec, 0.0);
    // the d_llg increment is the squared drift velocity
    const double rate = r * (r * r - 1.0);
    CHECK(std::abs(s.V.at(1, 2).norm() - rate) <= 1e-12 * rate);
    M = s.M;
    r = r * (1.0 - 0.01 * (r * r - 1.0));
    CHECK(std::abs(M.at(1, 2)[0] - r) <= 1e-12);
    CHECK(M.at(1, 2)[0] < prev);
    CHECK(M.at(1, 2)[0] > 1.0);
    prev = M.at(1, 2)[0];
  }
  // exact solution: 1/|M|^2 = 1 - (1 - 1/|M0|^2) exp(-2t/eps)
  const double exact = 1.0 / std::sqrt(1.0 - 0.75 * std::exp(-2.0));
  Vec3Field Mf = uniform(g, Vec3(2, 0, 0));
  const double dt = 2e-6;
  for (int n = 0; n < 500000; ++n) Mf = llg_step(Mf, VelocityField(g), Vec3Field(g), dt, spec, 0.0).M;
  CHECK(std::abs(Mf.at(0, 0).norm() - exact) <= 1e-6);
}

TEST_CASE("semi-implicit penalty relaxes toward the sphere") {
  const Grid g = Grid::make(4.0, 4.0, 4, 4);
  Vec3Field M = uniform(g, Vec3(2, 0, 0));
  for (int n = 0; n < 200; ++n) M = llg_step(M, VelocityField(g), Vec3Field(g), 0.01, {1.0, true}, 0.0).M;
  const double exact = 1.0 / std::sqrt(1.0 - 0.75 * std::exp(-4.0));
  CHECK(std::abs(M.at(0, 0).norm() - exact) < 1e-2);
}

TEST_CASE("precession against the pointwise ODE oracle") {
  const Grid g = Grid::make(8.0, 8.0, 4, 4);
  const Vec3 h(0, 0, 0.8);
  const double eps = 1.0;
  const double t = 0.5;
  const Vec3 ref = rk4(Vec3(1, 0, 0), h, eps, t, 4000);
  CHECK(ref[2] > 0.1);  // relaxes toward H
  double prev = 0.0;
  for (int steps : {200, 400, 800}) {
    Vec3Field M = uniform(g, Vec3(1, 0, 0));
    const Vec3Field H = uniform(g, h);
    for (int n = 0; n < steps; ++n) M = llg_step(M, VelocityField(g), H, t / steps, {eps, false}, 0.0).M;
    const double err = (M.at(2, 2) - ref).norm();
    CHECK(err < 5.0 * t / steps);
    if (prev > 0.0) CHECK(std::log2(prev / err) > 0.9);
    prev = err;
  }
}

TEST_CASE("cut-off is neutral inside the unit ball") {
  const Grid g = Grid::make(1.0, 1.0, 12, 12);
  const Vec3Field M = smooth_unit_field(g);
  Vec3Field Ms = M;
  Ms *= 0.9;
  const Vec3Field H = uniform(g, Vec3(0.1, 0.2, 0.3));
  const double dt = 0.2 * llg_stable_dt(g, 0.1, 0.0, 1.0);
  const LlgStep a = llg_step(Ms, VelocityField(g), H, dt, {0.1, false}, 0.0);
  const LlgStep b = llg_step(Ms, VelocityField(g), H, dt, {0.1, false}, 1.0);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t p = 0; p < a.M.c[k].size(); ++p) CHECK(a.M.c[k].values()[p] == b.M.c[k].values()[p]);
  // and active outside
  Vec3Field Mb = M;
  Mb *= 3.0;
  const LlgStep c = llg_step(Mb, VelocityField(g), H, dt / 10, {0.1, false}, 1.0);
  const LlgStep d = llg_step(Mb, VelocityField(g), H, dt / 10, {0.1, false}, 0.0);
  Vec3Field diff = c.M;
  diff -= d.M;
  CHECK(linf_norm(diff) > 0.0);
}

TEST_CASE("llg_form_eval examples") {
  const Grid g = Grid::make(1.0, 1.0, 8, 8);
  const Vec3Field M = uniform(g, Vec3(0, 1, 0));
  const LlgForms f = llg_form_eval(M, VelocityField(g), Vec3Field(g), Vec3Field(g));
  CHECK(linf_norm(f.r1) == 0.0);
  CHECK(linf_norm(f.r2) == 0.0);
  CHECK(linf_norm(f.r3) == 0.0);
  Vec3Field bad = M;
  bad.set(3, 5, Vec3(0, 1.001, 0));
  try {
    llg_form_eval(bad, VelocityField(g), Vec3Field(g), Vec3Field(g));
    CHECK(false);
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("(3, 5)") != std::string::npos);
  }
}

TEST_CASE("llg forms agree to second order under refinement") {
  double prev2 = 0.0;
  for (int n : {32, 64, 128}) {
    const Grid g = Grid::make(1.0, 1.0, n, n);
    const Vec3Field M = smooth_unit_field(g);
    Vec3Field H(g);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) H.set(i, j, Vec3(std::cos(pi * g.xc(i)), 0.5, std::cos(pi * g.yc(j))));
    const LlgForms first = llg_form_eval(M, VelocityField(g), H, Vec3Field(g));
    Vec3Field Mdot = first.r1;  // form 1 with zero Mdot
    const LlgForms f = llg_form_eval(M, VelocityField(g), H, Mdot);
    CHECK(linf_norm(f.r1) < 1e-10 * linf_norm(Mdot));
    CHECK(linf_norm(f.r3) < 1e-11 * linf_norm(Mdot));
    const double e2 = linf_norm(f.r2);
    if (prev2 > 0.0) CHECK(std::log2(prev2 / e2) > 1.8);
    prev2 = e2;
  }
}

TEST_CASE("triple product identity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int t = 0; t < 100000; ++t) {
    const Vec3 a(d(rng), d(rng), d(rng)), b(d(rng), d(rng), d(rng)), c(d(rng), d(rng), d(rng));
    const Vec3 lhs = a.cross(b.cross(c));
    const Vec3 rhs = a.dot(c) * b - a.dot(b) * c;
    REQUIRE((lhs - rhs).norm() <= 1e-13);
  }
}

TEST_CASE("sphere_defect examples") {
  const Grid g = Grid::make(1.0, 1.0, 10, 10);
  SphereDefect s = sphere_defect(uniform(g, Vec3(0, 0, 1)), 0.1);
  CHECK(s.l2 == 0.0);
  CHECK(s.maxabs == 1.0);
  CHECK(s.penalty_energy == 0.0);
  s = sphere_defect(uniform(g, Vec3(2, 0, 0)), 1.0);
  CHECK(s.l2 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(s.maxabs == 2.0);
  CHECK(s.penalty_energy == doctest::Approx(2.25).epsilon(1e-14));
  s = sphere_defect(Vec3Field(g), 0.5);
  CHECK(s.l2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.maxabs == 0.0);
  CHECK(s.penalty_energy == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(lyapunov_G(uniform(g, Vec3(2, 0, 0))) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(lyapunov_G(Vec3Field(g)) == 0.0);
}
