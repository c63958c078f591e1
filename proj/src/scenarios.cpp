#include "mvsim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mvsim/deformation.hpp"
#include "mvsim/errors.hpp"

namespace mvsim {

namespace {

const double kPi = std::acos(-1.0);

bool is_velocity(const std::string& p) { return p == "shear" || p == "vortex"; }
bool is_magnetic(const std::string& p) { return p == "bubble" || p == "offsphere-relax"; }

double sin2(double z) {
  const double s = std::sin(z);
  return s * s;
}

double bump4(double q) { return q < 1.0 ? std::pow(1.0 - q, 4) : 0.0; }

}  // namespace

std::vector<std::string> scenario_parts(const std::string& name) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto plus = name.find('+', start);
    parts.push_back(name.substr(start, plus == std::string::npos ? std::string::npos : plus - start));
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  int nu = 0, nm = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const std::string& p = parts[k];
    if (p != "rest" && !is_velocity(p) && !is_magnetic(p)) throw ConfigError("unknown scenario preset '" + p + "'");
    for (std::size_t q = 0; q < k; ++q)
      if (parts[q] == p) throw ConfigError("scenario preset '" + p + "' repeated");
    nu += is_velocity(p);
    nm += is_magnetic(p);
  }
  if (nu > 1) throw ConfigError("scenario combines two velocity presets");
  if (nm > 1) throw ConfigError("scenario combines two magnetization presets");
  return parts;
}

void validate_scenario(const std::string& name) { (void)scenario_parts(name); }

VelocityField velocity_from_stream(const Grid& g, const std::function<double(double, double)>& psi) {
  std::vector<double> c(static_cast<std::size_t>((g.nx + 1) * (g.ny + 1)));
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) c[static_cast<std::size_t>(i + (g.nx + 1) * j)] = psi(g.xf(i), g.yf(j));
  auto at = [&](int i, int j) { return c[static_cast<std::size_t>(i + (g.nx + 1) * j)]; };
  VelocityField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) u.u(i, j) = (at(i, j + 1) - at(i, j)) / g.hy;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) u.v(i, j) = -(at(i + 1, j) - at(i, j)) / g.hx;
  u.clamp_walls();
  return u;
}

Vec3 bubble_field(double x, double y, const Vec2& center, double radius) {
  const Vec2 d = Vec2(x, y) - center;
  const double q = d.squaredNorm() / (radius * radius);
  const Vec2 w = q < 1.0 ? Vec2((3.0 / radius) * (1.0 - q) * (1.0 - q) * d) : Vec2::Zero();
  const double w2 = w.squaredNorm();
  return Vec3(2.0 * w[0], 2.0 * w[1], 1.0 - w2) / (1.0 + w2);
}

StateSnapshot initial_state(const RunConfig& c) {
  c.validate();
  const Grid g = c.grid();
  const std::vector<std::string> parts = scenario_parts(c.scenario);
  StateSnapshot s(g);
  const double L = std::min(c.lx, c.ly);
  const Vec2 center(0.5 * c.lx, 0.5 * c.ly);

  for (const std::string& p : parts) {
    if (p == "vortex") {
      const double a = c.u_amplitude * L / kPi;
      s.u = velocity_from_stream(g, [&](double x, double y) { return a * sin2(kPi * x / c.lx) * sin2(kPi * y / c.ly); });
    } else if (p == "shear") {
      const double a = c.u_amplitude * L / (2.0 * kPi);
      s.u = velocity_from_stream(
          g, [&](double x, double y) { return a * sin2(kPi * x / c.lx) * sin2(2.0 * kPi * y / c.ly); });
    }
  }

  bool magnetic = false, offsphere = false;
  for (const std::string& p : parts) {
    if (p == "bubble") {
      magnetic = true;
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) s.M.set(i, j, bubble_field(g.xc(i), g.yc(j), center, 0.35 * L));
    } else if (p == "offsphere-relax") {
      magnetic = offsphere = true;
      const Vec3 m = c.offsphere_amplitude * Vec3(0.6, 0.0, 0.8);
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) s.M.set(i, j, m);
    }
  }
  if (!magnetic) s.M.c[2].fill(1.0);
  if (c.m_noise > 0.0) {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> d(-c.m_noise, c.m_noise);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        Vec3 m = s.M.at(i, j);
        for (int k = 0; k < 3; ++k) m[k] += d(rng);
        s.M.set(i, j, offsphere ? m : Vec3(m.normalized()));
      }
  }

  const bool at_rest = std::find(parts.begin(), parts.end(), "rest") != parts.end();
  if (at_rest || c.f_init == "zero") {
    s.F = MatrixField(g);
  } else if (c.f_init == "identity") {
    s.F = MatrixField::identity(g);
  } else {
    auto bump_cell = [&](const Vec2& ctr) {
      ScalarField phi(g, Layout::cell);
      const double R = 0.25 * L;
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          phi(i, j) = c.f_amplitude * L * bump4((Vec2(g.xc(i), g.yc(j)) - ctr).squaredNorm() / (R * R));
      return phi;
    };
    s.F = MatrixField::identity(g);
    s.F += curl_columns(bump_cell(Vec2(0.4 * c.lx, 0.6 * c.ly)), bump_cell(Vec2(0.6 * c.lx, 0.4 * c.ly)));
  }
  if (c.mollify_delta > 0.0) s.F = mollify_initial(s.F, c.mollify_delta);
  return s;
}

Vec3Field external_field(const RunConfig& c) {
  const Grid g = c.grid();
  Vec3Field H(g);
  if (c.hext == "uniform") {
    H.c[2].fill(c.hext_amplitude);
  } else if (c.hext == "gradient") {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        H.set(i, j, c.hext_amplitude * Vec3((g.xc(i) - 0.5 * c.lx) / c.lx, (g.yc(j) - 0.5 * c.ly) / c.ly, 0.0));
  }
  return H;
}

}  // namespace mvsim
