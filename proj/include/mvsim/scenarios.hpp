/// @file scenarios.hpp
/// @brief Initial-condition presets and external fields.
///
/// A scenario is one preset or several joined by '+', e.g. `vortex+bubble`.
/// Presets: rest, shear, vortex (velocity), bubble, offsphere-relax
/// (magnetization). At most one velocity and one magnetization preset.
/// Unset parts default to u = 0, M = (0, 0, 1). `rest` also sets F = 0.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mvsim/config.hpp"
#include "mvsim/fields.hpp"

namespace mvsim {

/// Throws ConfigError for unknown, repeated or conflicting presets.
std::vector<std::string> scenario_parts(const std::string& name);
void validate_scenario(const std::string& name);

/// Velocity from a stream function sampled at cell corners: exactly
/// divergence-free; clamped when psi and its gradient vanish on the walls.
VelocityField velocity_from_stream(const Grid& grid, const std::function<double(double, double)>& psi);

/// Smooth unit field M = (2w, 1 - |w|^2) / (1 + |w|^2) with
/// w = a (x - c) (1 - |x - c|^2 / R^2)^2 inside R, a = 3 / R.
Vec3 bubble_field(double x, double y, const Vec2& center, double radius);

StateSnapshot initial_state(const RunConfig& c);
Vec3Field external_field(const RunConfig& c);

}  // namespace mvsim
