#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>

#include "simcouple/mass_spring.hpp"
#include "simcouple/math.hpp"

namespace simcouple {

/// Radial wind emitted by a (possibly moving) source, e.g. a passing cyclist.
struct WindSource {
  double strength = 1.0;       // m^2/s
  double falloff_radius = 1.0;  // m
  double core_radius = 1e-6;    // m
  Vec3 position{};
  /// When set, overrides `position` with a time-dependent path.
  std::function<Vec3(double)> path;
};

struct WindField {
  Vec3 uniform{};
  std::optional<WindSource> source;
};

/// Normal-flow panel model: each triangle feels c_normal * area * (v_rel . n) n,
/// or c_normal * area * (v_rel . n) |v_rel . n| n with `quadratic` set.
struct AeroModel {
  double c_normal = 0.5;  // N s / m^3 (linear) or N s^2 / m^4 (quadratic)
  bool quadratic = false;
  friend bool operator==(const AeroModel&, const AeroModel&) = default;
};

/// Uniform wind plus the source's radial contribution
/// strength / max(r, core) * exp(-r / falloff).
Vec3 wind_velocity(const WindField& field, const Vec3& point, double t);

/// Per-vertex forces for one triangle, split equally. Triangles with area
/// below 1e-12 m^2 receive no force.
std::array<Vec3, 3> aero_force_on_triangle(std::span<const Vec3, 3> positions, std::span<const Vec3, 3> velocities,
                                           const WindField& field, const AeroModel& model, double t);

/// Aerodynamic force on every particle of `system` from its triangle list,
/// added into `forces` (sized to the particle count).
void accumulate_aero_forces(const MassSpringSystem& system, const WindField& field, const AeroModel& model,
                            double t, std::span<Vec3> forces);

}  // namespace simcouple
