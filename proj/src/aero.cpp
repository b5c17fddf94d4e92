#include "simcouple/aero.hpp"

#include <algorithm>
#include <cmath>

#include "simcouple/errors.hpp"

namespace simcouple {

Vec3 wind_velocity(const WindField& field, const Vec3& point, double t) {
  Vec3 v = field.uniform;
  if (field.source) {
    const WindSource& s = *field.source;
    const Vec3 origin = s.path ? s.path(t) : s.position;
    const Vec3 d = point - origin;
    const double r = d.norm();
    if (r > 0.0) {
      const double magnitude = s.strength / std::max(r, s.core_radius) * std::exp(-r / s.falloff_radius);
      v += d * (magnitude / r);
    }
  }
  return v;
}

std::array<Vec3, 3> aero_force_on_triangle(std::span<const Vec3, 3> x, std::span<const Vec3, 3> v,
                                           const WindField& field, const AeroModel& model, double t) {
  const Vec3 cross = (x[1] - x[0]).cross(x[2] - x[0]);
  const double twice_area = cross.norm();
  const double area = 0.5 * twice_area;
  if (!(area > 1e-12)) {
    return {};
  }
  const Vec3 n = cross / twice_area;
  const Vec3 centroid = (x[0] + x[1] + x[2]) / 3.0;
  const Vec3 mean_velocity = (v[0] + v[1] + v[2]) / 3.0;
  const Vec3 v_rel = wind_velocity(field, centroid, t) - mean_velocity;
  const double vn = v_rel.dot(n);
  const double speed_term = model.quadratic ? vn * std::abs(vn) : vn;
  const Vec3 per_vertex = n * (model.c_normal * area * speed_term / 3.0);
  return {per_vertex, per_vertex, per_vertex};
}

void accumulate_aero_forces(const MassSpringSystem& system, const WindField& field, const AeroModel& model,
                            double t, std::span<Vec3> forces) {
  if (forces.size() != system.particles.size()) {
    throw ValidationError("aero force buffer does not match particle count");
  }
  for (const Triangle& tri : system.triangles) {
    const std::array<Vec3, 3> x{system.particles[tri[0]].position, system.particles[tri[1]].position,
                                system.particles[tri[2]].position};
    const std::array<Vec3, 3> v{system.particles[tri[0]].velocity, system.particles[tri[1]].velocity,
                                system.particles[tri[2]].velocity};
    const auto f = aero_force_on_triangle(x, v, field, model, t);
    for (int k = 0; k < 3; ++k) {
      forces[tri[k]] += f[k];
    }
  }
}

}  // namespace simcouple
