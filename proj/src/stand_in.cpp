#include "simcouple/stand_in.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include "simcouple/errors.hpp"

namespace simcouple {

bool contains(const Region& region, const Vec3& p) {
  if (const auto* box = std::get_if<BoxRegion>(&region)) {
    return p.x >= box->min.x && p.x <= box->max.x && p.y >= box->min.y && p.y <= box->max.y &&
           p.z >= box->min.z && p.z <= box->max.z;
  }
  const auto& cyl = std::get<CylinderRegion>(region);
  const double dx = p.x - cyl.center_x;
  const double dz = p.z - cyl.center_z;
  return p.y >= cyl.y_min && p.y <= cyl.y_max && dx * dx + dz * dz <= cyl.radius * cyl.radius;
}

CylinderRegion bounding_cylinder(const MassSpringSystem& system) {
  if (system.particles.empty()) {
    throw ValidationError("cannot bound an empty system");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  Vec3 lo{inf, inf, inf};
  Vec3 hi{-inf, -inf, -inf};
  for (const auto& p : system.particles) {
    lo = {std::min(lo.x, p.position.x), std::min(lo.y, p.position.y), std::min(lo.z, p.position.z)};
    hi = {std::max(hi.x, p.position.x), std::max(hi.y, p.position.y), std::max(hi.z, p.position.z)};
  }
  CylinderRegion cyl;
  cyl.center_x = 0.5 * (lo.x + hi.x);
  cyl.center_z = 0.5 * (lo.z + hi.z);
  cyl.y_min = lo.y;
  cyl.y_max = hi.y;
  double r2 = 0.0;
  for (const auto& p : system.particles) {
    const double dx = p.position.x - cyl.center_x;
    const double dz = p.position.z - cyl.center_z;
    r2 = std::max(r2, dx * dx + dz * dz);
  }
  cyl.radius = std::sqrt(r2);
  return cyl;
}

Wrench stand_in_force(const DampingFieldStandIn& s, const RigidBody& body) {
  if (!contains(s.region, body.position)) {
    return {};
  }
  return {body.linear_velocity * -s.c_linear, body.angular_velocity * -s.c_angular};
}

namespace {

const std::vector<Vec3>& points_or_center(const std::vector<Vec3>& points) {
  static const std::vector<Vec3> center{Vec3{}};
  return points.empty() ? center : points;
}

}  // namespace

Wrench stand_in_force(const SpringGridStandIn& s, const RigidBody& body) {
  Wrench w;
  for (const Vec3& local : points_or_center(s.contact_points)) {
    const Vec3 p = body.to_world(local);
    if (!(p.y < s.plane_height)) {
      continue;
    }
    const double vy = body.point_velocity(p).y;
    const double fy = std::max(0.0, s.k_vertical * (s.plane_height - p.y) - s.c_vertical * vy);
    const Vec3 f{0.0, fy, 0.0};
    w.force += f;
    w.torque += (p - body.position).cross(f);
  }
  return w;
}

Wrench stand_in_force(const ViscousDragStandIn& s, const RigidBody& body) {
  Wrench w;
  for (const Vec3& local : points_or_center(s.contact_points)) {
    const Vec3 p = body.to_world(local);
    if (!(p.y < s.surface_height)) {
      continue;
    }
    const Vec3 f = body.point_velocity(p) * -s.c_drag;
    w.force += f;
    w.torque += (p - body.position).cross(f);
  }
  return w;
}

Wrench stand_in_force(const StandIn& s, const RigidBody& body) {
  return std::visit([&body](const auto& alt) { return stand_in_force(alt, body); }, s);
}

void validate(const StandIn& s) {
  std::visit(
      [](const auto& alt) {
        using T = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<T, DampingFieldStandIn>) {
          if (alt.c_linear < 0.0 || alt.c_angular < 0.0) {
            throw ValidationError("damping field coefficients must be non-negative");
          }
          if (const auto* box = std::get_if<BoxRegion>(&alt.region)) {
            if (!(box->max.x > box->min.x && box->max.y > box->min.y && box->max.z > box->min.z)) {
              throw ValidationError("damping field box region is degenerate");
            }
          } else {
            const auto& cyl = std::get<CylinderRegion>(alt.region);
            if (!(cyl.radius > 0.0) || !(cyl.y_max > cyl.y_min)) {
              throw ValidationError("damping field cylinder region is degenerate");
            }
          }
        } else if constexpr (std::is_same_v<T, SpringGridStandIn>) {
          if (alt.k_vertical < 0.0 || alt.c_vertical < 0.0) {
            throw ValidationError("spring grid coefficients must be non-negative");
          }
        } else {
          if (alt.c_drag < 0.0) {
            throw ValidationError("drag coefficient must be non-negative");
          }
        }
      },
      s);
}

std::vector<Vec3> box_corners(const Vec3& h) {
  std::vector<Vec3> out;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      for (double sz : {-1.0, 1.0}) {
        out.push_back({sx * h.x, sy * h.y, sz * h.z});
      }
    }
  }
  return out;
}

}  // namespace simcouple
