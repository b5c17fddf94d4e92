#pragma once

#include <variant>
#include <vector>

#include "simcouple/mass_spring.hpp"
#include "simcouple/math.hpp"
#include "simcouple/rigid_body.hpp"

namespace simcouple {

struct BoxRegion {
  Vec3 min{};
  Vec3 max{};
  friend bool operator==(const BoxRegion&, const BoxRegion&) = default;
};

/// Vertical (y-axis) cylinder.
struct CylinderRegion {
  double center_x = 0.0;
  double center_z = 0.0;
  double radius = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  friend bool operator==(const CylinderRegion&, const CylinderRegion&) = default;
};

using Region = std::variant<BoxRegion, CylinderRegion>;

bool contains(const Region& region, const Vec3& point);

/// Smallest vertical cylinder around the system's current particle positions,
/// centered on the mean of their x/z extents.
CylinderRegion bounding_cylinder(const MassSpringSystem& system);

/// Damps translation and rotation of the primary while its center is inside
/// the region.
struct DampingFieldStandIn {
  Region region{CylinderRegion{}};
  double c_linear = 0.0;   // N s / m
  double c_angular = 0.0;  // N m s / rad
  friend bool operator==(const DampingFieldStandIn&, const DampingFieldStandIn&) = default;
};

/// Vertical springs under each body-frame contact point that drops below the
/// plane. Pushes only.
struct SpringGridStandIn {
  double plane_height = 0.0;
  double k_vertical = 0.0;  // N/m per point
  double c_vertical = 0.0;  // N s / m per point
  std::vector<Vec3> contact_points;  // body frame; empty means the center
  friend bool operator==(const SpringGridStandIn&, const SpringGridStandIn&) = default;
};

/// Linear drag on every body-frame contact point below the surface.
struct ViscousDragStandIn {
  double surface_height = 0.0;
  double c_drag = 0.0;  // N s / m per point
  std::vector<Vec3> contact_points;  // body frame; empty means the center
  friend bool operator==(const ViscousDragStandIn&, const ViscousDragStandIn&) = default;
};

/// New stand-ins are added as further alternatives with a stand_in_force overload.
using StandIn = std::variant<DampingFieldStandIn, SpringGridStandIn, ViscousDragStandIn>;

struct Wrench {
  Vec3 force{};
  Vec3 torque{};
};

Wrench stand_in_force(const DampingFieldStandIn& s, const RigidBody& body);
Wrench stand_in_force(const SpringGridStandIn& s, const RigidBody& body);
Wrench stand_in_force(const ViscousDragStandIn& s, const RigidBody& body);
Wrench stand_in_force(const StandIn& s, const RigidBody& body);

/// Throws ValidationError for negative coefficients or a degenerate region.
void validate(const StandIn& s);

/// The eight corners of a box, for spring-grid or drag contact points.
std::vector<Vec3> box_corners(const Vec3& half_extents);

}  // namespace simcouple
