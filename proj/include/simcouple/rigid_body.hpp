#pragma once

#include <variant>

#include "simcouple/math.hpp"

namespace simcouple {

struct Sphere {
  double radius = 0.12;
  friend bool operator==(const Sphere&, const Sphere&) = default;
};

struct Box {
  Vec3 half_extents{0.1, 0.1, 0.1};
  friend bool operator==(const Box&, const Box&) = default;
};

using Shape = std::variant<Sphere, Box>;

struct GravityModel {
  Vec3 g{0.0, -9.81, 0.0};
  friend bool operator==(const GravityModel&, const GravityModel&) = default;
};

/// The primary system. Angular velocity is stored in the world frame; the
/// inertia tensor is diagonal in the body frame.
struct RigidBody {
  double mass = 1.0;
  Vec3 inertia_diag{1.0, 1.0, 1.0};
  Vec3 position{};
  Quat orientation{};
  Vec3 linear_velocity{};
  Vec3 angular_velocity{};
  Vec3 force_accum{};
  Vec3 torque_accum{};
  Shape shape{Sphere{}};

  Vec3 linear_momentum() const { return linear_velocity * mass; }
  Vec3 angular_momentum() const;
  /// Velocity of a material point currently at `world_point`.
  Vec3 point_velocity(const Vec3& world_point) const {
    return linear_velocity + angular_velocity.cross(world_point - position);
  }
  Vec3 to_world(const Vec3& body_point) const { return position + orientation.rotate(body_point); }
  void clear_accumulators() {
    force_accum = kZero;
    torque_accum = kZero;
  }
};

/// Solid sphere with inertia 2/5 m r^2 unless `inertia` is positive.
RigidBody make_sphere(double mass, double radius, double inertia = 0.0);

/// Solid box with inertia m/3 (b^2 + c^2) per axis for half-extents (a, b, c).
RigidBody make_box(double mass, const Vec3& half_extents);

/// Throws ValidationError unless mass and inertia are positive and a sphere's
/// inertia is isotropic.
void validate(const RigidBody& body);

void apply_force(RigidBody& body, const Vec3& force);

/// Accumulates a force acting at a world-space point together with its moment
/// about the center of mass.
void apply_force_at_point(RigidBody& body, const Vec3& force, const Vec3& world_point);

void apply_torque(RigidBody& body, const Vec3& torque);

/// Semi-implicit step of the linear state, body-frame Euler equations for the
/// angular velocity, exponential-map orientation update with renormalization.
/// Clears the accumulators. Throws InstabilityError on non-finite state.
void step_rigid_body(RigidBody& body, const GravityModel& gravity, double dt);

/// Continuous projectile position x0 + v0 t + g t^2 / 2.
Vec3 ballistic_position(const Vec3& x0, const Vec3& v0, const Vec3& g, double t);

}  // namespace simcouple
