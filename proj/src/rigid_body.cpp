#include "simcouple/rigid_body.hpp"

#include <cmath>

#include "simcouple/errors.hpp"
#include "simcouple/sim_core.hpp"

namespace simcouple {

RigidBody make_sphere(double mass, double radius, double inertia) {
  if (!(mass > 0.0) || !(radius > 0.0)) {
    throw ValidationError("sphere requires positive mass and radius");
  }
  RigidBody body;
  body.mass = mass;
  const double i = inertia > 0.0 ? inertia : 0.4 * mass * radius * radius;
  body.inertia_diag = {i, i, i};
  body.shape = Sphere{radius};
  return body;
}

RigidBody make_box(double mass, const Vec3& h) {
  if (!(mass > 0.0) || !(h.x > 0.0 && h.y > 0.0 && h.z > 0.0)) {
    throw ValidationError("box requires positive mass and half-extents");
  }
  RigidBody body;
  body.mass = mass;
  body.inertia_diag = {mass / 3.0 * (h.y * h.y + h.z * h.z), mass / 3.0 * (h.x * h.x + h.z * h.z),
                       mass / 3.0 * (h.x * h.x + h.y * h.y)};
  body.shape = Box{h};
  return body;
}

void validate(const RigidBody& body) {
  if (!(body.mass > 0.0)) {
    throw ValidationError("rigid body mass must be positive");
  }
  const Vec3& I = body.inertia_diag;
  if (!(I.x > 0.0 && I.y > 0.0 && I.z > 0.0)) {
    throw ValidationError("rigid body inertia must be positive");
  }
  if (std::holds_alternative<Sphere>(body.shape)) {
    if (!(std::get<Sphere>(body.shape).radius > 0.0)) {
      throw ValidationError("sphere radius must be positive");
    }
    if (I.x != I.y || I.y != I.z) {
      throw ValidationError("sphere inertia must be isotropic");
    }
  }
}

Vec3 RigidBody::angular_momentum() const {
  const Vec3 w_body = orientation.inverse_rotate(angular_velocity);
  return orientation.rotate(inertia_diag.cwise(w_body));
}

void apply_force(RigidBody& body, const Vec3& force) { body.force_accum += force; }

void apply_force_at_point(RigidBody& body, const Vec3& force, const Vec3& world_point) {
  body.force_accum += force;
  body.torque_accum += (world_point - body.position).cross(force);
}

void apply_torque(RigidBody& body, const Vec3& torque) { body.torque_accum += torque; }

void step_rigid_body(RigidBody& body, const GravityModel& gravity, double dt) {
  if (!body.force_accum.is_finite() || !body.torque_accum.is_finite()) {
    throw InstabilityError("non-finite force on rigid body", InstabilityError::kPrimaryEntity);
  }
  const Vec3 accel = body.force_accum / body.mass + gravity.g;
  try {
    step_semi_implicit(body.position, body.linear_velocity, accel, dt);
  } catch (const InstabilityError& e) {
    throw InstabilityError(e.what(), InstabilityError::kPrimaryEntity);
  }

  // Euler's equations in the body frame: I dw/dt = tau - w x (I w).
  const Vec3& I = body.inertia_diag;
  const bool isotropic = I.x == I.y && I.y == I.z;
  if (isotropic) {
    body.angular_velocity += body.torque_accum * (dt / I.x);
  } else {
    Vec3 w = body.orientation.inverse_rotate(body.angular_velocity);
    const Vec3 tau = body.orientation.inverse_rotate(body.torque_accum);
    const Vec3 rhs = tau - w.cross(I.cwise(w));
    w += Vec3{rhs.x / I.x, rhs.y / I.y, rhs.z / I.z} * dt;
    body.angular_velocity = body.orientation.rotate(w);
  }

  const Vec3& w = body.angular_velocity;
  const double speed = w.norm();
  if (speed > 0.0) {
    body.orientation = (Quat::from_axis_angle(w, speed * dt) * body.orientation).normalized();
  }
  body.clear_accumulators();

  if (!body.position.is_finite() || !body.linear_velocity.is_finite() ||
      !body.angular_velocity.is_finite() || !body.orientation.is_finite()) {
    throw InstabilityError("non-finite rigid body state", InstabilityError::kPrimaryEntity);
  }
}

Vec3 ballistic_position(const Vec3& x0, const Vec3& v0, const Vec3& g, double t) {
  return x0 + v0 * t + g * (0.5 * t * t);
}

}  // namespace simcouple
