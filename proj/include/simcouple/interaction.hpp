#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "simcouple/mass_spring.hpp"
#include "simcouple/math.hpp"
#include "simcouple/rigid_body.hpp"

namespace simcouple {

/// Penalty contact parameters.
///
/// The normal force combines a restoring term proportional to penetration
/// depth with a damping term opposing the approach rate; the clamp at zero
/// keeps the contact from pulling and, together with the damping term, plays
/// the role of the constraint against further penetration. Friction is a
/// tangential viscous penalty (k_constraint times slip speed) capped by the
/// Coulomb cone mu * f_n.
struct ContactForceModel {
  double k_constraint = 50.0;
  double c_damp = 2.0;
  double k_restore = 2000.0;
  double mu = 0.5;

  friend bool operator==(const ContactForceModel&, const ContactForceModel&) = default;
};

void validate(const ContactForceModel& model);

struct Contact {
  std::size_t particle = 0;
  Vec3 normal{};  // unit, pointing out of the primary body
  double depth = 0.0;
  Vec3 point{};   // on the primary body's surface
  Vec3 relative_velocity{};  // particle minus body surface point
};

/// Contact iff |point - center| < radius (touching is contact-free). Throws
/// DegenerateContactError when the point is exactly at the center.
std::optional<Contact> detect_point_sphere(const Vec3& point, const Vec3& center, double radius);

/// Contact iff the signed distance to the plane is negative.
std::optional<Contact> detect_point_halfspace(const Vec3& point, const Vec3& plane_point,
                                              const Vec3& plane_normal);

/// Oriented box: contact iff strictly inside; the normal is that of the face
/// with the smallest penetration.
std::optional<Contact> detect_point_box(const Vec3& point, const Vec3& center, const Quat& orientation,
                                        const Vec3& half_extents);

/// Every particle of `system` penetrating `body`, in particle order, with
/// relative velocities measured against the body's surface-point velocity.
std::vector<Contact> detect_contacts(const RigidBody& body, const MassSpringSystem& system);

/// Particles of `system` below a static ground plane.
std::vector<Contact> detect_ground_contacts(const MassSpringSystem& system, double ground_height);

struct ContactForce {
  Vec3 normal{};
  Vec3 tangential{};
  Vec3 total() const { return normal + tangential; }
};

/// Force on the secondary particle, split into normal and friction parts.
ContactForce contact_force_parts(const Contact& contact, const ContactForceModel& model);

/// Force on the secondary particle.
inline Vec3 contact_force(const Contact& contact, const ContactForceModel& model) {
  return contact_force_parts(contact, model).total();
}

/// Scales `f_tangential` so its magnitude does not exceed mu * f_normal.
Vec3 coulomb_clamp(const Vec3& f_tangential, double f_normal_magnitude, double mu);

struct ContactSample {
  std::size_t particle = 0;
  double normal_force = 0.0;      // signed component along the contact normal
  double tangential_force = 0.0;  // magnitude
  double depth = 0.0;
};

/// One step's worth of interaction between the primary and secondary.
struct InteractionRecord {
  double t = 0.0;
  /// Net force that acts (two-way) or would act (one-way) on the primary.
  Vec3 force_on_primary{};
  Vec3 torque_on_primary{};
  int contact_count = 0;
  double max_depth = 0.0;
  /// max over contacts of |f_t| - mu * f_n; -infinity when there are none.
  double cone_excess = -std::numeric_limits<double>::infinity();
  /// min over contacts of f . n; +infinity when there are none.
  double min_normal_force = std::numeric_limits<double>::infinity();
  std::vector<ContactSample> contacts;  // filled only on request
};

/// Adds each contact force to its particle and the negated force, with its
/// moment, to the body.
InteractionRecord apply_two_way(RigidBody& body, MassSpringSystem& system, std::span<const Contact> contacts,
                                const ContactForceModel& model, double t = 0.0, bool keep_contacts = false);

/// As apply_two_way but the body is left untouched; the record still carries
/// the force the body would have received.
InteractionRecord apply_one_way(MassSpringSystem& system, std::span<const Contact> contacts,
                                const ContactForceModel& model, double t = 0.0, bool keep_contacts = false);

}  // namespace simcouple
