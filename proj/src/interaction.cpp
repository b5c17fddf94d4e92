#include "simcouple/interaction.hpp"

#include <algorithm>
#include <cmath>

#include "simcouple/errors.hpp"

namespace simcouple {

void validate(const ContactForceModel& m) {
  if (m.k_constraint < 0.0 || m.c_damp < 0.0 || m.k_restore < 0.0 || m.mu < 0.0) {
    throw ValidationError("contact model coefficients must be non-negative");
  }
}

std::optional<Contact> detect_point_sphere(const Vec3& point, const Vec3& center, double radius) {
  if (!(radius > 0.0)) {
    throw ValidationError("sphere radius must be positive");
  }
  const Vec3 d = point - center;
  const double dist = d.norm();
  if (dist >= radius) {
    return std::nullopt;
  }
  if (dist == 0.0) {
    throw DegenerateContactError("point at sphere center; contact normal undefined");
  }
  Contact c;
  c.normal = d / dist;
  c.depth = radius - dist;
  c.point = center + c.normal * radius;
  return c;
}

std::optional<Contact> detect_point_halfspace(const Vec3& point, const Vec3& plane_point,
                                              const Vec3& plane_normal) {
  const double signed_distance = (point - plane_point).dot(plane_normal);
  if (signed_distance >= 0.0) {
    return std::nullopt;
  }
  Contact c;
  c.normal = plane_normal;
  c.depth = -signed_distance;
  c.point = point - plane_normal * signed_distance;
  return c;
}

std::optional<Contact> detect_point_box(const Vec3& point, const Vec3& center, const Quat& orientation,
                                        const Vec3& h) {
  const Vec3 q = orientation.inverse_rotate(point - center);
  const double pen[3] = {h.x - std::abs(q.x), h.y - std::abs(q.y), h.z - std::abs(q.z)};
  if (pen[0] <= 0.0 || pen[1] <= 0.0 || pen[2] <= 0.0) {
    return std::nullopt;
  }
  const int axis = static_cast<int>(std::min_element(pen, pen + 3) - pen);
  const double coord[3] = {q.x, q.y, q.z};
  const double sign = coord[axis] < 0.0 ? -1.0 : 1.0;
  Vec3 n_body;
  (axis == 0 ? n_body.x : axis == 1 ? n_body.y : n_body.z) = sign;

  Contact c;
  c.normal = orientation.rotate(n_body);
  c.depth = pen[axis];
  c.point = point + c.normal * c.depth;
  return c;
}

std::vector<Contact> detect_contacts(const RigidBody& body, const MassSpringSystem& system) {
  std::vector<Contact> out;
  for (std::size_t i = 0; i < system.particles.size(); ++i) {
    const Particle& p = system.particles[i];
    std::optional<Contact> c;
    if (const auto* s = std::get_if<Sphere>(&body.shape)) {
      try {
        c = detect_point_sphere(p.position, body.position, s->radius);
      } catch (const DegenerateContactError&) {
        // A particle driven exactly onto the center: push it out along +y.
        c = Contact{i, {0.0, 1.0, 0.0}, s->radius, body.position + Vec3{0.0, s->radius, 0.0}, {}};
      }
    } else {
      c = detect_point_box(p.position, body.position, body.orientation, std::get<Box>(body.shape).half_extents);
    }
    if (c) {
      c->particle = i;
      c->relative_velocity = p.velocity - body.point_velocity(c->point);
      out.push_back(*c);
    }
  }
  return out;
}

std::vector<Contact> detect_ground_contacts(const MassSpringSystem& system, double ground_height) {
  std::vector<Contact> out;
  const Vec3 plane_point{0.0, ground_height, 0.0};
  const Vec3 up{0.0, 1.0, 0.0};
  for (std::size_t i = 0; i < system.particles.size(); ++i) {
    const Particle& p = system.particles[i];
    if (auto c = detect_point_halfspace(p.position, plane_point, up)) {
      c->particle = i;
      c->relative_velocity = p.velocity;
      out.push_back(*c);
    }
  }
  return out;
}

Vec3 coulomb_clamp(const Vec3& f_tangential, double f_normal_magnitude, double mu) {
  const double limit = mu * f_normal_magnitude;
  const double mag = f_tangential.norm();
  if (mag <= limit) {
    return f_tangential;
  }
  if (!(limit > 0.0)) {
    return kZero;
  }
  return f_tangential * (limit / mag);
}

ContactForce contact_force_parts(const Contact& contact, const ContactForceModel& model) {
  const Vec3& n = contact.normal;
  const double normal_speed = contact.relative_velocity.dot(n);
  const double fn = std::max(0.0, model.k_restore * contact.depth - model.c_damp * normal_speed);
  const Vec3 v_t = contact.relative_velocity - n * normal_speed;

  ContactForce f;
  f.normal = n * fn;
  f.tangential = coulomb_clamp(v_t * (-model.k_constraint), fn, model.mu);
  return f;
}

namespace {

InteractionRecord apply_contacts(RigidBody* body, MassSpringSystem& system, std::span<const Contact> contacts,
                                 const ContactForceModel& model, double t, bool keep_contacts) {
  InteractionRecord rec;
  rec.t = t;
  rec.contact_count = static_cast<int>(contacts.size());
  if (keep_contacts) {
    rec.contacts.reserve(contacts.size());
  }
  for (const Contact& c : contacts) {
    const ContactForce parts = contact_force_parts(c, model);
    const Vec3 f = parts.total();
    system.particles[c.particle].force_accum += f;
    const Vec3 reaction = -f;
    rec.force_on_primary += reaction;
    if (body != nullptr) {
      apply_force_at_point(*body, reaction, c.point);
      rec.torque_on_primary += (c.point - body->position).cross(reaction);
    }
    const double fn = f.dot(c.normal);
    const double ft = parts.tangential.norm();
    rec.max_depth = std::max(rec.max_depth, c.depth);
    rec.cone_excess = std::max(rec.cone_excess, ft - model.mu * parts.normal.norm());
    rec.min_normal_force = std::min(rec.min_normal_force, fn);
    if (keep_contacts) {
      rec.contacts.push_back({c.particle, fn, ft, c.depth});
    }
  }
  return rec;
}

}  // namespace

InteractionRecord apply_two_way(RigidBody& body, MassSpringSystem& system, std::span<const Contact> contacts,
                                const ContactForceModel& model, double t, bool keep_contacts) {
  return apply_contacts(&body, system, contacts, model, t, keep_contacts);
}

InteractionRecord apply_one_way(MassSpringSystem& system, std::span<const Contact> contacts,
                                const ContactForceModel& model, double t, bool keep_contacts) {
  return apply_contacts(nullptr, system, contacts, model, t, keep_contacts);
}

}  // namespace simcouple
