#include <doctest.h>

#include <cmath>

#include "simcouple/errors.hpp"
#include "simcouple/interaction.hpp"

using namespace simcouple;

TEST_CASE("point inside a sphere") {
  const auto c = detect_point_sphere({0, 0.1, 0}, {0, 0, 0}, 0.12);
  REQUIRE(c);
  CHECK(c->depth == doctest::Approx(0.02));
  CHECK(c->normal.y == doctest::Approx(1.0));
  CHECK(c->point.y == doctest::Approx(0.12));
}

TEST_CASE("touching and outside are contact-free") {
  CHECK_FALSE(detect_point_sphere({0, 0.12, 0}, {0, 0, 0}, 0.12));
  CHECK_FALSE(detect_point_sphere({0, 1, 0}, {0, 0, 0}, 0.12));
}

TEST_CASE("point at the sphere center is degenerate") {
  CHECK_THROWS_AS(detect_point_sphere({0, 0, 0}, {0, 0, 0}, 0.12), DegenerateContactError);
}

TEST_CASE("halfspace and box detection") {
  const auto h = detect_point_halfspace({3, -0.2, 1}, {0, 0, 0}, {0, 1, 0});
  REQUIRE(h);
  CHECK(h->depth == doctest::Approx(0.2));
  CHECK(h->normal.y == doctest::Approx(1.0));
  CHECK_FALSE(detect_point_halfspace({0, 0, 0}, {0, 0, 0}, {0, 1, 0}));

  const auto b = detect_point_box({0.25, 0.0, 0.0}, {0, 0, 0}, Quat{}, {0.3, 0.5, 0.5});
  REQUIRE(b);
  CHECK(b->depth == doctest::Approx(0.05));
  CHECK(b->normal.x == doctest::Approx(1.0));
  CHECK_FALSE(detect_point_box({0.31, 0.0, 0.0}, {0, 0, 0}, Quat{}, {0.3, 0.5, 0.5}));
}

TEST_CASE("normal force is penalty plus damping, never pulling") {
  ContactForceModel m;
  Contact c;
  c.normal = {0, 1, 0};
  c.depth = 0.01;
  CHECK(contact_force(c, m).y == doctest::Approx(20.0));
  c.relative_velocity = {0, -1, 0};  // particle moving into the body
  CHECK(contact_force(c, m).y == doctest::Approx(22.0));
  c.relative_velocity = {0, 50, 0};  // separating fast
  CHECK(contact_force(c, m).norm() == 0.0);
}

TEST_CASE("friction opposes sliding and is clamped to the cone") {
  ContactForceModel m;
  Contact c;
  c.normal = {0, 1, 0};
  c.depth = 0.01;  // 20 N normal
  c.relative_velocity = {0.1, 0, 0};
  ContactForce f = contact_force_parts(c, m);
  CHECK(f.tangential.x == doctest::Approx(-5.0));
  c.relative_velocity = {1.0, 0, 0};  // wants 50 N, cone allows 10 N
  f = contact_force_parts(c, m);
  CHECK(f.tangential.x == doctest::Approx(-10.0));
  CHECK(f.tangential.norm() <= m.mu * f.normal.norm() + 1e-12);
}

TEST_CASE("coulomb clamp") {
  CHECK(coulomb_clamp({3, 4, 0}, 2.0, 0.5).norm() == doctest::Approx(1.0));
  CHECK(coulomb_clamp({0.3, 0.4, 0}, 2.0, 0.5).norm() == doctest::Approx(0.5));
  CHECK(coulomb_clamp({3, 4, 0}, 0.0, 0.5).norm() == 0.0);
}

TEST_CASE("two-way forces are equal and opposite") {
  RigidBody body = make_sphere(0.68, 0.12);
  body.angular_velocity = {0, 0, -10};
  MassSpringSystem sys;
  sys.particles.resize(3);
  sys.particles[0].position = {0.1, 0.02, 0};
  sys.particles[1].position = {0, -0.11, 0.01};
  sys.particles[1].velocity = {0.5, 0.3, 0};
  sys.particles[2].position = {1, 1, 1};
  const auto contacts = detect_contacts(body, sys);
  REQUIRE(contacts.size() == 2);
  const InteractionRecord rec = apply_two_way(body, sys, contacts, {}, 0.0, true);
  Vec3 on_particles{};
  for (const auto& p : sys.particles) on_particles += p.force_accum;
  CHECK((on_particles + body.force_accum).norm() < 1e-12);
  CHECK((rec.force_on_primary - body.force_accum).norm() < 1e-12);
  CHECK(rec.contact_count == 2);
  CHECK(rec.contacts.size() == 2);
  CHECK(rec.cone_excess <= 1e-12);
}

TEST_CASE("one-way leaves the body alone") {
  RigidBody body = make_sphere(0.68, 0.12);
  MassSpringSystem sys;
  sys.particles.resize(1);
  sys.particles[0].position = {0, 0.1, 0};
  const auto contacts = detect_contacts(body, sys);
  const InteractionRecord rec = apply_one_way(sys, contacts, {});
  CHECK(body.force_accum == kZero);
  CHECK(rec.force_on_primary.y == doctest::Approx(-40.0));
  CHECK(sys.particles[0].force_accum.y == doctest::Approx(40.0));
}

TEST_CASE("ground contact pushes particles up") {
  MassSpringSystem sys;
  sys.particles.resize(2);
  sys.particles[0].position = {0, -0.01, 0};
  sys.particles[1].position = {0, 0.5, 0};
  const auto c = detect_ground_contacts(sys, 0.0);
  REQUIRE(c.size() == 1);
  CHECK(c[0].particle == 0);
  CHECK(contact_force(c[0], {}).y == doctest::Approx(20.0));
}

TEST_CASE("contact model validation") {
  ContactForceModel m;
  m.mu = -0.1;
  CHECK_THROWS_AS(validate(m), ValidationError);
}
