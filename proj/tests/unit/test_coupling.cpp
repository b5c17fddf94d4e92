#include <doctest.h>

#include <cmath>

#include "simcouple/coupling.hpp"
#include "simcouple/errors.hpp"

using namespace simcouple;

namespace {

CoupledProblem small_net_problem() {
  CoupledProblem p;
  NetParams np;
  np.rings = 5;
  np.spokes = 8;
  p.secondary = build_net(np, material_preset("nylon-net"));
  p.primary = make_sphere(0.68, 0.12);
  p.primary->position = {0.0, 0.3, 0.0};
  p.dt_primary = 1e-5;
  p.dt_secondary = 1e-5;
  p.duration = 0.4;
  p.output_interval = 0.01;
  return p;
}

CoupledProblem shallow_entry() {
  CoupledProblem p = small_net_problem();
  p.primary->position = {-0.2, 0.3, 0.0};
  p.primary->linear_velocity = {1.5, -2.5, 0.0};
  p.primary->angular_velocity = {0, 0, -10};
  p.duration = 0.5;
  return p;
}

}  // namespace

TEST_CASE("dead-center drop stays on the axis") {
  CoupledProblem p = small_net_problem();
  p.secondary = build_net(NetParams{.rings = 5, .spokes = 8, .taper = 0.7}, material_preset("nylon-net"));
  const CouplingResult r = run_two_way(p);
  CHECK_FALSE(r.status.unstable());
  int contacts = 0;
  for (const auto& rec : r.log) contacts += rec.contact_count > 0 ? 1 : 0;
  CHECK(contacts > 0);
  for (const auto& s : r.primary.samples) {
    CHECK(std::abs(s.linear_velocity.x) < 1e-9);
    CHECK(std::abs(s.linear_velocity.z) < 1e-9);
  }
}

TEST_CASE("zero gravity, ball far from net: nothing moves") {
  CoupledProblem p = small_net_problem();
  p.gravity.g = kZero;
  p.primary->position = {5, 5, 5};
  p.duration = 0.05;
  const CouplingResult r = run_two_way(p);
  for (const auto& s : r.primary.samples) CHECK(s.position == Vec3{5, 5, 5});
  for (const auto& frame : r.secondary.positions) CHECK(frame == r.secondary.positions.front());
}

TEST_CASE("shallow spinning entry loses horizontal speed in two-way") {
  const CouplingResult r = run_two_way(shallow_entry());
  REQUIRE_FALSE(r.status.unstable());
  CHECK(exit_horizontal_speed(r.primary) < 1.5);
}

TEST_CASE("one-way primary path is ballistic and ignores the secondary") {
  CoupledProblem p = shallow_entry();
  const CouplingResult a = run_one_way(p);
  p.secondary = build_net(NetParams{.rings = 3, .spokes = 5}, material_preset("cloth"));
  const CouplingResult b = run_one_way(p);
  CHECK(a.primary == b.primary);
  for (const auto& s : a.primary.samples) {
    const Vec3 exact = ballistic_position({-0.2, 0.3, 0.0}, {1.5, -2.5, 0.0}, p.gravity.g, s.t);
    // Symplectic Euler drifts by g dt t / 2 from the parabola.
    CHECK((s.position - exact).norm() <= 9.81 * 1e-5 * s.t + 1e-12);
  }
}

TEST_CASE("one-way stretches the net more than two-way") {
  const CouplingResult two = run_two_way(shallow_entry());
  const CouplingResult one = run_one_way(shallow_entry());
  CHECK(one.max_secondary_displacement > two.max_secondary_displacement);
}

TEST_CASE("hybrid with a zero stand-in is one-way, bit for bit") {
  const CoupledProblem p = shallow_entry();
  DampingFieldStandIn zero;
  zero.region = bounding_cylinder(*p.secondary);
  const CouplingResult h = run_hybrid(p, zero);
  const CouplingResult o = run_one_way(p);
  CHECK(h.primary == o.primary);
  CHECK(h.primary_fine == o.primary_fine);
  CHECK(h.secondary == o.secondary);
  REQUIRE(h.log.size() == o.log.size());
  for (std::size_t i = 0; i < h.log.size(); ++i) {
    CHECK(h.log[i].force_on_primary == o.log[i].force_on_primary);
  }
}

TEST_CASE("damping field only slows the ball and never reverses it") {
  const CoupledProblem p = shallow_entry();
  DampingFieldStandIn f;
  f.c_linear = 0.4;
  f.c_angular = 0.01;
  f.region = bounding_cylinder(*p.secondary);
  const CouplingResult h = run_hybrid(p, f);
  const auto& s = h.primary_fine.samples;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (contains(f.region, s[i - 1].position)) {
      CHECK(horizontal_speed(s[i].linear_velocity) <= horizontal_speed(s[i - 1].linear_velocity));
      CHECK(s[i].linear_velocity.x > 0.0);
    }
  }
  CHECK(h.stand_in_log.size() == s.size() - 1);
}

TEST_CASE("coarse primary trace is interpolated during playback") {
  CoupledProblem p = shallow_entry();
  p.dt_primary = 1e-4;
  const CouplingResult r = run_one_way(p);
  CHECK_FALSE(r.status.unstable());
  CHECK(r.primary_fine.interval == doctest::Approx(1e-4));
  CHECK(r.log.size() == 50000);
}

TEST_CASE("two-way momentum audit") {
  CoupledProblem p = shallow_entry();
  RigidBody body = *p.primary;
  MassSpringSystem net = *p.secondary;
  const double dt = 1e-5;
  const auto momentum = [&] { return body.linear_momentum() + net.free_momentum(); };
  Vec3 expected = momentum();
  const double free_mass = net.free_mass();
  for (int i = 0; i < 40000; ++i) {
    const auto contacts = detect_contacts(body, net);
    apply_two_way(body, net, contacts, p.contact);
    step_rigid_body(body, p.gravity, dt);
    const auto report = step_mass_spring(net, p.gravity, {}, dt);
    expected += (p.gravity.g * (body.mass + free_mass) + report.anchor_force + report.damping_force) * dt;
  }
  const Vec3 err = momentum() - expected;
  const double per_second = 1e-6 * 0.4;
  CHECK(std::abs(err.x) < per_second);
  CHECK(std::abs(err.y) < per_second);
  CHECK(std::abs(err.z) < per_second);
}

TEST_CASE("attachment link pulls both ways") {
  CoupledProblem p;
  p.primary = make_sphere(70.0, 0.3, 8.4);
  p.primary->position = {0, -1.3, 0};
  CordParams c;
  c.initial_extent = 1.0;
  p.secondary = build_cord(c, material_preset("bungee"));
  p.attachment = AttachmentLink{cord_handle(*p.secondary), {0, 0.3, 0}, 1e5, 100};
  p.dt_primary = p.dt_secondary = 1e-4;
  p.duration = 0.2;
  p.output_interval = 0.01;
  const CouplingResult r = run_two_way(p);
  CHECK_FALSE(r.status.unstable());
  for (const auto& rec : r.log) CHECK(rec.contact_count == 1);
}

TEST_CASE("coupling mode validation") {
  CHECK_THROWS_AS(validate(CouplingMode{CouplingKind::Hybrid, std::nullopt}), ValidationError);
  CoupledProblem p = small_net_problem();
  p.duration = 0.0;
  CHECK_THROWS_AS(run_two_way(p), ValidationError);
}

TEST_CASE("secondary alone in wind") {
  CoupledProblem p;
  GridParams g;
  g.rows = 4;
  g.cols = 4;
  g.pinned_edge = PinnedEdge::Left;
  g.width_axis = {0, 0, 1};
  p.secondary = build_grid(g, material_preset("cloth"));
  p.dt_secondary = 1e-4;
  p.wind.uniform = {5, 0, 0};
  p.aero = AeroModel{};
  p.duration = 0.2;
  p.output_interval = 0.1;
  const CouplingResult r = run_one_way(p);
  CHECK_FALSE(r.status.unstable());
  CHECK(r.secondary.positions.back()[15].x > 0.0);
  CHECK(r.log.empty());
}
