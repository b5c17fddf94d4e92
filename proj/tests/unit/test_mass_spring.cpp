#include <doctest.h>

#include <cmath>

#include "simcouple/errors.hpp"
#include "simcouple/mass_spring.hpp"
#include "simcouple/sim_core.hpp"

using namespace simcouple;

namespace {

MassSpringSystem pair_system(double k, double c, double rest, double sep) {
  MassSpringSystem s;
  s.particles.resize(2);
  s.particles[0].mass = s.particles[1].mass = 1.0;
  s.particles[1].position = {sep, 0, 0};
  Spring sp;
  sp.a = 0;
  sp.b = 1;
  sp.rest_length = rest;
  sp.stiffness = k;
  sp.damping = c;
  s.springs.push_back(sp);
  s.global_damping = 0.0;
  return s;
}

}  // namespace

TEST_CASE("Hooke spring oracle") {
  const MassSpringSystem s = pair_system(100.0, 0.0, 1.0, 1.1);
  const auto [fa, fb] = spring_force(s.springs[0], s.particles[0], s.particles[1]);
  CHECK(fa.x == doctest::Approx(10.0));
  CHECK(fb.x == doctest::Approx(-10.0));
  CHECK(fa.y == 0.0);
}

TEST_CASE("spring damping acts along the axis only") {
  MassSpringSystem s = pair_system(0.0, 2.0, 1.0, 1.0);
  s.particles[1].velocity = {3.0, 5.0, 0.0};
  const auto [fa, fb] = spring_force(s.springs[0], s.particles[0], s.particles[1]);
  CHECK(fa.x == doctest::Approx(6.0));
  CHECK(fa.y == 0.0);
  CHECK((fa + fb).norm() == 0.0);
}

TEST_CASE("compression uses the scaled stiffness") {
  MassSpringSystem s = pair_system(1400.0, 0.0, 1.0, 0.9);
  s.springs[0].compression_scale = 0.01;
  const auto [fa, fb] = spring_force(s.springs[0], s.particles[0], s.particles[1]);
  CHECK(fa.x == doctest::Approx(-1.4));
}

TEST_CASE("coincident endpoints are degenerate") {
  const MassSpringSystem s = pair_system(1.0, 0.0, 1.0, 0.0);
  CHECK_THROWS_AS(spring_force(s.springs[0], s.particles[0], s.particles[1]), DegenerateSpringError);
}

TEST_CASE("material presets") {
  for (const auto& name : material_preset_names()) {
    CHECK(material_preset(name).name == name);
  }
  CHECK(material_preset("bungee").compression_scale == doctest::Approx(0.01));
  CHECK(material_preset("nylon-net").total_mass == doctest::Approx(0.03));
  CHECK_THROWS_AS(material_preset("kevlar"), ValidationError);
}

TEST_CASE("net topology") {
  NetParams p;
  p.rings = 2;
  p.spokes = 3;
  const MassSpringSystem net = build_net(p, material_preset("nylon-net"));
  CHECK(net.particles.size() == 9);
  CHECK(net.springs.size() == 18);
  CHECK(net.anchors.size() == 3);
  int pinned = 0;
  for (const auto& q : net.particles) pinned += q.pinned ? 1 : 0;
  CHECK(pinned == 3);
  CHECK(net.free_mass() == doctest::Approx(0.03));
  for (const auto& sp : net.springs) CHECK(sp.rest_length > 0.0);
  CHECK_THROWS_AS(build_net(NetParams{.rings = 1}, material_preset("nylon-net")), ValidationError);
}

TEST_CASE("default net is at rest at its rest configuration") {
  MassSpringSystem net = build_net({}, material_preset("nylon-net"));
  CHECK(net.spring_energy() == doctest::Approx(0.0));
  CHECK(net.particles.size() == 8 * 12 + 12);
}

TEST_CASE("grid topology") {
  GridParams g;
  g.rows = 2;
  g.cols = 2;
  const MassSpringSystem two = build_grid(g, material_preset("cloth"));
  CHECK(two.springs.size() == 6);
  CHECK(two.triangles.size() == 2);
  g.rows = 3;
  g.cols = 3;
  const MassSpringSystem three = build_grid(g, material_preset("cloth"));
  // 12 structural, 8 shear, 6 bend
  CHECK(three.springs.size() == 26);
  CHECK(three.triangles.size() == 8);
  CHECK(three.particles[5].position.x == doctest::Approx(1.0));  // row 1, col 2
  CHECK(three.particles[5].position.y == doctest::Approx(-0.5));
}

TEST_CASE("grid pinning options") {
  GridParams g;
  g.rows = 4;
  g.cols = 5;
  auto count = [&](PinnedEdge e) {
    g.pinned_edge = e;
    int n = 0;
    for (const auto& p : build_grid(g, material_preset("cloth")).particles) n += p.pinned ? 1 : 0;
    return n;
  };
  CHECK(count(PinnedEdge::None) == 0);
  CHECK(count(PinnedEdge::Top) == 5);
  CHECK(count(PinnedEdge::Left) == 4);
  CHECK(count(PinnedEdge::AllCorners) == 4);
}

TEST_CASE("cord layout") {
  CordParams c;
  const MassSpringSystem cord = build_cord(c, material_preset("bungee"));
  CHECK(cord.particles.size() == 11);
  CHECK(cord.springs.size() == 10);
  CHECK(cord.particles[0].pinned);
  CHECK(cord.particles[cord_handle(cord)].position.y == doctest::Approx(-10.0));
  c.initial_extent = 1.0;
  const MassSpringSystem folded = build_cord(c, material_preset("bungee"));
  CHECK(folded.particles[cord_handle(folded)].position.y == doctest::Approx(-1.0));
  CHECK(folded.spring_energy() < 1e-9);  // slack zigzag
  CHECK(folded.particles[1].position.x != 0.0);
}

TEST_CASE("stretched pair oscillates about the rest length") {
  MassSpringSystem s = pair_system(100.0, 0.0, 1.0, 1.2);
  const GravityModel none{{0, 0, 0}};
  double min_sep = 10.0;
  for (int i = 0; i < 2000; ++i) {
    step_mass_spring(s, none, {}, 1e-4);
    min_sep = std::min(min_sep, s.particles[1].position.x - s.particles[0].position.x);
  }
  CHECK(min_sep == doctest::Approx(0.8).epsilon(1e-2));
}

TEST_CASE("pinned particles do not move and report the anchor force") {
  MassSpringSystem s = pair_system(100.0, 0.0, 1.0, 1.1);
  s.particles[0].pinned = true;
  const GravityModel none{{0, 0, 0}};
  const auto report = step_mass_spring(s, none, {}, 1e-3);
  CHECK(s.particles[0].position == kZero);
  CHECK(report.anchor_force.x == doctest::Approx(-10.0));
}

TEST_CASE("free fall of a particle matches the rigid-body integrator") {
  MassSpringSystem s;
  s.particles.resize(1);
  s.particles[0].mass = 0.3;
  s.global_damping = 0.0;
  Vec3 x{}, v{};
  const GravityModel g;
  for (int i = 0; i < 500; ++i) {
    step_mass_spring(s, g, {}, 1e-3);
    step_semi_implicit(x, v, g.g, 1e-3);
  }
  CHECK(s.particles[0].position == x);
}

TEST_CASE("external forces must match the particle count") {
  MassSpringSystem s = pair_system(1.0, 0.0, 1.0, 1.0);
  std::vector<Vec3> wrong(3);
  CHECK_THROWS_AS(step_mass_spring(s, {}, wrong, 1e-3), ValidationError);
}
