#include <doctest.h>

#include <array>
#include <cmath>

#include "simcouple/aero.hpp"

using namespace simcouple;

namespace {

// Right triangle in the x-y plane, area 0.5, normal +z.
const std::array<Vec3, 3> kTri{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}};
const std::array<Vec3, 3> kStill{};

Vec3 total(const std::array<Vec3, 3>& f) { return f[0] + f[1] + f[2]; }

}  // namespace

TEST_CASE("head-on wind gives c A v along the normal, split equally") {
  WindField w;
  w.uniform = {0, 0, 4};
  const AeroModel m{0.5, false};
  const auto f = aero_force_on_triangle(kTri, kStill, w, m, 0.0);
  CHECK(total(f).z == doctest::Approx(0.5 * 0.5 * 4.0));
  CHECK(f[0].z == doctest::Approx(f[1].z));
  CHECK(total(f).x == doctest::Approx(0.0));
}

TEST_CASE("wind in the plane of the triangle exerts nothing") {
  WindField w;
  w.uniform = {3, 2, 0};
  const auto f = aero_force_on_triangle(kTri, kStill, w, AeroModel{}, 0.0);
  CHECK(total(f).norm() == 0.0);
}

TEST_CASE("linear model: doubling wind doubles force") {
  WindField w1, w2;
  w1.uniform = {1, 0.5, 2};
  w2.uniform = w1.uniform * 2.0;
  const auto a = total(aero_force_on_triangle(kTri, kStill, w1, AeroModel{}, 0.0));
  const auto b = total(aero_force_on_triangle(kTri, kStill, w2, AeroModel{}, 0.0));
  CHECK((b - a * 2.0).norm() < 1e-12);
}

TEST_CASE("quadratic model keeps the sign of the normal flow") {
  WindField w;
  w.uniform = {0, 0, -2};
  const auto f = total(aero_force_on_triangle(kTri, kStill, w, AeroModel{1.0, true}, 0.0));
  CHECK(f.z == doctest::Approx(-0.5 * 4.0));
}

TEST_CASE("moving triangle sees relative wind") {
  WindField w;
  std::array<Vec3, 3> v{Vec3{0, 0, 1}, Vec3{0, 0, 1}, Vec3{0, 0, 1}};
  const auto f = total(aero_force_on_triangle(kTri, v, w, AeroModel{}, 0.0));
  CHECK(f.z == doctest::Approx(-0.25));
}

TEST_CASE("degenerate triangles receive no force") {
  const std::array<Vec3, 3> line{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{2, 0, 0}};
  WindField w;
  w.uniform = {0, 0, 5};
  CHECK(total(aero_force_on_triangle(line, kStill, w, AeroModel{}, 0.0)).norm() == 0.0);
}

TEST_CASE("radial source decays with distance") {
  WindField w;
  WindSource s;
  s.strength = 2.0;
  s.falloff_radius = 1.0;
  w.source = s;
  const Vec3 near = wind_velocity(w, {0.5, 0, 0}, 0.0);
  const Vec3 far = wind_velocity(w, {2.0, 0, 0}, 0.0);
  CHECK(near.x == doctest::Approx(2.0 / 0.5 * std::exp(-0.5)));
  CHECK(far.x < near.x);
  CHECK(std::abs(near.y) < 1e-15);
}

TEST_CASE("source can follow a path") {
  WindField w;
  WindSource s;
  s.path = [](double t) { return Vec3{t, 0, 0}; };
  w.source = s;
  const Vec3 v = wind_velocity(w, {3.0, 0, 0}, 2.0);
  CHECK(v.x > 0.0);
  CHECK(v.x == doctest::Approx(wind_velocity(w, {1.0, 0, 0}, 0.0).x));
}
