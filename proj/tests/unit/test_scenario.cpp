#include <doctest.h>

#include <string>

#include "simcouple/errors.hpp"
#include "simcouple/scenario.hpp"

using namespace simcouple;

namespace {

const std::string kDir = SIMCOUPLE_SCENARIO_DIR;
const char* kShipped[] = {"basketball", "flag", "bungee", "mat", "water"};

std::string message_of(const std::string& text) {
  try {
    load_scenario(text);
  } catch (const SimError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal basketball config fills defaults") {
  const Scenario s = load_scenario("name: basketball\nmode: two_way\n");
  CHECK(s.primary.mass == 0.68);
  CHECK(s.secondary.material == "nylon-net");
  CHECK(build_secondary(s).free_mass() == doctest::Approx(0.03));
  CHECK(s.primary.dt == 1e-5);
  CHECK(s.secondary.dt == 1e-5);
  CHECK(s.output_interval == 0.0833);
}

TEST_CASE("hybrid without a stand-in is a validation error") {
  CHECK_THROWS_AS(load_scenario("mode: hybrid\n"), ValidationError);
  CHECK(message_of("mode: hybrid\n").find("stand_in") != std::string::npos);
}

TEST_CASE("empty text is a parse error") {
  CHECK_THROWS_AS(load_scenario(""), ParseError);
  CHECK_THROWS_AS(load_scenario("   \n"), ParseError);
}

TEST_CASE("syntax errors carry a position") {
  const std::string msg = message_of("name: x\nprimary: {mass: 1\n");
  CHECK(msg.find("line") != std::string::npos);
  CHECK_THROWS_AS(load_scenario("name: x\nprimary: {mass: 1\n"), ParseError);
}

TEST_CASE("unknown keys are rejected with their path and line") {
  CHECK_THROWS_AS(load_scenario("name: x\nprimary:\n  mas: 1\n"), ParseError);
  const std::string msg = message_of("name: x\nprimary:\n  mas: 1\n");
  CHECK(msg.find("primary.mas") != std::string::npos);
  CHECK(msg.find("line 3") != std::string::npos);
}

TEST_CASE("bad values name the field") {
  CHECK(message_of("primary:\n  mass: -1\n").find("primary.mass") != std::string::npos);
  CHECK(message_of("primary:\n  mass: heavy\n").find("primary.mass") != std::string::npos);
  CHECK(message_of("secondary:\n  material: silk\n").find("secondary.material") != std::string::npos);
  CHECK(message_of("duration: 0\n").find("duration") != std::string::npos);
  CHECK_THROWS_AS(load_scenario("duration: 1.000001\nprimary:\n  dt: 0.1\n"), ValidationError);
}

TEST_CASE("overrides apply before validation") {
  const Scenario s = load_scenario("name: x\n", {{"secondary.dt", "1e-2"}, {"primary.velocity", "[1, 2, 3]"}});
  CHECK(s.secondary.dt == 1e-2);
  CHECK(s.primary.velocity == Vec3{1, 2, 3});
  CHECK_THROWS_AS(load_scenario("name: x\n", {{"primary.mas", "2"}}), ParseError);
  CHECK_THROWS_AS(load_scenario("name: x\n", {{"name.inner", "2"}}), ParseError);
}

TEST_CASE("shipped scenarios round-trip through serialization") {
  for (const char* name : kShipped) {
    CAPTURE(name);
    const Scenario s = load_scenario_file(kDir + "/" + name + ".yaml");
    CHECK(s.name == name);
    const Scenario back = load_scenario(serialize_scenario(s));
    CHECK(back == s);
    CHECK(serialize_scenario(back) == serialize_scenario(s));
  }
}

TEST_CASE("missing file is a parse error") {
  CHECK_THROWS_AS(load_scenario_file(kDir + "/nope.yaml"), ParseError);
}

TEST_CASE("auto damping region is the net's bounding cylinder") {
  const Scenario s = load_scenario_file(kDir + "/basketball.yaml");
  REQUIRE(s.stand_in);
  CHECK(s.stand_in->auto_region);
  const CouplingMode m = build_mode(s, CouplingKind::Hybrid);
  const auto& field = std::get<DampingFieldStandIn>(*m.stand_in);
  const auto& cyl = std::get<CylinderRegion>(field.region);
  CHECK(cyl.radius == doctest::Approx(0.23));
  CHECK(build_mode(s, CouplingKind::OneWay).stand_in == std::nullopt);
}

TEST_CASE("spring grid on a box defaults to its bottom corners") {
  const Scenario s = load_scenario_file(kDir + "/mat.yaml");
  const CouplingMode m = build_mode(s, CouplingKind::Hybrid);
  const auto& grid = std::get<SpringGridStandIn>(*m.stand_in);
  REQUIRE(grid.contact_points.size() == 4);
  for (const Vec3& p : grid.contact_points) CHECK(p.y == doctest::Approx(-0.1));
}

TEST_CASE("bungee attachment resolves to the cord handle") {
  const Scenario s = load_scenario_file(kDir + "/bungee.yaml");
  const CoupledProblem p = build_problem(s);
  REQUIRE(p.attachment);
  CHECK(p.attachment->particle == 10);
  CHECK(p.primary->mass == 70.0);
}

TEST_CASE("water scenario has no secondary") {
  const Scenario s = load_scenario_file(kDir + "/water.yaml");
  const CoupledProblem p = build_problem(s);
  CHECK_FALSE(p.secondary);
  CHECK_THROWS_AS(build_secondary(s), ValidationError);
}
