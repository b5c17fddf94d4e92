#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "simcouple/errors.hpp"
#include "simcouple/sim_core.hpp"

using namespace simcouple;

TEST_CASE("step count covers the duration exactly") {
  CHECK(steps_for_duration(1.0, 1e-5) == 100000);
  CHECK(steps_for_duration(1.5, 1e-4) == 15000);
  CHECK(steps_for_duration(0.0, 1e-3) == 0);
  CHECK_THROWS_AS(steps_for_duration(1.0, 0.3), ValidationError);
  CHECK_THROWS_AS(steps_for_duration(1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(steps_for_duration(-1.0, 0.1), ValidationError);
}

TEST_CASE("sample stride rounds to whole steps") {
  CHECK(sample_stride(0.0833, 1e-5) == 8330);
  CHECK(sample_stride(1e-6, 1e-5) == 1);
  CHECK(sample_stride(0.25, 0.1) == 3);
}

TEST_CASE("semi-implicit Euler updates velocity before position") {
  Vec3 x{0, 0, 0}, v{1, 0, 0};
  step_semi_implicit(x, v, {0, -10, 0}, 0.1);
  CHECK(v.x == 1.0);
  CHECK(v.y == doctest::Approx(-1.0));
  CHECK(x.x == doctest::Approx(0.1));
  CHECK(x.y == doctest::Approx(-0.1));  // uses the new velocity
}

TEST_CASE("non-finite state names the offending entity") {
  std::vector<Vec3> x{{0, 0, 0}, {0, 0, 0}}, v{{0, 0, 0}, {0, 0, 0}};
  std::vector<Vec3> a{{0, 0, 0}, {std::numeric_limits<double>::infinity(), 0, 0}};
  try {
    step_semi_implicit(x, v, a, 0.1);
    FAIL("expected InstabilityError");
  } catch (const InstabilityError& e) {
    CHECK(e.entity() == 1);
  }
}

TEST_CASE("lockstep runs hooks in order and samples on the stride") {
  SimClock clock{0.1};
  std::vector<char> order;
  std::vector<double> samples;
  LockstepHooks h;
  h.interact = [&](double) { order.push_back('i'); };
  h.advance_primary = [&](double) { order.push_back('p'); };
  h.advance_secondary = [&](double) { order.push_back('s'); };
  h.check = [&]() -> std::optional<Instability> {
    order.push_back('c');
    return std::nullopt;
  };
  h.sample = [&](const SimClock& c) { samples.push_back(c.t()); };
  const RunStatus st = run_lockstep(clock, 1.0, 0.2, h);
  CHECK(st.completed);
  CHECK_FALSE(st.unstable());
  CHECK(st.steps_taken == 10);
  CHECK(st.t_end == doctest::Approx(1.0));
  REQUIRE(order.size() == 40);
  CHECK(std::string(order.begin(), order.begin() + 8) == "ipscipsc");
  REQUIRE(samples.size() == 6);
  CHECK(samples.front() == 0.0);
  CHECK(samples.back() == doctest::Approx(1.0));
}

TEST_CASE("clock time is reconstructed from the step index") {
  SimClock c{1e-5};
  for (int i = 0; i < 100000; ++i) c.tick();
  CHECK(c.t() == 1.0);
}

TEST_CASE("a failed check aborts with the samples taken so far") {
  SimClock clock{0.1};
  int n = 0;
  std::vector<double> samples;
  LockstepHooks h;
  h.check = [&]() -> std::optional<Instability> {
    if (++n == 3) return Instability{"boom", 7, false};
    return std::nullopt;
  };
  h.sample = [&](const SimClock& c) { samples.push_back(c.t()); };
  const RunStatus st = run_lockstep(clock, 1.0, 0.1, h);
  CHECK_FALSE(st.completed);
  REQUIRE(st.unstable());
  CHECK(st.instability->entity == 7);
  CHECK(st.instability->reason == "boom");
  CHECK(st.steps_taken == 3);
  CHECK(samples.size() >= 3);
}

TEST_CASE("a thrown instability also aborts") {
  SimClock clock{0.1};
  LockstepHooks h;
  h.advance_secondary = [](double) { throw InstabilityError("nan", 4); };
  const RunStatus st = run_lockstep(clock, 1.0, 0.1, h);
  REQUIRE(st.unstable());
  CHECK(st.instability->entity == 4);
  CHECK_FALSE(st.instability->in_primary);
}
