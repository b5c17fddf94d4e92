#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "simcouple/errors.hpp"
#include "simcouple/metrics.hpp"
#include "reference_stats.hpp"

using namespace simcouple;

namespace {

std::vector<InteractionRecord> constant_log(double f, double duration, double dt) {
  std::vector<InteractionRecord> log;
  for (int i = 0; i * dt < duration - 1e-12; ++i) {
    InteractionRecord r;
    r.t = i * dt;
    r.force_on_primary = {0, f, 0};
    r.contact_count = 1;
    log.push_back(r);
  }
  return log;
}

}  // namespace

TEST_CASE("constant force for one second") {
  const InteractionStats s = summarize_interaction(constant_log(10.0, 1.0, 1e-3), 2.0);
  CHECK(s.sustained);
  CHECK(s.force_min == 10.0);
  CHECK(s.force_max == 10.0);
  CHECK(s.force_mean == doctest::Approx(10.0));
  CHECK(s.accel_mean == doctest::Approx(5.0));
  CHECK(s.window_end - s.window_start == doctest::Approx(0.5));
  CHECK(s.samples == 500);
}

TEST_CASE("published rows: accelerations follow from forces") {
  for (const ReferenceRow& row : kReferenceStats) {
    CAPTURE(row.secondary);
    const InteractionStats s = summarize_interaction(synthetic_log(row), row.primary_mass);
    CHECK_FALSE(s.sustained);
    CHECK(s.force_min == doctest::Approx(row.force_min));
    CHECK(s.force_max == doctest::Approx(row.force_max));
    CHECK(s.force_mean == doctest::Approx(row.force_mean));
    CHECK(std::abs(s.accel_min - row.accel_min) < 0.1);
    CHECK(std::abs(s.accel_max - row.accel_max) < 0.1);
    CHECK(std::abs(s.accel_mean - row.accel_mean) < 0.1);
    // Accelerations are the force figures divided by mass, bit for bit.
    CHECK(s.accel_mean == s.force_mean / row.primary_mass);
    CHECK(s.accel_max == s.force_max / row.primary_mass);
  }
  CHECK(2215.2 / 64.38 == doctest::Approx(34.41).epsilon(1e-3));
  CHECK(575.0 / 46.56 == doctest::Approx(12.35).epsilon(1e-3));
}

TEST_CASE("intermittent contact: statistics over contact steps only") {
  auto log = constant_log(4.0, 1.0, 1e-2);
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (i % 2 == 1) {
      log[i].contact_count = 0;
      log[i].force_on_primary = kZero;
    }
  }
  const InteractionStats s = summarize_interaction(log, 1.0);
  CHECK_FALSE(s.sustained);
  CHECK(s.force_min == 4.0);
  CHECK(s.contact_fraction == doctest::Approx(0.5));
}

TEST_CASE("no contact gives empty statistics") {
  std::vector<InteractionRecord> log(10);
  const InteractionStats s = summarize_interaction(log, 1.0);
  CHECK_FALSE(s.has_contact());
  CHECK(s.contact_fraction == 0.0);
  CHECK_THROWS_AS(summarize_interaction({}, 1.0), ValidationError);
  CHECK_THROWS_AS(summarize_interaction(log, 0.0), ValidationError);
}

TEST_CASE("order within a step does not matter") {
  auto log = constant_log(3.0, 0.2, 1e-3);
  std::mt19937 rng(7);
  for (auto& r : log) r.force_on_primary = {std::uniform_real_distribution<>(0, 5)(rng), 0, 0};
  const InteractionStats a = summarize_interaction(log, 1.5);
  const InteractionStats b = summarize_interaction(log, 1.5);
  CHECK(a.force_mean == b.force_mean);
}

TEST_CASE("instability detection") {
  MassSpringSystem sys;
  sys.particles.resize(3);
  CHECK(detect_instability(sys).stable);
  sys.particles[2].position.x = std::numeric_limits<double>::quiet_NaN();
  auto st = detect_instability(sys);
  CHECK_FALSE(st.stable);
  CHECK(st.entity == 2);
  sys.particles[2].position.x = 0.0;
  sys.particles[1].velocity = {1e5, 0, 0};
  st = detect_instability(sys);
  CHECK_FALSE(st.stable);
  CHECK(st.entity == 1);

  RigidBody b = make_sphere(1.0, 0.1);
  CHECK(detect_instability(b).stable);
  b.linear_velocity = {2e4, 0, 0};
  CHECK_FALSE(detect_instability(b).stable);
}

TEST_CASE("advisor: clothing, trampoline and basketball cases") {
  AdvisorInput vest;
  vest.stats.accel_mean = 0.15;
  CHECK(recommend_coupling(vest).mode == CouplingKind::OneWay);

  AdvisorInput trampoline;
  trampoline.stats.accel_mean = 34.41;
  CHECK(recommend_coupling(trampoline).mode == CouplingKind::TwoWay);

  AdvisorInput ball;
  ball.stats.accel_mean = 23.14;
  ball.two_way_cost_acceptable = false;
  ball.stand_in_available = true;
  const Recommendation r = recommend_coupling(ball);
  CHECK(r.mode == CouplingKind::Hybrid);
  CHECK(r.rationale.find("stand-in") != std::string::npos);

  ball.stand_in_available = false;
  const Recommendation none = recommend_coupling(ball);
  CHECK(none.mode == CouplingKind::TwoWay);
  CHECK(none.no_compromise);
}

TEST_CASE("advisor threshold is strict") {
  AdvisorInput in;
  in.stats.accel_mean = 1.0;
  CHECK(recommend_coupling(in).mode == CouplingKind::TwoWay);
  in.stats.accel_mean = 0.999;
  CHECK(recommend_coupling(in).mode == CouplingKind::OneWay);
  CHECK(recommend_coupling(in, 0.5).mode == CouplingKind::TwoWay);
}

TEST_CASE("report formats") {
  InteractionStats s;
  s.force_max = 59.9;
  s.accel_max = 59.9 / 0.68;
  TableRowLabels l{"Ball", "Net", 0.03};
  const std::string row = table_row(s, 0.68, l);
  CHECK(row.rfind("Ball,0.68,Net,0.03,0,59.9,", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == 9);
  std::ostringstream out;
  write_stats_report(out, s, 0.68);
  CHECK(out.str().find("force_max: 59.9") != std::string::npos);
}
