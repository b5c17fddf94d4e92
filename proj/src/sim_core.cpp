#include "simcouple/sim_core.hpp"

#include <cmath>
#include <string>

#include "simcouple/errors.hpp"

namespace simcouple {

std::int64_t steps_for_duration(double duration, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("time step must be positive and finite");
  }
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw ValidationError("duration must be non-negative and finite");
  }
  const double ratio = duration / dt;
  const auto steps = static_cast<std::int64_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
    throw ValidationError("duration " + std::to_string(duration) + " is not a multiple of dt " +
                          std::to_string(dt));
  }
  return steps;
}

std::int64_t sample_stride(double interval, double dt) {
  if (!(interval > 0.0)) {
    throw ValidationError("output interval must be positive");
  }
  return std::max<std::int64_t>(1, std::llround(interval / dt));
}

void step_semi_implicit(std::span<Vec3> positions, std::span<Vec3> velocities,
                        std::span<const Vec3> accelerations, double dt) {
  if (positions.size() != velocities.size() || positions.size() != accelerations.size()) {
    throw ValidationError("state arrays differ in length");
  }
  if (!(dt > 0.0)) {
    throw ValidationError("time step must be positive");
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!accelerations[i].is_finite()) {
      throw InstabilityError("non-finite acceleration", i);
    }
    velocities[i] += accelerations[i] * dt;
    positions[i] += velocities[i] * dt;
    if (!velocities[i].is_finite() || !positions[i].is_finite()) {
      throw InstabilityError("non-finite state after integration", i);
    }
  }
}

void step_semi_implicit(Vec3& position, Vec3& velocity, const Vec3& acceleration, double dt) {
  step_semi_implicit(std::span<Vec3>(&position, 1), std::span<Vec3>(&velocity, 1),
                     std::span<const Vec3>(&acceleration, 1), dt);
}

RunStatus run_lockstep(SimClock& clock, double duration, double sample_interval,
                       const LockstepHooks& hooks) {
  const std::int64_t steps = steps_for_duration(duration, clock.dt);
  const std::int64_t stride = sample_stride(sample_interval, clock.dt);

  RunStatus status;
  if (hooks.sample) {
    hooks.sample(clock);
  }
  for (std::int64_t n = 0; n < steps; ++n) {
    try {
      if (hooks.interact) {
        hooks.interact(clock.t());
      }
      if (hooks.advance_primary) {
        hooks.advance_primary(clock.dt);
      }
      if (hooks.advance_secondary) {
        hooks.advance_secondary(clock.dt);
      }
    } catch (const InstabilityError& e) {
      clock.tick();
      status.completed = false;
      status.instability = Instability{e.what(), e.entity(), e.entity() == InstabilityError::kPrimaryEntity};
      break;
    }
    clock.tick();
    ++status.steps_taken;

    if (hooks.check) {
      if (auto bad = hooks.check()) {
        status.completed = false;
        status.instability = std::move(bad);
        if (hooks.sample) {
          hooks.sample(clock);
        }
        break;
      }
    }
    if (hooks.sample && clock.step_index % stride == 0) {
      hooks.sample(clock);
    }
  }
  status.t_end = clock.t();
  return status;
}

}  // namespace simcouple
