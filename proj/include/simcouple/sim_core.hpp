#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "simcouple/math.hpp"

namespace simcouple {

/// Fixed-step clock. Time is always reconstructed as step_index * dt so that
/// no rounding error accumulates over long runs.
struct SimClock {
  double dt = 1e-5;
  std::int64_t step_index = 0;

  double t() const { return static_cast<double>(step_index) * dt; }
  void tick() { ++step_index; }
};

/// Number of fixed steps covering `duration`. Throws ValidationError unless
/// duration is a non-negative multiple of dt (to 1e-9 relative).
std::int64_t steps_for_duration(double duration, double dt);

/// Steps between output samples: round(interval / dt), at least 1.
std::int64_t sample_stride(double interval, double dt);

/// Semi-implicit (symplectic) Euler: v' = v + a dt, then x' = x + v' dt.
/// Throws InstabilityError naming the first offending index if any input or
/// result is non-finite.
void step_semi_implicit(std::span<Vec3> positions, std::span<Vec3> velocities,
                        std::span<const Vec3> accelerations, double dt);

/// Single-entity convenience overload.
void step_semi_implicit(Vec3& position, Vec3& velocity, const Vec3& acceleration, double dt);

struct Instability {
  std::string reason;
  std::size_t entity = 0;
  bool in_primary = false;
};

/// Outcome of a scheduler run.
struct RunStatus {
  bool completed = true;
  std::int64_t steps_taken = 0;
  double t_end = 0.0;
  std::optional<Instability> instability;

  bool unstable() const { return instability.has_value(); }
};

/// Callbacks making up one lockstep step. Any hook may be left empty.
///
/// Each step: interact(t) computes interaction forces from the current joint
/// state and deposits them in both systems' accumulators, then the primary and
/// the secondary advance by the same dt, then check() runs. sample() is called
/// for the initial state and after every `stride`-th step.
struct LockstepHooks {
  std::function<void(double t)> interact;
  std::function<void(double dt)> advance_primary;
  std::function<void(double dt)> advance_secondary;
  std::function<void(const SimClock&)> sample;
  std::function<std::optional<Instability>()> check;
};

/// Advances both systems on one shared clock for `duration`. Instabilities
/// (thrown InstabilityError or a failed check) abort the run; the returned
/// status carries the reason and all samples taken so far remain valid.
RunStatus run_lockstep(SimClock& clock, double duration, double sample_interval,
                       const LockstepHooks& hooks);

}  // namespace simcouple
