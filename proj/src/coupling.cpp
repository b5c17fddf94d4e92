#include "simcouple/coupling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "simcouple/errors.hpp"

namespace simcouple {

void validate(const CouplingMode& mode) {
  if (mode.kind == CouplingKind::Hybrid && !mode.stand_in) {
    throw ValidationError("hybrid coupling requires a stand-in");
  }
  if (mode.stand_in) {
    validate(*mode.stand_in);
  }
}

double exit_horizontal_speed(const MotionTrace& trace) {
  if (trace.empty()) {
    throw ValidationError("empty trace has no exit speed");
  }
  return horizontal_speed(trace.samples.back().linear_velocity);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::optional<Instability> to_instability(const StabilityStatus& s, bool primary) {
  if (s.stable) {
    return std::nullopt;
  }
  return Instability{s.reason, s.entity, primary};
}

/// Steps the secondary and applies its environment (aero, ground).
class SecondaryStepper {
 public:
  SecondaryStepper(const CoupledProblem& problem, MassSpringSystem& system)
      : problem_(problem), system_(system), rest_(system.positions()), external_(system.size()) {}

  /// Deposits environment forces for the step starting at t.
  void apply_environment(double t, const WindField& wind) {
    std::fill(external_.begin(), external_.end(), kZero);
    if (problem_.aero) {
      accumulate_aero_forces(system_, wind, *problem_.aero, t, external_);
    }
    if (problem_.ground_height) {
      for (const Contact& c : detect_ground_contacts(system_, *problem_.ground_height)) {
        external_[c.particle] += contact_force(c, problem_.contact);
      }
    }
  }

  void step(double dt) {
    step_mass_spring(system_, problem_.gravity, external_, dt);
    for (std::size_t i = 0; i < system_.particles.size(); ++i) {
      const double d2 = (system_.particles[i].position - rest_[i]).squared_norm();
      max_displacement2_ = std::max(max_displacement2_, d2);
    }
  }

  double max_displacement() const { return std::sqrt(max_displacement2_); }

 private:
  const CoupledProblem& problem_;
  MassSpringSystem& system_;
  std::vector<Vec3> rest_;
  std::vector<Vec3> external_;
  double max_displacement2_ = 0.0;
};

InteractionRecord attachment_interaction(const AttachmentLink& link, RigidBody& body, MassSpringSystem& system,
                                         bool two_way, double t) {
  Particle& p = system.particles.at(link.particle);
  const Vec3 wp = body.to_world(link.body_point);
  const Vec3 f = (wp - p.position) * link.stiffness + (body.point_velocity(wp) - p.velocity) * link.damping;
  p.force_accum += f;
  if (two_way) {
    apply_force_at_point(body, -f, wp);
  }
  InteractionRecord rec;
  rec.t = t;
  rec.force_on_primary = -f;
  rec.torque_on_primary = (wp - body.position).cross(-f);
  rec.contact_count = 1;
  return rec;
}

InteractionRecord interact(const CoupledProblem& problem, RigidBody& body, MassSpringSystem& system, bool two_way,
                           double t) {
  if (problem.attachment) {
    return attachment_interaction(*problem.attachment, body, system, two_way, t);
  }
  const std::vector<Contact> contacts = detect_contacts(body, system);
  return two_way ? apply_two_way(body, system, contacts, problem.contact, t, problem.keep_contacts)
                 : apply_one_way(system, contacts, problem.contact, t, problem.keep_contacts);
}

void check_problem(const CoupledProblem& problem) {
  if (problem.primary) {
    validate(*problem.primary);
  }
  if (problem.secondary) {
    validate(*problem.secondary);
  }
  validate(problem.contact);
  if (problem.attachment && (!problem.primary || !problem.secondary)) {
    throw ValidationError("an attachment link needs both a primary and a secondary");
  }
  if (problem.attachment && problem.attachment->particle >= problem.secondary->size()) {
    throw ValidationError("attachment particle index out of range");
  }
  if (!(problem.duration > 0.0)) {
    throw ValidationError("duration must be positive");
  }
}

void sample_secondary(CouplingResult& r, const MassSpringSystem& sys, double t) {
  r.secondary.t.push_back(t);
  r.secondary.positions.push_back(sys.positions());
}

/// Phase 1 of one-way and hybrid runs: the primary alone, optionally against
/// a stand-in. Fills primary_fine, primary and stand_in_log.
RunStatus simulate_primary(const CoupledProblem& problem, const StandIn* stand_in, CouplingResult& r) {
  RigidBody body = *problem.primary;
  SimClock clock{problem.dt_primary};
  r.primary_fine.interval = problem.dt_primary;

  LockstepHooks hooks;
  hooks.advance_primary = [&](double dt) {
    if (stand_in != nullptr) {
      const Wrench w = stand_in_force(*stand_in, body);
      apply_force(body, w.force);
      apply_torque(body, w.torque);
      r.stand_in_log.push_back(w);
    }
    step_rigid_body(body, problem.gravity, dt);
  };
  hooks.sample = [&](const SimClock& c) { r.primary_fine.samples.push_back(sample_body(body, c.t())); };
  hooks.check = [&] { return to_instability(detect_instability(body, problem.velocity_ceiling), true); };
  RunStatus status = run_lockstep(clock, problem.duration, problem.dt_primary, hooks);

  const std::int64_t stride = sample_stride(problem.output_interval, problem.dt_primary);
  r.primary.interval = static_cast<double>(stride) * problem.dt_primary;
  for (std::size_t i = 0; i < r.primary_fine.samples.size(); i += static_cast<std::size_t>(stride)) {
    r.primary.samples.push_back(r.primary_fine.samples[i]);
  }
  return status;
}

CouplingResult run_driven(const CoupledProblem& problem, const StandIn* stand_in) {
  check_problem(problem);
  const auto start = Clock::now();
  CouplingResult r;
  r.dt_used = problem.secondary ? problem.dt_secondary : problem.dt_primary;

  if (problem.primary) {
    const auto phase1 = Clock::now();
    r.status = simulate_primary(problem, stand_in, r);
    r.wall_primary_seconds = seconds_since(phase1);
    if (r.status.unstable()) {
      r.wall_total_seconds = seconds_since(start);
      return r;
    }
  }

  if (problem.secondary) {
    const auto phase2 = Clock::now();
    MassSpringSystem sys = *problem.secondary;
    SecondaryStepper stepper(problem, sys);
    std::optional<RigidBody> ghost = problem.primary;
    WindField wind = problem.wind;
    if (problem.wind_follows_primary && wind.source && problem.primary) {
      wind.source->path = [&r](double t) { return interpolate_trace(r.primary_fine, t).position; };
    }

    SimClock clock{problem.dt_secondary};
    LockstepHooks hooks;
    hooks.interact = [&](double t) {
      if (ghost) {
        pose_body(*ghost, interpolate_trace(r.primary_fine, t));
        InteractionRecord rec = interact(problem, *ghost, sys, false, t);
        if (rec.max_depth > problem.violation_depth) {
          ++r.constraint_violations;
        }
        r.log.push_back(std::move(rec));
      }
      stepper.apply_environment(t, wind);
    };
    hooks.advance_secondary = [&](double dt) { stepper.step(dt); };
    hooks.sample = [&](const SimClock& c) { sample_secondary(r, sys, c.t()); };
    hooks.check = [&] { return to_instability(detect_instability(sys, problem.velocity_ceiling), false); };
    r.status = run_lockstep(clock, problem.duration, problem.output_interval, hooks);
    r.max_secondary_displacement = stepper.max_displacement();
    r.wall_secondary_seconds = seconds_since(phase2);
  }
  r.wall_total_seconds = seconds_since(start);
  return r;
}

}  // namespace

CouplingResult run_two_way(const CoupledProblem& problem) {
  check_problem(problem);
  const auto start = Clock::now();
  CouplingResult r;

  double dt = 0.0;
  if (problem.primary && problem.secondary) {
    dt = std::min(problem.dt_primary, problem.dt_secondary);
  } else {
    dt = problem.primary ? problem.dt_primary : problem.dt_secondary;
  }
  r.dt_used = dt;

  std::optional<RigidBody> body = problem.primary;
  std::optional<MassSpringSystem> sys = problem.secondary;
  std::optional<SecondaryStepper> stepper;
  if (sys) {
    stepper.emplace(problem, *sys);
  }
  WindField wind = problem.wind;
  if (problem.wind_follows_primary && wind.source && body) {
    wind.source->path = [&body](double) { return body->position; };
  }

  const std::int64_t stride = sample_stride(problem.output_interval, dt);
  r.primary.interval = static_cast<double>(stride) * dt;

  SimClock clock{dt};
  LockstepHooks hooks;
  hooks.interact = [&](double t) {
    if (body && sys) {
      InteractionRecord rec = interact(problem, *body, *sys, true, t);
      if (rec.max_depth > problem.violation_depth) {
        ++r.constraint_violations;
      }
      r.log.push_back(std::move(rec));
    }
    if (stepper) {
      stepper->apply_environment(t, wind);
    }
  };
  if (body) {
    hooks.advance_primary = [&](double step) { step_rigid_body(*body, problem.gravity, step); };
  }
  if (sys) {
    hooks.advance_secondary = [&](double step) { stepper->step(step); };
  }
  hooks.sample = [&](const SimClock& c) {
    if (body) {
      r.primary.samples.push_back(sample_body(*body, c.t()));
    }
    if (sys) {
      sample_secondary(r, *sys, c.t());
    }
  };
  hooks.check = [&]() -> std::optional<Instability> {
    if (sys) {
      if (auto bad = to_instability(detect_instability(*sys, problem.velocity_ceiling), false)) {
        return bad;
      }
    }
    if (body) {
      return to_instability(detect_instability(*body, problem.velocity_ceiling), true);
    }
    return std::nullopt;
  };

  r.status = run_lockstep(clock, problem.duration, problem.output_interval, hooks);
  if (stepper) {
    r.max_secondary_displacement = stepper->max_displacement();
  }
  r.wall_total_seconds = seconds_since(start);
  r.wall_primary_seconds = r.wall_total_seconds;
  r.wall_secondary_seconds = r.wall_total_seconds;
  return r;
}

CouplingResult run_one_way(const CoupledProblem& problem) { return run_driven(problem, nullptr); }

CouplingResult run_hybrid(const CoupledProblem& problem, const StandIn& stand_in) {
  validate(stand_in);
  return run_driven(problem, &stand_in);
}

CouplingResult run_coupled(const CoupledProblem& problem, const CouplingMode& mode) {
  validate(mode);
  switch (mode.kind) {
    case CouplingKind::TwoWay: return run_two_way(problem);
    case CouplingKind::OneWay: return run_one_way(problem);
    case CouplingKind::Hybrid: return run_hybrid(problem, *mode.stand_in);
  }
  throw ValidationError("unknown coupling mode");
}

}  // namespace simcouple
