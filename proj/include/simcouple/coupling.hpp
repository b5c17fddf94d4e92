#pragma once

#include <optional>
#include <vector>

#include "simcouple/aero.hpp"
#include "simcouple/interaction.hpp"
#include "simcouple/mass_spring.hpp"
#include "simcouple/metrics.hpp"
#include "simcouple/rigid_body.hpp"
#include "simcouple/sim_core.hpp"
#include "simcouple/stand_in.hpp"
#include "simcouple/trace.hpp"

namespace simcouple {

struct CouplingMode {
  CouplingKind kind = CouplingKind::TwoWay;
  std::optional<StandIn> stand_in;  // required by, and only used by, Hybrid
};

/// Throws ValidationError when a hybrid mode lacks a stand-in.
void validate(const CouplingMode& mode);

/// Zero-rest-length link tying a secondary particle to a body-frame point on
/// the primary (the bungee cord's handle). Acts equal-and-opposite.
struct AttachmentLink {
  std::size_t particle = 0;
  Vec3 body_point{};
  double stiffness = 1e5;
  double damping = 100.0;
  friend bool operator==(const AttachmentLink&, const AttachmentLink&) = default;
};

/// Everything a coupled run needs, independent of how it was configured.
struct CoupledProblem {
  std::optional<RigidBody> primary;
  double dt_primary = 1e-5;
  std::optional<MassSpringSystem> secondary;
  double dt_secondary = 1e-5;

  ContactForceModel contact;
  std::optional<AttachmentLink> attachment;  // replaces contact detection when set
  GravityModel gravity;
  WindField wind;
  std::optional<AeroModel> aero;
  /// Moves the wind source along the primary's path.
  bool wind_follows_primary = false;
  /// Static ground under the secondary particles (primary unaffected).
  std::optional<double> ground_height;

  double duration = 1.0;
  double output_interval = 0.0833;
  double velocity_ceiling = kDefaultVelocityCeiling;
  /// One-way depth above which a contact counts as a constraint violation.
  double violation_depth = 0.05;
  bool keep_contacts = false;
};

struct CouplingResult {
  MotionTrace primary;       // at the output interval
  MotionTrace primary_fine;  // every primary step (one-way and hybrid only)
  SecondaryTrace secondary;  // at the output interval
  std::vector<InteractionRecord> log;  // one record per secondary step
  std::vector<Wrench> stand_in_log;     // one entry per hybrid primary step
  RunStatus status;
  double dt_used = 0.0;
  double max_secondary_displacement = 0.0;
  int constraint_violations = 0;  // steps with a contact deeper than violation_depth
  double wall_primary_seconds = 0.0;
  double wall_secondary_seconds = 0.0;
  double wall_total_seconds = 0.0;
};

/// Both systems in lockstep at min(dt_primary, dt_secondary); contact or
/// attachment forces act equal-and-opposite.
CouplingResult run_two_way(const CoupledProblem& problem);

/// Phase 1 simulates the primary alone, recording every step. Phase 2 replays
/// that trace (interpolated when it is coarser than dt_secondary) as a
/// kinematic obstacle that pushes the secondary without feeling it.
CouplingResult run_one_way(const CoupledProblem& problem);

/// As run_one_way, but phase 1 applies the stand-in's wrench to the primary.
CouplingResult run_hybrid(const CoupledProblem& problem, const StandIn& stand_in);

CouplingResult run_coupled(const CoupledProblem& problem, const CouplingMode& mode);

inline double horizontal_speed(const Vec3& v) { return std::hypot(v.x, v.z); }

/// Horizontal speed of the primary at the last recorded sample.
double exit_horizontal_speed(const MotionTrace& trace);

}  // namespace simcouple
