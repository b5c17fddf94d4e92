#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simcouple/aero.hpp"
#include "simcouple/coupling.hpp"
#include "simcouple/interaction.hpp"
#include "simcouple/mass_spring.hpp"
#include "simcouple/metrics.hpp"
#include "simcouple/rigid_body.hpp"
#include "simcouple/stand_in.hpp"

namespace simcouple {

enum class PrimaryShape { None, Sphere, Box };
enum class SecondaryKind { None, Net, Grid, Cord };

struct PrimarySpec {
  PrimaryShape shape = PrimaryShape::Sphere;
  double mass = 0.68;
  double radius = 0.12;
  Vec3 half_extents{0.1, 0.1, 0.1};
  /// Scalar sphere inertia; 0 selects the solid-sphere value.
  double inertia = 0.0;
  Vec3 position{};
  Quat orientation{};
  Vec3 velocity{};
  Vec3 angular_velocity{};
  double dt = 1e-5;

  friend bool operator==(const PrimarySpec&, const PrimarySpec&) = default;
};

struct SecondarySpec {
  SecondaryKind kind = SecondaryKind::Net;
  std::string material = "nylon-net";
  std::optional<double> mass;            // overrides the preset's total mass
  std::optional<double> stiffness;       // overrides the preset's stiffness
  std::optional<double> global_damping;  // overrides the preset's global damping
  double dt = 1e-5;
  NetParams net;
  GridParams grid;
  CordParams cord;

  friend bool operator==(const SecondarySpec&, const SecondarySpec&) = default;
};

struct WindSpec {
  Vec3 uniform{};
  bool source = false;
  double strength = 1.0;
  double falloff_radius = 1.0;
  double core_radius = 1e-6;
  Vec3 source_position{};
  bool follow_primary = false;

  friend bool operator==(const WindSpec&, const WindSpec&) = default;
};

struct EnvironmentSpec {
  GravityModel gravity;
  WindSpec wind;
  std::optional<AeroModel> aero;
  std::optional<double> ground_height;

  friend bool operator==(const EnvironmentSpec&, const EnvironmentSpec&) = default;
};

/// A stand-in as configured. A damping field without an explicit region uses
/// the bounding cylinder of the secondary's rest configuration.
struct StandInSpec {
  StandIn stand_in{DampingFieldStandIn{}};
  bool auto_region = false;

  friend bool operator==(const StandInSpec&, const StandInSpec&) = default;
};

struct AttachmentSpec {
  /// Particle index; negative selects the cord handle (last particle).
  long particle = -1;
  Vec3 body_point{};
  double stiffness = 1e5;
  double damping = 100.0;

  friend bool operator==(const AttachmentSpec&, const AttachmentSpec&) = default;
};

struct Scenario {
  std::string name = "scenario";
  CouplingKind mode = CouplingKind::TwoWay;
  double duration = 1.5;
  double output_interval = 0.0833;
  double velocity_ceiling = kDefaultVelocityCeiling;
  double violation_depth = 0.05;
  PrimarySpec primary;
  SecondarySpec secondary;
  ContactForceModel contact;
  EnvironmentSpec environment;
  std::optional<StandInSpec> stand_in;
  std::optional<AttachmentSpec> attachment;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

using Override = std::pair<std::string, std::string>;

/// Parses a YAML scenario. `overrides` are dotted key paths with YAML values
/// (e.g. {"secondary.dt", "1e-2"}) applied before validation. Throws
/// ParseError (with line and column) on malformed text or unknown keys and
/// ValidationError naming the field on bad values.
Scenario load_scenario(std::string_view text, const std::vector<Override>& overrides = {});

/// Throws ParseError when the file cannot be read.
Scenario load_scenario_file(const std::string& path, const std::vector<Override>& overrides = {});

/// Canonical YAML form; load_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

/// Throws ValidationError naming the offending field.
void validate(const Scenario& scenario);

RigidBody build_primary(const Scenario& scenario);
MassSpringSystem build_secondary(const Scenario& scenario);
CoupledProblem build_problem(const Scenario& scenario);
CouplingMode build_mode(const Scenario& scenario, CouplingKind kind);

struct RunArtifacts {
  CouplingKind mode = CouplingKind::TwoWay;
  CouplingResult result;
  InteractionStats stats;
  double primary_mass = 0.0;
  double secondary_mass = 0.0;
};

/// Runs the scenario in its configured mode (or `mode` when given) and
/// summarizes the interaction log.
RunArtifacts run_scenario(const Scenario& scenario, std::optional<CouplingKind> mode = std::nullopt);

CouplingKind parse_coupling_kind(std::string_view text);

}  // namespace simcouple
