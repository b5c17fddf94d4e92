#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "simcouple/interaction.hpp"
#include "simcouple/mass_spring.hpp"
#include "simcouple/rigid_body.hpp"

namespace simcouple {

// ---------------------------------------------------------------------------
// Instability detection

struct StabilityStatus {
  bool stable = true;
  std::size_t entity = 0;
  std::string reason;
};

inline constexpr double kDefaultVelocityCeiling = 1e4;

/// Flags the first particle with a non-finite position/velocity or a speed
/// above the ceiling.
StabilityStatus detect_instability(const MassSpringSystem& system,
                                   double velocity_ceiling = kDefaultVelocityCeiling);
StabilityStatus detect_instability(const RigidBody& body, double velocity_ceiling = kDefaultVelocityCeiling);

// ---------------------------------------------------------------------------
// Interaction statistics

/// Statistics of the per-step magnitude of the net interaction force on the
/// primary. Accelerations are the force statistics divided by the primary
/// mass.
struct InteractionStats {
  double force_min = 0.0;
  double force_max = 0.0;
  double force_mean = 0.0;
  double accel_min = 0.0;
  double accel_max = 0.0;
  double accel_mean = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  double contact_fraction = 0.0;
  std::size_t samples = 0;
  bool sustained = false;

  bool has_contact() const { return samples > 0; }
};

/// Contact counts as sustained when at least `sustained_fraction` of the steps
/// in the `sustained_duration` seconds after first contact are in contact.
struct WindowPolicy {
  double sustained_duration = 0.5;
  double sustained_fraction = 0.95;
};

/// Sustained contact: statistics over every step of the first
/// `sustained_duration` seconds after first contact. Otherwise: over every
/// step with contact. A log without contact yields empty statistics.
/// Throws ValidationError for an empty log or non-positive mass.
InteractionStats summarize_interaction(const std::vector<InteractionRecord>& log, double primary_mass,
                                       const WindowPolicy& policy = {});

// ---------------------------------------------------------------------------
// Coupling advisor

enum class CouplingKind { TwoWay, OneWay, Hybrid };

std::string to_string(CouplingKind kind);

struct AdvisorInput {
  InteractionStats stats;
  bool contextually_important = true;
  bool secondary_stable_under_one_way = true;
  bool stand_in_available = false;
  bool two_way_cost_acceptable = true;
};

struct Recommendation {
  CouplingKind mode = CouplingKind::TwoWay;
  /// Set when no coupling gives a reasonable compromise.
  bool no_compromise = false;
  std::string rationale;
};

inline constexpr double kDefaultAccelThreshold = 1.0;

/// One-way if the interaction is negligible (mean acceleration below the
/// threshold, or contextually unimportant) and the secondary stays stable
/// when driven one-way; otherwise two-way if affordable; otherwise hybrid if a
/// stand-in exists; otherwise two-way with a no-compromise warning.
Recommendation recommend_coupling(const AdvisorInput& input, double accel_threshold = kDefaultAccelThreshold);

// ---------------------------------------------------------------------------
// Reports

struct TableRowLabels {
  std::string primary = "primary";
  std::string secondary = "secondary";
  double secondary_mass = 0.0;
};

inline constexpr const char* kTableHeader =
    "primary,primary_mass,secondary,secondary_mass,force_min,force_max,force_mean,accel_min,accel_max,accel_mean";

/// One CSV row in the column order of kTableHeader.
std::string table_row(const InteractionStats& stats, double primary_mass, const TableRowLabels& labels);

/// "key: value" lines.
void write_stats_report(std::ostream& out, const InteractionStats& stats, double primary_mass);

}  // namespace simcouple
