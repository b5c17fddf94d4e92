#include "simcouple/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "simcouple/errors.hpp"
#include "simcouple/trace.hpp"

namespace simcouple {

StabilityStatus detect_instability(const MassSpringSystem& system, double velocity_ceiling) {
  const double ceiling2 = velocity_ceiling * velocity_ceiling;
  for (std::size_t i = 0; i < system.particles.size(); ++i) {
    const Particle& p = system.particles[i];
    if (!p.position.is_finite() || !p.velocity.is_finite()) {
      return {false, i, "non-finite state at particle " + std::to_string(i)};
    }
    if (p.velocity.squared_norm() > ceiling2) {
      return {false, i, "particle " + std::to_string(i) + " exceeds velocity ceiling"};
    }
  }
  return {};
}

StabilityStatus detect_instability(const RigidBody& body, double velocity_ceiling) {
  if (!body.position.is_finite() || !body.linear_velocity.is_finite() || !body.angular_velocity.is_finite() ||
      !body.orientation.is_finite()) {
    return {false, 0, "non-finite rigid body state"};
  }
  if (body.linear_velocity.norm() > velocity_ceiling) {
    return {false, 0, "rigid body exceeds velocity ceiling"};
  }
  return {};
}

InteractionStats summarize_interaction(const std::vector<InteractionRecord>& log, double primary_mass,
                                       const WindowPolicy& policy) {
  if (log.empty()) {
    throw ValidationError("interaction log is empty");
  }
  if (!(primary_mass > 0.0)) {
    throw ValidationError("primary mass must be positive");
  }

  InteractionStats stats;
  std::size_t contact_steps = 0;
  std::size_t first = log.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log[i].contact_count > 0) {
      ++contact_steps;
      first = std::min(first, i);
      last = i;
    }
  }
  stats.contact_fraction = static_cast<double>(contact_steps) / static_cast<double>(log.size());
  if (contact_steps == 0) {
    return stats;
  }

  // Steps in the sustained-contact window starting at the first contact.
  const double t0 = log[first].t;
  std::size_t window_end = first;
  std::size_t window_contacts = 0;
  while (window_end < log.size() && log[window_end].t < t0 + policy.sustained_duration) {
    window_contacts += log[window_end].contact_count > 0 ? 1 : 0;
    ++window_end;
  }
  const bool log_covers_window = window_end < log.size();
  const std::size_t window_steps = window_end - first;
  stats.sustained = log_covers_window &&
                    static_cast<double>(window_contacts) >= policy.sustained_fraction * static_cast<double>(window_steps);

  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  const auto take = [&](const InteractionRecord& r) {
    const double f = r.force_on_primary.norm();
    sum += f;
    lo = std::min(lo, f);
    hi = std::max(hi, f);
    ++stats.samples;
  };
  if (stats.sustained) {
    for (std::size_t i = first; i < window_end; ++i) {
      take(log[i]);
    }
    stats.window_start = t0;
    stats.window_end = t0 + policy.sustained_duration;
  } else {
    for (std::size_t i = first; i <= last; ++i) {
      if (log[i].contact_count > 0) {
        take(log[i]);
      }
    }
    stats.window_start = t0;
    stats.window_end = log[last].t;
  }
  stats.force_min = lo;
  stats.force_max = hi;
  stats.force_mean = sum / static_cast<double>(stats.samples);
  stats.accel_min = stats.force_min / primary_mass;
  stats.accel_max = stats.force_max / primary_mass;
  stats.accel_mean = stats.force_mean / primary_mass;
  return stats;
}

std::string to_string(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::TwoWay: return "two_way";
    case CouplingKind::OneWay: return "one_way";
    case CouplingKind::Hybrid: return "hybrid";
  }
  return "unknown";
}

Recommendation recommend_coupling(const AdvisorInput& in, double accel_threshold) {
  Recommendation rec;
  std::string why;
  const bool small = in.stats.accel_mean < accel_threshold;
  const bool negligible = small || !in.contextually_important;
  if (small) {
    why += "mean effective acceleration " + format_exact(in.stats.accel_mean) + " m/s^2 is below the " +
           format_exact(accel_threshold) + " m/s^2 threshold; ";
  } else {
    why += "mean effective acceleration " + format_exact(in.stats.accel_mean) + " m/s^2 is not below the " +
           format_exact(accel_threshold) + " m/s^2 threshold; ";
  }
  if (!in.contextually_important) {
    why += "the interaction is contextually unimportant; ";
  }

  if (negligible && in.secondary_stable_under_one_way) {
    rec.mode = CouplingKind::OneWay;
    rec.rationale = why + "the secondary stays stable when driven one-way -> one_way";
    return rec;
  }
  if (negligible) {
    why += "but the secondary is unstable under one-way driving; ";
  } else {
    why += "the effect on the primary is significant; ";
  }
  if (in.two_way_cost_acceptable) {
    rec.mode = CouplingKind::TwoWay;
    rec.rationale = why + "two-way cost is acceptable -> two_way";
    return rec;
  }
  why += "two-way cost is not acceptable; ";
  if (in.stand_in_available) {
    rec.mode = CouplingKind::Hybrid;
    rec.rationale = why + "a stand-in is available -> hybrid";
    return rec;
  }
  rec.mode = CouplingKind::TwoWay;
  rec.no_compromise = true;
  rec.rationale = why + "no stand-in is available -> two_way (warning: no reasonable compromise exists)";
  return rec;
}

std::string table_row(const InteractionStats& s, double primary_mass, const TableRowLabels& labels) {
  return labels.primary + "," + format_exact(primary_mass) + "," + labels.secondary + "," +
         format_exact(labels.secondary_mass) + "," + format_exact(s.force_min) + "," + format_exact(s.force_max) +
         "," + format_exact(s.force_mean) + "," + format_exact(s.accel_min) + "," + format_exact(s.accel_max) + "," +
         format_exact(s.accel_mean);
}

void write_stats_report(std::ostream& out, const InteractionStats& s, double primary_mass) {
  out << "primary_mass: " << format_exact(primary_mass) << '\n'
      << "contact_fraction: " << format_exact(s.contact_fraction) << '\n'
      << "samples: " << s.samples << '\n'
      << "sustained: " << (s.sustained ? "true" : "false") << '\n'
      << "window_start: " << format_exact(s.window_start) << '\n'
      << "window_end: " << format_exact(s.window_end) << '\n'
      << "force_min: " << format_exact(s.force_min) << '\n'
      << "force_max: " << format_exact(s.force_max) << '\n'
      << "force_mean: " << format_exact(s.force_mean) << '\n'
      << "accel_min: " << format_exact(s.accel_min) << '\n'
      << "accel_max: " << format_exact(s.accel_max) << '\n'
      << "accel_mean: " << format_exact(s.accel_mean) << '\n';
}

}  // namespace simcouple
