#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "simcouple/interaction.hpp"
#include "simcouple/math.hpp"
#include "simcouple/rigid_body.hpp"

namespace simcouple {

struct BodySample {
  double t = 0.0;
  Vec3 position{};
  Quat orientation{};
  Vec3 linear_velocity{};
  Vec3 angular_velocity{};

  friend bool operator==(const BodySample&, const BodySample&) = default;
};

/// Time-stamped primary states at a fixed interval.
struct MotionTrace {
  double interval = 0.0;
  std::vector<BodySample> samples;

  bool empty() const { return samples.empty(); }
  double t_min() const { return samples.front().t; }
  double t_max() const { return samples.back().t; }

  friend bool operator==(const MotionTrace&, const MotionTrace&) = default;
};

BodySample sample_body(const RigidBody& body, double t);

/// Places `body` at the sampled pose and velocities (kinematic playback).
void pose_body(RigidBody& body, const BodySample& sample);

/// Throws ValidationError unless times strictly increase and states are finite.
void validate(const MotionTrace& trace);

/// State at time t: linear interpolation of position and velocities, slerp of
/// orientation. Returns a stored sample exactly when t hits its timestamp.
/// Throws PlaybackError when t lies outside [t_min, t_max].
BodySample interpolate_trace(const MotionTrace& trace, double t);

/// Particle positions of the secondary system at each output sample.
struct SecondaryTrace {
  std::vector<double> t;
  std::vector<std::vector<Vec3>> positions;

  friend bool operator==(const SecondaryTrace&, const SecondaryTrace&) = default;
};

/// Shortest decimal string that parses back to exactly `value`.
std::string format_exact(double value);
double parse_double(std::string_view text);

inline constexpr std::string_view kTraceHeader = "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz";
inline constexpr std::string_view kSecondaryHeader = "t,particle,x,y,z";
inline constexpr std::string_view kInteractionHeader = "t,fx,fy,fz,contact_count";

void write_trace_csv(std::ostream& out, const MotionTrace& trace);
/// The sample interval is inferred from the first two rows (0 if fewer).
MotionTrace read_trace_csv(std::istream& in);

void write_secondary_csv(std::ostream& out, const SecondaryTrace& trace);

void write_interaction_csv(std::ostream& out, const std::vector<InteractionRecord>& log);
/// Restores t, force_on_primary and contact_count; other fields stay default.
std::vector<InteractionRecord> read_interaction_csv(std::istream& in);

}  // namespace simcouple
