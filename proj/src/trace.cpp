#include "simcouple/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "simcouple/errors.hpp"

namespace simcouple {

BodySample sample_body(const RigidBody& body, double t) {
  return {t, body.position, body.orientation, body.linear_velocity, body.angular_velocity};
}

void pose_body(RigidBody& body, const BodySample& s) {
  body.position = s.position;
  body.orientation = s.orientation;
  body.linear_velocity = s.linear_velocity;
  body.angular_velocity = s.angular_velocity;
}

void validate(const MotionTrace& trace) {
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const BodySample& s = trace.samples[i];
    if (!std::isfinite(s.t) || !s.position.is_finite() || !s.orientation.is_finite() ||
        !s.linear_velocity.is_finite() || !s.angular_velocity.is_finite()) {
      throw ValidationError("trace sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(s.t > trace.samples[i - 1].t)) {
      throw ValidationError("trace times must strictly increase");
    }
  }
}

BodySample interpolate_trace(const MotionTrace& trace, double t) {
  if (trace.empty() || !(t >= trace.t_min()) || !(t <= trace.t_max())) {
    throw PlaybackError("playback time " + std::to_string(t) + " outside recorded trace");
  }
  const auto& s = trace.samples;
  // First sample with time > t; the bracketing pair is (hi - 1, hi).
  const auto hi = std::upper_bound(s.begin(), s.end(), t, [](double v, const BodySample& b) { return v < b.t; });
  const auto lo = hi - 1;
  if (lo->t == t || hi == s.end()) {
    return *lo;
  }
  const double alpha = (t - lo->t) / (hi->t - lo->t);
  return {t, lerp(lo->position, hi->position, alpha), slerp(lo->orientation, hi->orientation, alpha),
          lerp(lo->linear_velocity, hi->linear_velocity, alpha),
          lerp(lo->angular_velocity, hi->angular_velocity, alpha)};
}

std::string format_exact(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return line;
}

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != header) {
    throw ParseError("expected CSV header '" + std::string(header) + "'");
  }
}

void write_vec(std::ostream& out, const Vec3& v) {
  out << ',' << format_exact(v.x) << ',' << format_exact(v.y) << ',' << format_exact(v.z);
}

}  // namespace

void write_trace_csv(std::ostream& out, const MotionTrace& trace) {
  out << kTraceHeader << '\n';
  for (const BodySample& s : trace.samples) {
    out << format_exact(s.t);
    write_vec(out, s.position);
    out << ',' << format_exact(s.orientation.w) << ',' << format_exact(s.orientation.x) << ','
        << format_exact(s.orientation.y) << ',' << format_exact(s.orientation.z);
    write_vec(out, s.linear_velocity);
    write_vec(out, s.angular_velocity);
    out << '\n';
  }
}

MotionTrace read_trace_csv(std::istream& in) {
  expect_header(in, kTraceHeader);
  MotionTrace trace;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) {
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 14) {
      throw ParseError("trace line " + std::to_string(line_no) + ": expected 14 fields");
    }
    double v[14];
    try {
      for (int i = 0; i < 14; ++i) {
        v[i] = parse_double(f[i]);
      }
    } catch (const ParseError& e) {
      throw ParseError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
    trace.samples.push_back(
        {v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6], v[7]}, {v[8], v[9], v[10]}, {v[11], v[12], v[13]}});
  }
  if (trace.samples.size() >= 2) {
    trace.interval = trace.samples[1].t - trace.samples[0].t;
  }
  validate(trace);
  return trace;
}

void write_secondary_csv(std::ostream& out, const SecondaryTrace& trace) {
  out << kSecondaryHeader << '\n';
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    const std::string t = format_exact(trace.t[k]);
    for (std::size_t i = 0; i < trace.positions[k].size(); ++i) {
      out << t << ',' << i;
      write_vec(out, trace.positions[k][i]);
      out << '\n';
    }
  }
}

void write_interaction_csv(std::ostream& out, const std::vector<InteractionRecord>& log) {
  out << kInteractionHeader << '\n';
  for (const auto& r : log) {
    out << format_exact(r.t);
    write_vec(out, r.force_on_primary);
    out << ',' << r.contact_count << '\n';
  }
}

std::vector<InteractionRecord> read_interaction_csv(std::istream& in) {
  expect_header(in, kInteractionHeader);
  std::vector<InteractionRecord> log;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) {
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 5) {
      throw ParseError("interaction log line " + std::to_string(line_no) + ": expected 5 fields");
    }
    InteractionRecord r;
    try {
      r.t = parse_double(f[0]);
      r.force_on_primary = {parse_double(f[1]), parse_double(f[2]), parse_double(f[3])};
      const double count = parse_double(f[4]);
      if (count < 0.0 || count != static_cast<double>(static_cast<int>(count))) {
        throw ParseError("contact_count must be a non-negative integer");
      }
      r.contact_count = static_cast<int>(count);
    } catch (const ParseError& e) {
      throw ParseError("interaction log line " + std::to_string(line_no) + ": " + e.what());
    }
    log.push_back(std::move(r));
  }
  return log;
}

}  // namespace simcouple
