#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simcouple {

/// Base class for every error raised by the engine.
class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stepper met a non-finite state or input. `entity` is the offending
/// particle index, or `kPrimaryEntity` for the rigid body.
class InstabilityError : public SimError {
 public:
  static constexpr std::size_t kPrimaryEntity = static_cast<std::size_t>(-1);

  InstabilityError(const std::string& what, std::size_t entity) : SimError(what), entity_(entity) {}
  std::size_t entity() const { return entity_; }

 private:
  std::size_t entity_;
};

class DegenerateSpringError : public SimError {
 public:
  using SimError::SimError;
};

class DegenerateContactError : public SimError {
 public:
  using SimError::SimError;
};

/// Invalid builder dimensions or configuration values.
class ValidationError : public SimError {
 public:
  using SimError::SimError;
};

/// Malformed input text (scenario config, CSV).
class ParseError : public SimError {
 public:
  using SimError::SimError;
};

/// Trace playback outside the recorded time range.
class PlaybackError : public SimError {
 public:
  using SimError::SimError;
};

/// Output files that cannot be created or written.
class IoError : public SimError {
 public:
  using SimError::SimError;
};

}  // namespace simcouple
