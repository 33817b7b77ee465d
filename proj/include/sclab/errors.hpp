#pragma once

#include <stdexcept>
#include <string>

namespace sclab {

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OutOfBounds : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidAnchor : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A reconstruction phase that cannot produce output. Carries the phase tag.
struct PhaseFailure : std::runtime_error {
  PhaseFailure(std::string phase_tag, const std::string& what)
      : std::runtime_error(what), phase(std::move(phase_tag)) {}
  std::string phase;
};

}  // namespace sclab
