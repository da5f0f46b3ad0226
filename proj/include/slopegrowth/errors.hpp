#ifndef SLOPEGROWTH_ERRORS_HPP
#define SLOPEGROWTH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slopegrowth {

// Bad caller-supplied value (unknown generator, mismatched alphabet, index
// out of range, ...).
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Inconsistent run configuration (dedup=off on an uncertified spec,
// non-positive lambda, window outside the horizon, ...).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or truncated persisted data.
struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A budgeted resource ran out; the message names the depth reached.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace slopegrowth

#endif
