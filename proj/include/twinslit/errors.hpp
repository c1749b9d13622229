#pragma once

#include <stdexcept>
#include <string>

namespace twinslit {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RegimeViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Velocity requested closer to a wave-function node than the node threshold.
struct NodeProximity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SamplingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AbortQuotaExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateSupport : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace twinslit
