#pragma once

#include <cstddef>

namespace bcg {

struct SignalConfig {
  int sample_rate_hz = 50;

  // Throws InvalidConfig when the rate is not positive.
  void validate() const;
};

// Converts a duration to a whole number of samples at the given rate.
// Ties round to even, so 0.25 s at 50 Hz is 12 samples.
std::size_t samples_for(double seconds, int sample_rate_hz);

}  // namespace bcg
