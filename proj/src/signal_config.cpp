#include "bcg/signal_config.hpp"

#include <cmath>
#include <string>

#include "bcg/errors.hpp"

namespace bcg {

void SignalConfig::validate() const {
  if (sample_rate_hz <= 0) {
    throw InvalidConfig("sample_rate_hz must be positive, got " +
                        std::to_string(sample_rate_hz));
  }
}

std::size_t samples_for(double seconds, int sample_rate_hz) {
  const double exact = seconds * static_cast<double>(sample_rate_hz);
  // Strip representation noise (0.06 * 50 == 3.0000000000000004) before the
  // ties-to-even rounding.
  const double cleaned = std::round(exact * 1e9) / 1e9;
  const double rounded = std::nearbyint(cleaned);
  return rounded <= 0.0 ? 0 : static_cast<std::size_t>(rounded);
}

}  // namespace bcg
