#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bcg/signal_config.hpp"

namespace bcg::dsp {

struct BandpassSpec {
  double pass_low_hz = 2.0;
  double pass_high_hz = 10.0;
  double stop_low_hz = 0.7;
  double stop_high_hz = 15.0;
  double min_stop_atten_db = 40.0;
  std::size_t tap_count = 101;

  // Throws InvalidSpec when the band edges are out of order, the attenuation
  // target is below 40 dB, or tap_count is not a positive odd number.
  void validate(const SignalConfig& cfg) const;
};

struct ResponsePoint {
  double frequency_hz;
  double magnitude_db;
};

/// Linear-phase FIR filter with frozen coefficients and a streaming history.
///
/// step() evaluates y[n] = sum_k h[k] x[n-k] with k ascending and zero
/// history before the first sample; filter() uses the same summation order,
/// so streaming and whole-sequence outputs are bit-identical.
class FirFilter {
 public:
  explicit FirFilter(std::vector<double> coefficients);

  double step(double x);
  void reset();

  const std::vector<double>& coefficients() const { return coefficients_; }
  std::size_t tap_count() const { return coefficients_.size(); }
  // (tap_count - 1) / 2 samples for a symmetric design.
  std::size_t group_delay() const { return (coefficients_.size() - 1) / 2; }

 private:
  std::vector<double> coefficients_;
  // Most recent input at history_[head_], older samples follow cyclically.
  std::vector<double> history_;
  std::size_t head_ = 0;
};

// Windowed-sinc (Kaiser) band-pass design. Cutoffs sit at the centers of the
// transition bands and the Kaiser beta is the largest the narrowest
// transition supports at this length. The result is checked on a dense grid;
// SpecUnachievable is thrown when the stopbands miss min_stop_atten_db.
FirFilter design_bandpass(const BandpassSpec& spec, const SignalConfig& cfg);

// |H(f)| in dB (20 log10) at `points` evenly spaced frequencies over
// [0, fs/2] inclusive.
std::vector<ResponsePoint> magnitude_response(std::span<const double> coefficients,
                                              const SignalConfig& cfg,
                                              std::size_t points = 2049);

double magnitude_at(std::span<const double> coefficients, double frequency_hz,
                    const SignalConfig& cfg);

// Whole-sequence convolution, zero history, output length equals input length.
std::vector<double> fir_filter(std::span<const double> coefficients,
                               std::span<const double> input);

}  // namespace bcg::dsp
