#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bcg/signal_config.hpp"

namespace bcg::synth {

struct MotionBurst {
  double start_s = 0.0;
  double duration_s = 1.0;
  double gain = 2.0;
};

struct SynthConfig {
  double duration_s = 60.0;
  double mean_hr_bpm = 72.0;
  double hr_jitter_pct = 0.0;         // uniform +/- on each J-J interval
  double beat_amplitude = 1.0;
  double amplitude_jitter_pct = 0.0;  // uniform +/- on each beat amplitude
  double respiration_hz = 0.25;
  double respiration_amplitude = 2.0;
  // White Gaussian noise at this SNR against the RMS of the beat train.
  std::optional<double> noise_snr_db;
  std::vector<MotionBurst> motion_bursts;
  std::uint64_t seed = 1;

  // IJK wavelet: Gaussian-enveloped cosine peaking at the J wave.
  double carrier_hz = 6.0;
  double envelope_sigma_s = 0.06;

  void validate() const;
};

struct HrPoint {
  std::int64_t at_sample = 0;
  double bpm = 0.0;
};

struct GroundTruth {
  std::vector<std::int64_t> beat_indices;  // J apex, nearest sample
  std::vector<double> beat_times_s;        // exact apex times
  // Every 3 s: 60 / mean of the last (up to 8) J-J intervals ending by then.
  std::vector<HrPoint> true_hr_series;
};

struct SynthSignal {
  std::vector<double> samples;  // composite sensor signal
  std::vector<double> cardiac;  // beat train alone, before bursts and noise
  GroundTruth truth;
};

// Deterministic in (cfg, sig): the same seed yields bit-identical output.
// Throws InvalidConfig on out-of-range parameters.
SynthSignal generate(const SynthConfig& cfg, const SignalConfig& sig);

}  // namespace bcg::synth
