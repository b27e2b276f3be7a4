#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bcg/fir.hpp"
#include "bcg/moving_average.hpp"
#include "bcg/signal_config.hpp"

namespace bcg::dsp {

struct PipelineConfig {
  SignalConfig signal;
  BandpassSpec bandpass;
  double short_window_s = 0.06;  // 3 samples at 50 Hz
  double long_window_s = 0.3;    // 15 samples at 50 Hz
};

// Values of every stage for one input sample.
struct StageSample {
  double raw = 0.0;
  double bandpassed = 0.0;
  double cubed_ma = 0.0;
  double abs_ma = 0.0;
};

// Whole-sequence stage outputs, one vector per stage.
struct StageTrace {
  std::vector<double> raw;
  std::vector<double> bandpassed;
  std::vector<double> cubed_ma;
  std::vector<double> abs_ma;
};

// band-pass -> signed cube -> short moving average -> |.| -> long moving
// average. One sample in, one sample out.
class StagePipeline {
 public:
  explicit StagePipeline(const PipelineConfig& cfg);

  StageSample step(double x);
  void reset();

  const FirFilter& bandpass() const { return bandpass_; }
  std::size_t short_window() const { return short_.window_len(); }
  std::size_t long_window() const { return long_.window_len(); }

  // Samples between an event in the raw input and the matching apex of the
  // smoothed output: FIR group delay plus half of each averaging window.
  std::size_t delay() const;

 private:
  FirFilter bandpass_;
  MovingAverage short_;
  RectifiedAverage long_;
};

// Applies each stage to the whole sequence before moving to the next.
StageTrace run_stages(const PipelineConfig& cfg, std::span<const double> input);

}  // namespace bcg::dsp
