#include "bcg/pipeline.hpp"

#include <algorithm>

#include "bcg/errors.hpp"

namespace bcg::dsp {

namespace {

std::size_t window_samples(double seconds, int rate, const char* name) {
  const std::size_t n = samples_for(seconds, rate);
  if (n == 0) {
    throw InvalidConfig(std::string(name) + " is shorter than one sample at " +
                        std::to_string(rate) + " Hz");
  }
  return n;
}

}  // namespace

StagePipeline::StagePipeline(const PipelineConfig& cfg)
    : bandpass_(design_bandpass(cfg.bandpass, cfg.signal)),
      short_(window_samples(cfg.short_window_s, cfg.signal.sample_rate_hz, "short_window_s")),
      long_(window_samples(cfg.long_window_s, cfg.signal.sample_rate_hz, "long_window_s")) {}

StageSample StagePipeline::step(double x) {
  StageSample s;
  s.raw = x;
  s.bandpassed = bandpass_.step(x);
  s.cubed_ma = short_.step(signed_cube(s.bandpassed));
  s.abs_ma = long_.step(s.cubed_ma);
  return s;
}

void StagePipeline::reset() {
  bandpass_.reset();
  short_.reset();
  long_.reset();
}

std::size_t StagePipeline::delay() const {
  return bandpass_.group_delay() + (short_.window_len() - 1) / 2 +
         (long_.window_len() - 1) / 2;
}

StageTrace run_stages(const PipelineConfig& cfg, std::span<const double> input) {
  const FirFilter bp = design_bandpass(cfg.bandpass, cfg.signal);
  const int rate = cfg.signal.sample_rate_hz;

  StageTrace t;
  t.raw.assign(input.begin(), input.end());
  t.bandpassed = fir_filter(bp.coefficients(), input);
  std::vector<double> cubed(t.bandpassed.size());
  std::transform(t.bandpassed.begin(), t.bandpassed.end(), cubed.begin(), signed_cube);
  t.cubed_ma = moving_average(window_samples(cfg.short_window_s, rate, "short_window_s"), cubed);
  t.abs_ma = rectified_average(window_samples(cfg.long_window_s, rate, "long_window_s"), t.cubed_ma);
  return t;
}

}  // namespace bcg::dsp
