#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bcg/detector.hpp"
#include "bcg/io.hpp"
#include "bcg/pipeline.hpp"

namespace bcg {

struct EngineConfig {
  dsp::PipelineConfig pipeline;
  detect::DetectorConfig detector;
  // Offset from processed to raw sample indices; the pipeline delay when unset.
  std::optional<std::int64_t> delay_compensation;

  // Sets the sample rate of every stage.
  void set_sample_rate(int rate_hz);
  // Throws InvalidConfig when stage rates disagree or a stage is invalid.
  void validate() const;
};

struct EngineStep {
  dsp::StageSample stages;
  detect::DetectorStep detection;
  std::optional<double> threshold;  // after this sample; unset during init
};

struct EngineResult {
  std::vector<io::BeatRecord> beats;
  std::vector<detect::HeartRateEstimate> heart_rates;
  std::int64_t delay = 0;
};

// Stage pipeline feeding the detector, one raw sample at a time.
class Engine {
 public:
  explicit Engine(const EngineConfig& cfg);

  EngineStep step(double raw);
  // Releases the last held beat; throws EmptyWindow on a too-short stream.
  std::optional<io::BeatRecord> finish();

  io::BeatRecord to_record(const detect::Beat& beat) const;
  std::int64_t delay() const { return delay_; }
  const dsp::StagePipeline& pipeline() const { return pipeline_; }
  const detect::BeatDetector& detector() const { return detector_; }

 private:
  dsp::StagePipeline pipeline_;
  detect::BeatDetector detector_;
  std::int64_t delay_;
};

// Streams every sample through an Engine. When `trace` is given it receives
// one EngineStep per input sample.
EngineResult run_engine(std::span<const double> raw, const EngineConfig& cfg,
                        std::vector<EngineStep>* trace = nullptr);

// Whole-sequence route: each stage over the full input, then the detector
// over the smoothed output.
EngineResult run_batch(std::span<const double> raw, const EngineConfig& cfg);

}  // namespace bcg
