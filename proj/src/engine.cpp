#include "bcg/engine.hpp"

#include "bcg/errors.hpp"

namespace bcg {

void EngineConfig::set_sample_rate(int rate_hz) {
  pipeline.signal.sample_rate_hz = rate_hz;
  detector.sample_rate_hz = rate_hz;
}

void EngineConfig::validate() const {
  pipeline.signal.validate();
  pipeline.bandpass.validate(pipeline.signal);
  detector.validate();
  if (pipeline.signal.sample_rate_hz != detector.sample_rate_hz) {
    throw InvalidConfig("pipeline and detector sample rates differ (" +
                        std::to_string(pipeline.signal.sample_rate_hz) + " vs " +
                        std::to_string(detector.sample_rate_hz) + " Hz)");
  }
}

namespace {

const EngineConfig& validated(const EngineConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

Engine::Engine(const EngineConfig& cfg)
    : pipeline_(validated(cfg).pipeline),
      detector_(cfg.detector),
      delay_(cfg.delay_compensation.value_or(static_cast<std::int64_t>(pipeline_.delay()))) {}

EngineStep Engine::step(double raw) {
  EngineStep s;
  s.stages = pipeline_.step(raw);
  s.detection = detector_.step(s.stages.abs_ma);
  if (detector_.initialized()) s.threshold = detector_.state().threshold;
  return s;
}

std::optional<io::BeatRecord> Engine::finish() {
  if (auto b = detector_.finish()) return to_record(*b);
  return std::nullopt;
}

io::BeatRecord Engine::to_record(const detect::Beat& beat) const {
  return {beat.index - delay_, beat.index, beat.amplitude};
}

EngineResult run_engine(std::span<const double> raw, const EngineConfig& cfg,
                        std::vector<EngineStep>* trace) {
  Engine engine(cfg);
  EngineResult result;
  result.delay = engine.delay();
  if (trace) trace->reserve(trace->size() + raw.size());
  for (double x : raw) {
    auto s = engine.step(x);
    if (s.detection.finalized) result.beats.push_back(engine.to_record(*s.detection.finalized));
    if (s.detection.heart_rate) result.heart_rates.push_back(*s.detection.heart_rate);
    if (trace) trace->push_back(std::move(s));
  }
  if (auto last = engine.finish()) result.beats.push_back(*last);
  return result;
}

EngineResult run_batch(std::span<const double> raw, const EngineConfig& cfg) {
  cfg.validate();
  const dsp::StageTrace stages = dsp::run_stages(cfg.pipeline, raw);
  const detect::DetectionResult detected = detect::detect_beats(stages.abs_ma, cfg.detector);

  const dsp::StagePipeline probe(cfg.pipeline);
  EngineResult result;
  result.delay = cfg.delay_compensation.value_or(static_cast<std::int64_t>(probe.delay()));
  for (const auto& b : detected.beats) {
    result.beats.push_back({b.index - result.delay, b.index, b.amplitude});
  }
  result.heart_rates = detected.heart_rates;
  return result;
}

}  // namespace bcg
