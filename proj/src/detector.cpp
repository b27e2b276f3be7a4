#include "bcg/detector.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "bcg/errors.hpp"
#include "bcg/signal_config.hpp"

namespace bcg::detect {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidConfig(what);
}

}  // namespace

void DetectorConfig::validate() const {
  require(sample_rate_hz > 0, "sample_rate_hz must be positive");
  require(init_samples() > 0, "init_window_s must cover at least one sample");
  require(init_fraction > 0.0 && init_fraction <= 1.0, "init_fraction must be in (0, 1]");
  require(threshold_fraction > 0.0 && threshold_fraction <= 1.0,
          "threshold_fraction must be in (0, 1]");
  require(history_len > 0, "history_len must be positive");
  require(clamp_factor >= 1.0, "clamp_factor must be at least 1");
  require(decay_fraction >= 0.0, "decay_fraction must be nonnegative");
  require(floor_fraction > 0.0 && floor_fraction < init_fraction,
          "floor_fraction must be in (0, init_fraction)");
  require(fallback_jj_samples() > 0, "fallback_jj_s must cover at least one sample");
  require(falling_window_samples() > 0, "falling_window_s must cover at least one sample");
  require(hr_cadence_samples() > 0, "hr_cadence_s must cover at least one sample");
  require(refractory_s >= 0.0, "refractory_s must be nonnegative");
}

std::size_t DetectorConfig::init_samples() const {
  return samples_for(init_window_s, sample_rate_hz);
}
std::size_t DetectorConfig::falling_window_samples() const {
  return samples_for(falling_window_s, sample_rate_hz);
}
std::size_t DetectorConfig::refractory_samples() const {
  return samples_for(refractory_s, sample_rate_hz);
}
std::size_t DetectorConfig::fallback_jj_samples() const {
  return samples_for(fallback_jj_s, sample_rate_hz);
}
std::size_t DetectorConfig::hr_cadence_samples() const {
  return samples_for(hr_cadence_s, sample_rate_hz);
}

void History::push(double v) {
  values_.push_back(v);
  while (values_.size() > capacity_) values_.pop_front();
}

double History::mean() const {
  if (values_.empty()) return 0.0;
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

ThresholdState init_threshold(std::span<const double> window, const DetectorConfig& cfg) {
  const std::size_t needed = cfg.init_samples();
  if (window.size() < needed) {
    throw EmptyWindow("threshold initialization needs " + std::to_string(needed) +
                      " samples, stream supplied " + std::to_string(window.size()));
  }
  const double peak = *std::max_element(window.begin(), window.begin() + needed);
  if (!(peak > 0.0)) {
    throw DegenerateSignal("initial window of " + std::to_string(needed) +
                           " samples has no positive value; signal is flat");
  }
  ThresholdState s;
  s.threshold = cfg.init_fraction * peak;
  s.floor = cfg.floor_fraction * peak;
  s.init_max = peak;
  s.last_peak_amplitude = peak;
  s.peak_history = History(cfg.history_len);
  s.jj_history = History(cfg.history_len);
  return s;
}

bool detect_rising_edge(std::span<const double, 5> x) {
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (!(x[k] - x[k - 1] > 0.0)) return false;
  }
  return true;
}

bool detect_falling_edge(std::span<const double, 4> x) {
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (!(x[k] - x[k - 1] < 0.0)) return false;
  }
  return true;
}

ProximityDecision proximity_filter(const Beat& candidate, const Beat& previous,
                                   std::size_t refractory_samples) {
  if (candidate.index - previous.index > static_cast<std::int64_t>(refractory_samples)) {
    return ProximityDecision::KeepBoth;
  }
  return candidate.amplitude > previous.amplitude ? ProximityDecision::ReplacePrevious
                                                  : ProximityDecision::DiscardCandidate;
}

void accept_peak(ThresholdState& state, const Beat& beat, std::int64_t now,
                 const DetectorConfig& cfg) {
  const double reference =
      state.peak_history.empty() ? state.init_max : state.peak_history.mean();
  const double stored = std::min(beat.amplitude, cfg.clamp_factor * reference);

  if (state.last_beat_index) {
    state.jj_history.push(static_cast<double>(beat.index - *state.last_beat_index));
  }
  state.peak_history.push(stored);
  state.last_peak_amplitude = stored;
  state.threshold = cfg.threshold_fraction * state.peak_history.mean();
  state.last_beat_index = beat.index;
  state.samples_since_last_beat = now - beat.index;
  state.decay_steps = 0;
}

int decay_threshold(ThresholdState& state, const DetectorConfig& cfg) {
  const double interval = state.jj_history.empty()
                              ? static_cast<double>(cfg.fallback_jj_samples())
                              : state.jj_history.mean();
  const double since = static_cast<double>(state.samples_since_last_beat);
  int applied = 0;
  while (static_cast<double>(state.decay_steps + 1) * interval < since) {
    state.threshold = std::max(state.threshold - cfg.decay_fraction * state.last_peak_amplitude,
                               state.floor);
    ++state.decay_steps;
    ++applied;
  }
  return applied;
}

std::optional<HeartRateEstimate> heart_rate(const ThresholdState& state, std::int64_t now,
                                            int sample_rate_hz) {
  if (state.jj_history.empty()) return std::nullopt;
  return HeartRateEstimate{now, 60.0 * sample_rate_hz / state.jj_history.mean(),
                           state.jj_history.size()};
}

BeatDetector::BeatDetector(DetectorConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  init_samples_ = cfg_.init_samples();
  falling_window_ = cfg_.falling_window_samples();
  refractory_ = cfg_.refractory_samples();
  cadence_ = cfg_.hr_cadence_samples();
  // A candidate declared at sample t peaks no earlier than
  // t - 3 - falling_window, so once this many samples have passed the held
  // beat is beyond reach of the refractory test.
  finalize_horizon_ = static_cast<std::int64_t>(refractory_ + falling_window_ + 3);
  init_window_.reserve(init_samples_);
}

DetectorStep BeatDetector::step(double x) {
  const std::int64_t i = next_index_++;
  std::shift_left(recent_.begin(), recent_.end(), 1);
  recent_.back() = x;

  DetectorStep out;
  if (!initialized_) {
    init_window_.push_back(x);
    if (init_window_.size() == init_samples_) {
      state_ = init_threshold(init_window_, cfg_);
      initialized_ = true;
      init_window_.clear();
      init_window_.shrink_to_fit();
    }
    return out;
  }

  ++state_.samples_since_last_beat;
  if (auto candidate = advance_search(i, x)) {
    out.finalized = handle_candidate(*candidate, i, out.candidate);
  }
  out.decay_events = decay_threshold(state_, cfg_);

  if (held_ && i - held_->index >= finalize_horizon_) {
    out.finalized = held_;
    held_.reset();
  }
  if (i > 0 && static_cast<std::size_t>(i) % cadence_ == 0) {
    out.heart_rate = heart_rate(state_, i, cfg_.sample_rate_hz);
  }
  return out;
}

std::optional<Beat> BeatDetector::advance_search(std::int64_t i, double x) {
  if (seeking_fall_) {
    if (x > apex_.amplitude) apex_ = {i, x};
    if (i - 3 < rise_index_) return std::nullopt;
    if (detect_falling_edge(std::span<const double, 4>(recent_.data() + 1, 4))) {
      seeking_fall_ = false;
      // The three samples after the falling-edge start are strictly lower,
      // so the running apex is the maximum up to that start.
      return apex_;
    }
    if (i - 3 < rise_index_ + static_cast<std::int64_t>(falling_window_)) return std::nullopt;
    // Window exhausted; rescan from this sample.
    seeking_fall_ = false;
  }
  if (x > state_.threshold && i >= 4 && detect_rising_edge(recent_)) {
    seeking_fall_ = true;
    rise_index_ = i;
    apex_ = {i, x};
  }
  return std::nullopt;
}

std::optional<Beat> BeatDetector::handle_candidate(const Beat& candidate, std::int64_t i,
                                                   CandidateOutcome& outcome) {
  std::optional<Beat> released;
  if (held_) {
    switch (proximity_filter(candidate, *held_, refractory_)) {
      case ProximityDecision::DiscardCandidate:
        outcome = CandidateOutcome::Discarded;
        return std::nullopt;
      case ProximityDecision::ReplacePrevious:
        // Rewind to the state before the held beat was accepted.
        state_ = before_held_;
        outcome = CandidateOutcome::Replaced;
        break;
      case ProximityDecision::KeepBoth:
        released = held_;
        outcome = CandidateOutcome::Accepted;
        break;
    }
  } else {
    outcome = CandidateOutcome::Accepted;
  }
  before_held_ = state_;
  accept_peak(state_, candidate, i, cfg_);
  held_ = candidate;
  return released;
}

std::optional<Beat> BeatDetector::finish() {
  if (!initialized_) {
    throw EmptyWindow("stream ended after " + std::to_string(next_index_) +
                      " samples, before the " + std::to_string(init_samples_) +
                      "-sample threshold window filled");
  }
  auto out = held_;
  held_.reset();
  return out;
}

DetectionResult detect_beats(std::span<const double> smoothed, const DetectorConfig& cfg) {
  BeatDetector detector(cfg);
  DetectionResult result;
  for (double x : smoothed) {
    auto s = detector.step(x);
    if (s.finalized) result.beats.push_back(*s.finalized);
    if (s.heart_rate) result.heart_rates.push_back(*s.heart_rate);
  }
  if (auto last = detector.finish()) result.beats.push_back(*last);
  return result;
}

}  // namespace bcg::detect
