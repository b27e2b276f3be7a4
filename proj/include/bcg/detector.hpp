#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace bcg::detect {

// A detected J-peak on the rectified-smoothed stream.
struct Beat {
  std::int64_t index = 0;
  double amplitude = 0.0;

  friend bool operator==(const Beat&, const Beat&) = default;
};

struct HeartRateEstimate {
  std::int64_t at_sample = 0;
  double bpm = 0.0;
  std::size_t interval_count = 0;

  friend bool operator==(const HeartRateEstimate&, const HeartRateEstimate&) = default;
};

/// Detector constants. Durations are converted to samples with
/// bcg::samples_for, so the defaults give 300/12/15/50/150 samples at 50 Hz.
struct DetectorConfig {
  int sample_rate_hz = 50;
  double init_window_s = 6.0;
  double init_fraction = 0.25;       // threshold = fraction * max(init window)
  double threshold_fraction = 0.25;  // threshold = fraction * mean(peak history)
  std::size_t history_len = 8;
  double clamp_factor = 2.0;         // stored peak <= factor * mean(peak history)
  double decay_fraction = 0.10;      // per missed J-J interval, of the last peak
  double floor_fraction = 0.01;      // of the init window maximum
  double fallback_jj_s = 1.0;        // decay interval before any J-J exists
  double falling_window_s = 0.25;
  double refractory_s = 0.3;
  double hr_cadence_s = 3.0;

  void validate() const;

  std::size_t init_samples() const;
  std::size_t falling_window_samples() const;
  std::size_t refractory_samples() const;
  std::size_t fallback_jj_samples() const;
  std::size_t hr_cadence_samples() const;
};

// Fixed-capacity FIFO; pushing into a full history drops the oldest value.
class History {
 public:
  explicit History(std::size_t capacity = 8) : capacity_(capacity) {}

  void push(double v);
  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  std::size_t capacity() const { return capacity_; }
  double back() const { return values_.back(); }
  double mean() const;

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

 private:
  std::size_t capacity_;
  std::deque<double> values_;
};

struct ThresholdState {
  double threshold = 0.0;
  double floor = 0.0;
  double init_max = 0.0;
  // Amplitude of the last accepted peak as stored (after clamping); the init
  // window maximum until the first acceptance.
  double last_peak_amplitude = 0.0;
  History peak_history;
  History jj_history;  // samples
  std::int64_t samples_since_last_beat = 0;
  std::int64_t decay_steps = 0;  // decay events applied since the last beat
  std::optional<std::int64_t> last_beat_index;
};

// Threshold from the first init_samples() smoothed values. Throws EmptyWindow
// when fewer are supplied and DegenerateSignal when their maximum is not
// positive.
ThresholdState init_threshold(std::span<const double> window, const DetectorConfig& cfg);

// Four strictly positive consecutive differences over x[0..4] (oldest first).
bool detect_rising_edge(std::span<const double, 5> x);

// Three strictly negative consecutive differences over x[0..3], where x[0]
// is the candidate peak.
bool detect_falling_edge(std::span<const double, 4> x);

enum class ProximityDecision { KeepBoth, ReplacePrevious, DiscardCandidate };

// Of two beats within refractory_samples, the higher one survives; an equal
// amplitude keeps the earlier beat.
ProximityDecision proximity_filter(const Beat& candidate, const Beat& previous,
                                   std::size_t refractory_samples);

// Records an accepted peak detected at sample `now`: clamps the amplitude,
// extends both histories, recomputes the threshold and restarts the miss
// counter.
void accept_peak(ThresholdState& state, const Beat& beat, std::int64_t now,
                 const DetectorConfig& cfg);

// Lowers the threshold by decay_fraction * last_peak_amplitude once for each
// whole mean J-J interval that samples_since_last_beat has exceeded and that
// has not been charged yet. The threshold never drops below state.floor.
// Returns the number of decay events applied.
int decay_threshold(ThresholdState& state, const DetectorConfig& cfg);

// 60 * fs / mean(J-J) once at least one interval exists.
std::optional<HeartRateEstimate> heart_rate(const ThresholdState& state, std::int64_t now,
                                            int sample_rate_hz);

enum class CandidateOutcome { None, Accepted, Replaced, Discarded };

struct DetectorStep {
  // A beat that no later candidate can displace any more.
  std::optional<Beat> finalized;
  std::optional<HeartRateEstimate> heart_rate;
  CandidateOutcome candidate = CandidateOutcome::None;
  int decay_events = 0;
};

/// Streaming J-peak detector fed with the rectified-smoothed signal.
///
/// The first init_samples() values only seed the threshold. After that, a
/// sample above the threshold arms the rising-edge test; a rising edge opens
/// a falling-edge search of falling_window_samples(), and a falling edge
/// declares a peak at the highest sample in between. Accepted beats are
/// held back until no later candidate can fall within the refractory span,
/// so every emitted beat is final.
class BeatDetector {
 public:
  explicit BeatDetector(DetectorConfig cfg = {});

  DetectorStep step(double smoothed);

  // End of stream: releases the held beat, if any. Throws EmptyWindow when
  // the stream ended before the threshold could be initialized.
  std::optional<Beat> finish();

  bool initialized() const { return initialized_; }
  // Valid once initialized().
  const ThresholdState& state() const { return state_; }
  std::int64_t samples_seen() const { return next_index_; }
  const DetectorConfig& config() const { return cfg_; }

 private:
  std::optional<Beat> advance_search(std::int64_t i, double x);
  std::optional<Beat> handle_candidate(const Beat& candidate, std::int64_t i,
                                       CandidateOutcome& outcome);

  DetectorConfig cfg_;
  std::size_t init_samples_;
  std::size_t falling_window_;
  std::size_t refractory_;
  std::size_t cadence_;
  std::int64_t finalize_horizon_;

  bool initialized_ = false;
  std::vector<double> init_window_;
  ThresholdState state_;

  std::array<double, 5> recent_{};  // oldest first
  std::int64_t next_index_ = 0;

  bool seeking_fall_ = false;
  std::int64_t rise_index_ = 0;
  Beat apex_;

  std::optional<Beat> held_;
  ThresholdState before_held_;
};

struct DetectionResult {
  std::vector<Beat> beats;
  std::vector<HeartRateEstimate> heart_rates;
};

DetectionResult detect_beats(std::span<const double> smoothed, const DetectorConfig& cfg);

}  // namespace bcg::detect
