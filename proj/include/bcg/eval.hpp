#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bcg::eval {

struct MatchConfig {
  double tolerance_ms = 150.0;
  // Subtracted from every detected index before matching.
  std::int64_t delay_compensation = 0;
  int sample_rate_hz = 50;
  // Reference beats before this sample are not scored, nor are detections
  // more than one tolerance before it. Covers the detector's threshold
  // learning window.
  std::int64_t score_from = 0;

  void validate() const;
};

struct MatchCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct DetectionMetrics {
  std::size_t total_reference = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double se_pct = 0.0;
  double pp_pct = 0.0;
  double der = 0.0;
};

// Greedy one-to-one matching: all (detection, reference) pairs within the
// tolerance are taken closest first, ties broken by reference then detection
// position. Throws UnsortedInput unless both lists strictly increase.
MatchCounts match_beats(std::span<const std::int64_t> detected,
                        std::span<const std::int64_t> reference, const MatchConfig& cfg);

// Se = tp/(tp+fn), +P = tp/(tp+fp), DER = (fp+fn)/(tp+fn). Throws
// UndefinedMetric when a denominator is zero.
DetectionMetrics compute_metrics(std::size_t tp, std::size_t fp, std::size_t fn);

// Rounds toward zero at `decimals` places; detection-table percentages and
// error rates are printed this way.
double truncate_to(double value, int decimals);

// One detection-table row: Total, FP, FN, Se (%), +P (%), DER.
std::string format_metrics_row(const std::string& label, const DetectionMetrics& m);
std::string metrics_table_header();

struct HrComparison {
  double reference_bpm = 0.0;  // mean of the reference
  double computed_bpm = 0.0;   // mean of the estimates
  double mean_abs_error = 0.0;
};

// Against a scalar reference: MAE = mean |estimate - reference|.
HrComparison compare_hr(std::span<const double> estimates, double reference_bpm);
// Against a per-estimate reference series of the same length.
HrComparison compare_hr(std::span<const double> estimates,
                        std::span<const double> reference_bpm);

}  // namespace bcg::eval
