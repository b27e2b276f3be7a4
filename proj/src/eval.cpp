#include "bcg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <tuple>

#include "bcg/errors.hpp"

namespace bcg::eval {

namespace {

void require_increasing(std::span<const std::int64_t> xs, const char* name) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] <= xs[i - 1]) {
      throw UnsortedInput(std::string(name) + " beats must be strictly increasing (position " +
                          std::to_string(i) + ")");
    }
  }
}

struct Pair {
  std::int64_t distance;
  std::size_t ref;
  std::size_t det;
};

}  // namespace

void MatchConfig::validate() const {
  if (!(tolerance_ms > 0.0)) throw InvalidConfig("tolerance_ms must be positive");
  if (sample_rate_hz <= 0) throw InvalidConfig("sample_rate_hz must be positive");
  if (score_from < 0) throw InvalidConfig("score_from must be nonnegative");
}

MatchCounts match_beats(std::span<const std::int64_t> detected,
                        std::span<const std::int64_t> reference, const MatchConfig& cfg) {
  cfg.validate();
  require_increasing(detected, "detected");
  require_increasing(reference, "reference");

  const double tol = cfg.tolerance_ms * cfg.sample_rate_hz / 1000.0;
  if (cfg.score_from > 0) {
    std::vector<std::int64_t> det;
    std::vector<std::int64_t> ref;
    for (auto d : detected) {
      if (static_cast<double>(d - cfg.delay_compensation) >= cfg.score_from - tol) det.push_back(d);
    }
    for (auto r : reference) {
      if (r >= cfg.score_from) ref.push_back(r);
    }
    MatchConfig rest = cfg;
    rest.score_from = 0;
    return match_beats(det, ref, rest);
  }

  std::vector<Pair> pairs;
  std::size_t lo = 0;
  for (std::size_t r = 0; r < reference.size(); ++r) {
    while (lo < detected.size() &&
           static_cast<double>(reference[r] - (detected[lo] - cfg.delay_compensation)) > tol) {
      ++lo;
    }
    for (std::size_t d = lo; d < detected.size(); ++d) {
      const std::int64_t diff = detected[d] - cfg.delay_compensation - reference[r];
      if (static_cast<double>(diff) > tol) break;
      pairs.push_back({diff < 0 ? -diff : diff, r, d});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(a.distance, a.ref, a.det) < std::tie(b.distance, b.ref, b.det);
  });

  std::vector<bool> ref_used(reference.size(), false);
  std::vector<bool> det_used(detected.size(), false);
  MatchCounts c;
  for (const auto& p : pairs) {
    if (ref_used[p.ref] || det_used[p.det]) continue;
    ref_used[p.ref] = det_used[p.det] = true;
    ++c.tp;
  }
  c.fp = detected.size() - c.tp;
  c.fn = reference.size() - c.tp;
  return c;
}

DetectionMetrics compute_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp + fn == 0) throw UndefinedMetric("Se and DER are undefined with no reference beats");
  if (tp + fp == 0) throw UndefinedMetric("+P is undefined with no detected beats");
  DetectionMetrics m;
  m.total_reference = tp + fn;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.se_pct = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.pp_pct = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.der = static_cast<double>(fp + fn) / static_cast<double>(tp + fn);
  return m;
}

double truncate_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // The nudge keeps exact ratios such as 97.5 from landing on 97.4999...
  const double nudge = value >= 0.0 ? 1e-9 : -1e-9;
  return std::trunc(value * scale + nudge) / scale;
}

std::string metrics_table_header() {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-8s %7s %5s %5s %8s %8s %7s", "User", "Total", "FP", "FN",
                "Se(%)", "+P(%)", "DER");
  return buf;
}

std::string format_metrics_row(const std::string& label, const DetectionMetrics& m) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %7zu %5zu %5zu %8.2f %8.2f %7.3f", label.c_str(),
                m.total_reference, m.fp, m.fn, truncate_to(m.se_pct, 2),
                truncate_to(m.pp_pct, 2), truncate_to(m.der, 3));
  return buf;
}

HrComparison compare_hr(std::span<const double> estimates, double reference_bpm) {
  if (estimates.empty()) throw NoEstimates("no heart-rate estimates to compare");
  HrComparison c;
  const double n = static_cast<double>(estimates.size());
  c.reference_bpm = reference_bpm;
  c.computed_bpm = std::accumulate(estimates.begin(), estimates.end(), 0.0) / n;
  c.mean_abs_error = std::accumulate(estimates.begin(), estimates.end(), 0.0,
                                     [&](double acc, double e) {
                                       return acc + std::fabs(e - reference_bpm);
                                     }) / n;
  return c;
}

HrComparison compare_hr(std::span<const double> estimates,
                        std::span<const double> reference_bpm) {
  if (estimates.empty()) throw NoEstimates("no heart-rate estimates to compare");
  if (reference_bpm.size() != estimates.size()) {
    throw InvalidConfig("reference series has " + std::to_string(reference_bpm.size()) +
                        " values for " + std::to_string(estimates.size()) + " estimates");
  }
  HrComparison c;
  const double n = static_cast<double>(estimates.size());
  c.reference_bpm = std::accumulate(reference_bpm.begin(), reference_bpm.end(), 0.0) / n;
  c.computed_bpm = std::accumulate(estimates.begin(), estimates.end(), 0.0) / n;
  double err = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    err += std::fabs(estimates[i] - reference_bpm[i]);
  }
  c.mean_abs_error = err / n;
  return c;
}

}  // namespace bcg::eval
