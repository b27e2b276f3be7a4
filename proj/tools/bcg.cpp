// Command-line front end: synth, detect, eval, trace, response.
//
// Exit codes: 0 success, 1 usage, 2 input/I-O error, 3 invalid config,
// 4 degenerate signal, 5 undefined metric.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bcg/config.hpp"
#include "bcg/engine.hpp"
#include "bcg/errors.hpp"
#include "bcg/eval.hpp"
#include "bcg/fir.hpp"
#include "bcg/io.hpp"
#include "bcg/synth.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kConfig = 3,
  kDegenerate = 4,
  kMetric = 5,
};

int exit_code_for(bcg::ErrorCategory c) {
  switch (c) {
    case bcg::ErrorCategory::Input: return kInput;
    case bcg::ErrorCategory::Config: return kConfig;
    case bcg::ErrorCategory::Degenerate: return kDegenerate;
    case bcg::ErrorCategory::Metric: return kMetric;
  }
  return kInput;
}

// Flags shared by every subcommand. Unset optionals leave the config file
// (or the defaults) in charge.
struct CommonFlags {
  std::string config_path;
  std::optional<int> rate;
  fs::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance_ms;
  std::optional<std::int64_t> delay_compensation;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--rate", f.rate, "Sample rate in Hz")->check(CLI::PositiveNumber);
  cmd->add_option("--out-dir", f.out_dir, "Directory for output files");
  cmd->add_option("--seed", f.seed, "RNG seed for synthetic signals");
  cmd->add_option("--tolerance-ms", f.tolerance_ms, "Beat matching half-width in ms")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--delay-compensation", f.delay_compensation,
                  "Samples between processed and raw beat positions");
}

struct Resolved {
  bcg::AppConfig cfg;
  bool rate_explicit = false;
};

Resolved resolve(const CommonFlags& f) {
  Resolved r;
  if (!f.config_path.empty()) {
    const int before = r.cfg.sample_rate_hz();
    bcg::apply_config_file(r.cfg, f.config_path);
    r.rate_explicit = r.cfg.sample_rate_hz() != before;
  }
  if (f.rate) {
    r.cfg.set_sample_rate(*f.rate);
    r.rate_explicit = true;
  }
  if (f.seed) r.cfg.synth.seed = *f.seed;
  if (f.tolerance_ms) r.cfg.match.tolerance_ms = *f.tolerance_ms;
  if (f.delay_compensation) r.cfg.engine.delay_compensation = *f.delay_compensation;
  return r;
}

bcg::io::SignalData load_signal(const std::string& path, Resolved& r) {
  auto data = bcg::io::read_signal(path);
  if (r.rate_explicit && data.config.sample_rate_hz != r.cfg.sample_rate_hz()) {
    throw bcg::InvalidConfig(path + " declares " + std::to_string(data.config.sample_rate_hz) +
                             " Hz but " + std::to_string(r.cfg.sample_rate_hz()) +
                             " Hz was requested");
  }
  r.cfg.set_sample_rate(data.config.sample_rate_hz);
  return data;
}

// --- synth ---------------------------------------------------------------

struct SynthFlags {
  std::optional<double> duration_s, hr_bpm, hr_jitter_pct, amplitude, amplitude_jitter_pct,
      respiration_hz, respiration_amplitude, snr_db;
  std::vector<std::string> bursts;
};

bcg::synth::MotionBurst parse_burst(const std::string& text) {
  bcg::synth::MotionBurst b;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &b.start_s, &b.duration_s, &b.gain, &tail) !=
      3) {
    throw bcg::InvalidConfig("--burst expects start_s:duration_s:gain, got '" + text + "'");
  }
  return b;
}

int run_synth(const CommonFlags& common, const SynthFlags& f) {
  Resolved r = resolve(common);
  auto& s = r.cfg.synth;
  if (f.duration_s) s.duration_s = *f.duration_s;
  if (f.hr_bpm) s.mean_hr_bpm = *f.hr_bpm;
  if (f.hr_jitter_pct) s.hr_jitter_pct = *f.hr_jitter_pct;
  if (f.amplitude) s.beat_amplitude = *f.amplitude;
  if (f.amplitude_jitter_pct) s.amplitude_jitter_pct = *f.amplitude_jitter_pct;
  if (f.respiration_hz) s.respiration_hz = *f.respiration_hz;
  if (f.respiration_amplitude) s.respiration_amplitude = *f.respiration_amplitude;
  if (f.snr_db) s.noise_snr_db = *f.snr_db;
  if (!f.bursts.empty()) {
    s.motion_bursts.clear();
    for (const auto& b : f.bursts) s.motion_bursts.push_back(parse_burst(b));
  }

  const auto signal = bcg::synth::generate(s, r.cfg.engine.pipeline.signal);
  bcg::io::SignalData data;
  data.config = r.cfg.engine.pipeline.signal;
  data.samples = signal.samples;
  bcg::io::write_signal(common.out_dir / "signal.csv", data);
  bcg::io::write_annotations(common.out_dir / "annotations.csv", signal.truth.beat_indices);

  const auto& times = signal.truth.beat_times_s;
  const double mean_hr =
      times.size() >= 2 ? 60.0 * static_cast<double>(times.size() - 1) /
                              (times.back() - times.front())
                        : 0.0;
  std::cout << "samples: " << signal.samples.size() << "\n"
            << "beats: " << times.size() << "\n"
            << "mean_hr_bpm: " << bcg::io::format_double(mean_hr) << "\n";
  return kOk;
}

// --- detect --------------------------------------------------------------

int run_detect(const CommonFlags& common, const std::string& signal_path) {
  Resolved r = resolve(common);
  const auto data = load_signal(signal_path, r);
  const auto result = bcg::run_engine(data.samples, r.cfg.engine);

  bcg::io::write_beats(common.out_dir / "beats.csv", result.beats);
  bcg::io::write_heart_rates(common.out_dir / "hr.csv", result.heart_rates);
  std::cout << "samples: " << data.samples.size() << "\n"
            << "beats: " << result.beats.size() << "\n"
            << "heart_rate_estimates: " << result.heart_rates.size() << "\n"
            << "delay_compensation: " << result.delay << "\n";
  if (!result.heart_rates.empty()) {
    std::cout << "last_bpm: " << bcg::io::format_double(result.heart_rates.back().bpm) << "\n";
  }
  return kOk;
}

// --- eval ----------------------------------------------------------------

struct EvalFlags {
  std::string hr_path;
  std::optional<double> reference_bpm;
  std::string label = "run";
  double learning_period_s = 0.0;
};

int run_eval(const CommonFlags& common, const EvalFlags& f, const std::string& beats_path,
             const std::string& annotation_path) {
  Resolved r = resolve(common);
  auto& match = r.cfg.match;
  // The beat file already carries raw indices; only an explicit flag or
  // config value shifts them further.
  match.delay_compensation = r.cfg.engine.delay_compensation.value_or(0);
  match.score_from =
      static_cast<std::int64_t>(bcg::samples_for(f.learning_period_s, match.sample_rate_hz));

  const auto detected = bcg::io::read_beat_indices(beats_path);
  const auto reference = bcg::io::read_annotations(annotation_path);
  const auto counts = bcg::eval::match_beats(detected, reference, match);
  const auto m = bcg::eval::compute_metrics(counts.tp, counts.fp, counts.fn);

  std::cout << bcg::eval::metrics_table_header() << "\n"
            << bcg::eval::format_metrics_row(f.label, m) << "\n";

  auto out = bcg::io::open_output(common.out_dir / "metrics.csv");
  out << "label,total,tp,fp,fn,se_pct,pp_pct,der\n"
      << f.label << ',' << m.total_reference << ',' << m.tp << ',' << m.fp << ',' << m.fn << ','
      << bcg::io::format_double(m.se_pct) << ',' << bcg::io::format_double(m.pp_pct) << ','
      << bcg::io::format_double(m.der) << '\n';

  if (!f.hr_path.empty()) {
    if (!f.reference_bpm) throw bcg::InvalidConfig("--hr needs --reference-bpm");
    const auto hrs = bcg::io::read_heart_rates(f.hr_path);
    std::vector<double> bpm;
    for (const auto& h : hrs) bpm.push_back(h.bpm);
    const auto cmp = bcg::eval::compare_hr(bpm, *f.reference_bpm);
    char row[128];
    std::snprintf(row, sizeof row, "%-8s %12.1f %12.1f %8.2f", f.label.c_str(),
                  cmp.reference_bpm, cmp.computed_bpm, cmp.mean_abs_error);
    std::cout << "\n" << "User      reference_bpm computed_bpm      MAE\n" << row << "\n";
  }
  return kOk;
}

// --- trace ---------------------------------------------------------------

std::string event_label(const bcg::detect::DetectorStep& d) {
  std::string label;
  switch (d.candidate) {
    case bcg::detect::CandidateOutcome::None: break;
    case bcg::detect::CandidateOutcome::Accepted: label = "accept"; break;
    case bcg::detect::CandidateOutcome::Replaced: label = "replace"; break;
    case bcg::detect::CandidateOutcome::Discarded: label = "discard"; break;
  }
  if (d.decay_events > 0) label += label.empty() ? "decay" : "+decay";
  return label;
}

int run_trace(const CommonFlags& common, const std::string& signal_path) {
  Resolved r = resolve(common);
  const auto data = load_signal(signal_path, r);
  std::vector<bcg::EngineStep> steps;
  const auto result = bcg::run_engine(data.samples, r.cfg.engine, &steps);

  std::set<std::int64_t> beat_rows;
  for (const auto& b : result.beats) beat_rows.insert(b.processed_index);

  using bcg::io::format_double;
  auto out = bcg::io::open_output(common.out_dir / "trace.csv");
  out << "index,raw,bandpassed,cubed_ma3,abs_ma15,threshold,beat,event\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    out << i << ',' << format_double(s.stages.raw) << ',' << format_double(s.stages.bandpassed)
        << ',' << format_double(s.stages.cubed_ma) << ',' << format_double(s.stages.abs_ma) << ','
        << (s.threshold ? format_double(*s.threshold) : std::string()) << ','
        << (beat_rows.count(static_cast<std::int64_t>(i)) ? 1 : 0) << ','
        << event_label(s.detection) << '\n';
  }
  if (!out) throw bcg::IoError("failed writing trace.csv");
  std::cout << "rows: " << steps.size() << "\n"
            << "beats: " << result.beats.size() << "\n";
  return kOk;
}

// --- response ------------------------------------------------------------

int run_response(const CommonFlags& common, std::size_t points) {
  Resolved r = resolve(common);
  const auto filter =
      bcg::dsp::design_bandpass(r.cfg.engine.pipeline.bandpass, r.cfg.engine.pipeline.signal);
  const auto response =
      bcg::dsp::magnitude_response(filter.coefficients(), r.cfg.engine.pipeline.signal, points);
  auto out = bcg::io::open_output(common.out_dir / "response.csv");
  out << "frequency_hz,magnitude_db\n";
  for (const auto& p : response) {
    out << bcg::io::format_double(p.frequency_hz) << ',' << bcg::io::format_double(p.magnitude_db)
        << '\n';
  }
  if (!out) throw bcg::IoError("failed writing response.csv");
  std::cout << "taps: " << filter.tap_count() << "\n"
            << "points: " << response.size() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming ballistocardiogram beat detector"};
  app.require_subcommand(1);

  CommonFlags common;

  SynthFlags synth_flags;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic signal and its annotations");
  add_common(synth, common);
  synth->add_option("--duration", synth_flags.duration_s, "Duration in seconds");
  synth->add_option("--hr", synth_flags.hr_bpm, "Mean heart rate in bpm");
  synth->add_option("--hr-jitter", synth_flags.hr_jitter_pct, "J-J interval jitter in percent");
  synth->add_option("--amplitude", synth_flags.amplitude, "Beat amplitude");
  synth->add_option("--amplitude-jitter", synth_flags.amplitude_jitter_pct,
                    "Beat amplitude jitter in percent");
  synth->add_option("--resp-hz", synth_flags.respiration_hz, "Respiration frequency in Hz");
  synth->add_option("--resp-amplitude", synth_flags.respiration_amplitude,
                    "Respiration amplitude");
  synth->add_option("--snr-db", synth_flags.snr_db, "White-noise SNR in dB");
  synth->add_option("--burst", synth_flags.bursts, "Motion burst start_s:duration_s:gain");

  std::string signal_path;
  auto* detect = app.add_subcommand("detect", "Detect beats and heart rate in a signal file");
  add_common(detect, common);
  detect->add_option("signal", signal_path, "Signal CSV")->required();

  EvalFlags eval_flags;
  std::string beats_path;
  std::string annotation_path;
  auto* eval = app.add_subcommand("eval", "Score detected beats against annotations");
  add_common(eval, common);
  eval->add_option("beats", beats_path, "Beat CSV or annotation CSV")->required();
  eval->add_option("annotations", annotation_path, "Reference annotation CSV")->required();
  eval->add_option("--hr", eval_flags.hr_path, "Heart-rate CSV to compare");
  eval->add_option("--reference-bpm", eval_flags.reference_bpm, "Reference heart rate in bpm");
  eval->add_option("--label", eval_flags.label, "Row label");
  eval->add_option("--learning-period-s", eval_flags.learning_period_s,
                   "Leading seconds excluded from scoring")
      ->check(CLI::NonNegativeNumber);

  auto* trace = app.add_subcommand("trace", "Write every pipeline stage per sample");
  add_common(trace, common);
  trace->add_option("signal", signal_path, "Signal CSV")->required();

  std::size_t points = 2049;
  auto* response = app.add_subcommand("response", "Write the band-pass magnitude response");
  add_common(response, common);
  response->add_option("--points", points, "Frequency grid points")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) return run_synth(common, synth_flags);
    if (*detect) return run_detect(common, signal_path);
    if (*eval) return run_eval(common, eval_flags, beats_path, annotation_path);
    if (*trace) return run_trace(common, signal_path);
    if (*response) return run_response(common, points);
  } catch (const bcg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kUsage;
}
