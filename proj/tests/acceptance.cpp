// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bcg/detector.hpp"
#include "bcg/engine.hpp"
#include "bcg/eval.hpp"
#include "bcg/fir.hpp"
#include "bcg/moving_average.hpp"
#include "bcg/pipeline.hpp"
#include "bcg/synth.hpp"

using namespace bcg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<std::int64_t> raw_indices(const EngineResult& r) {
  std::vector<std::int64_t> out;
  for (const auto& b : r.beats) out.push_back(b.raw_index);
  return out;
}

eval::DetectionMetrics score(const synth::SynthSignal& sig, const EngineResult& r) {
  eval::MatchConfig mc;
  mc.score_from = static_cast<std::int64_t>(samples_for(6.0, 50));
  const auto c = eval::match_beats(raw_indices(r), sig.truth.beat_indices, mc);
  return eval::compute_metrics(c.tp, c.fp, c.fn);
}

Outcome table_reproduction() {
  struct Row {
    std::size_t total, fp, fn;
    double se, pp, der;
  };
  const Row rows[] = {{124, 3, 7, 94.35, 97.50, 0.080}, {306, 0, 4, 98.69, 100.00, 0.013},
                      {302, 1, 6, 98.01, 99.66, 0.023}, {166, 6, 5, 96.98, 96.40, 0.066},
                      {215, 4, 7, 96.74, 98.11, 0.051}};
  const auto start = Clock::now();
  Outcome o;
  int matched = 0;
  for (const auto& r : rows) {
    const auto m = eval::compute_metrics(r.total - r.fn, r.fp, r.fn);
    const bool ok = m.total_reference == r.total &&
                    std::lround(eval::truncate_to(m.se_pct, 2) * 100) == std::lround(r.se * 100) &&
                    std::lround(eval::truncate_to(m.pp_pct, 2) * 100) == std::lround(r.pp * 100) &&
                    std::lround(eval::truncate_to(m.der, 3) * 1000) == std::lround(r.der * 1000);
    matched += ok;
    o.pass = o.pass && ok;
  }
  const double t = seconds_since(start);
  o.pass = o.pass && t < 1.0;
  o.detail = fmt("%d/5 rows exact, %.3f s", matched, t);
  return o;
}

Outcome filter_spec() {
  const auto start = Clock::now();
  const auto f = dsp::design_bandpass(dsp::BandpassSpec{}, SignalConfig{});
  const auto grid = dsp::magnitude_response(f.coefficients(), SignalConfig{}, 8193);
  double pass_peak = -1e9;
  double band_min = 1e9;
  double band_max = -1e9;
  for (const auto& p : grid) {
    if (p.frequency_hz >= 2.0 && p.frequency_hz <= 10.0) pass_peak = std::max(pass_peak, p.magnitude_db);
    if (p.frequency_hz >= 2.5 && p.frequency_hz <= 9.0) {
      band_min = std::min(band_min, p.magnitude_db);
      band_max = std::max(band_max, p.magnitude_db);
    }
  }
  double worst_stop = 1e9;
  for (const auto& p : grid) {
    if (p.frequency_hz <= 0.7 || p.frequency_hz >= 15.0) {
      worst_stop = std::min(worst_stop, pass_peak - p.magnitude_db);
    }
  }
  const double deviation = std::max(std::fabs(band_max), std::fabs(band_min));
  const double t = seconds_since(start);
  Outcome o;
  o.pass = worst_stop >= 40.0 && deviation <= 3.0 && t < 1.0;
  o.detail = fmt("min stopband attenuation %.2f dB, passband deviation %.3f dB, %.3f s", worst_stop,
                 deviation, t);
  return o;
}

Outcome clean_end_to_end() {
  const auto start = Clock::now();
  Outcome o;
  double worst_se = 100.0, worst_pp = 100.0, worst_der = 0.0;
  for (double hr : {60.0, 66.0, 72.0, 75.0, 80.0, 85.0, 90.0}) {
    synth::SynthConfig sc;
    sc.duration_s = 300.0;
    sc.mean_hr_bpm = hr;
    const auto sig = synth::generate(sc, SignalConfig{});
    const auto m = score(sig, run_engine(sig.samples, EngineConfig{}));
    worst_se = std::min(worst_se, m.se_pct);
    worst_pp = std::min(worst_pp, m.pp_pct);
    worst_der = std::max(worst_der, m.der);
  }
  const double t = seconds_since(start);
  o.pass = worst_se >= 99.0 && worst_pp >= 99.0 && worst_der <= 0.02 && t < 5.0 * 7;
  o.detail = fmt("7 rates 60-90 bpm: worst Se %.2f%%, +P %.2f%%, DER %.4f, %.2f s", worst_se,
                 worst_pp, worst_der, t);
  return o;
}

Outcome noisy_end_to_end() {
  const auto start = Clock::now();
  Outcome o;
  double worst_se = 100.0, worst_pp = 100.0;
  int runs = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (double hr : {60.0, 75.0, 90.0}) {
      synth::SynthConfig sc;
      sc.duration_s = 300.0;
      sc.mean_hr_bpm = hr;
      sc.hr_jitter_pct = 5.0;
      sc.amplitude_jitter_pct = 10.0;
      sc.noise_snr_db = 10.0;
      sc.motion_bursts = {{60.0, 4.0, 3.0}, {180.0, 5.0, 2.5}};
      sc.seed = seed;
      const auto sig = synth::generate(sc, SignalConfig{});
      const auto m = score(sig, run_engine(sig.samples, EngineConfig{}));
      worst_se = std::min(worst_se, m.se_pct);
      worst_pp = std::min(worst_pp, m.pp_pct);
      ++runs;
    }
  }
  const double t = seconds_since(start);
  o.pass = worst_se >= 95.0 && worst_pp >= 95.0 && t < 5.0 * runs;
  o.detail = fmt("%d runs at 10 dB SNR with two bursts: worst Se %.2f%%, +P %.2f%%, %.2f s", runs,
                 worst_se, worst_pp, t);
  return o;
}

Outcome responsiveness() {
  Outcome o;
  std::int64_t latest_first = 0;
  int runs = 0;
  for (double hr : {60.0, 72.0, 90.0, 120.0}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      synth::SynthConfig sc;
      sc.duration_s = 120.0;
      sc.mean_hr_bpm = hr;
      sc.hr_jitter_pct = 5.0;
      sc.noise_snr_db = 15.0;
      sc.seed = seed;
      const auto sig = synth::generate(sc, SignalConfig{});
      const auto r = run_engine(sig.samples, EngineConfig{});
      ++runs;
      if (r.heart_rates.empty()) {
        o.pass = false;
        continue;
      }
      latest_first = std::max(latest_first, r.heart_rates.front().at_sample);
      o.pass = o.pass && r.heart_rates.front().at_sample <= 500;
      for (std::size_t k = 1; k < r.heart_rates.size(); ++k) {
        o.pass = o.pass && r.heart_rates[k].at_sample - r.heart_rates[k - 1].at_sample == 150;
      }
      o.pass = o.pass && r.heart_rates.back().at_sample + 150 >=
                             static_cast<std::int64_t>(sig.samples.size());
    }
  }
  o.detail = fmt("%d runs 60-120 bpm: latest first estimate at sample %lld (%.1f s), cadence 150 samples",
                 runs, static_cast<long long>(latest_first), latest_first / 50.0);
  return o;
}

Outcome hr_accuracy() {
  synth::SynthConfig sc;
  sc.duration_s = 300.0;
  sc.mean_hr_bpm = 72.0;
  const auto sig = synth::generate(sc, SignalConfig{});
  const auto r = run_engine(sig.samples, EngineConfig{});
  double worst = 0.0;
  std::vector<double> steady;
  for (const auto& h : r.heart_rates) {
    if (h.interval_count < EngineConfig{}.detector.history_len) continue;
    steady.push_back(h.bpm);
    worst = std::max(worst, std::fabs(h.bpm - 72.0));
  }
  Outcome o;
  if (steady.empty()) {
    o.pass = false;
    o.detail = "no steady-state estimates";
    return o;
  }
  const auto cmp = eval::compare_hr(steady, 72.0);
  o.pass = worst <= 2.0;
  o.detail = fmt("%zu steady estimates, mean %.3f bpm, MAE %.3f, worst error %.3f bpm", steady.size(),
                 cmp.computed_bpm, cmp.mean_abs_error, worst);
  return o;
}

Outcome streaming_equivalence() {
  Outcome o;
  int trials = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0 + static_cast<double>(seed));
    std::vector<double> x(10000);
    for (double& v : x) v = dist(rng);
    const dsp::PipelineConfig pc;
    const auto batch = dsp::run_stages(pc, x);
    dsp::StagePipeline p(pc);
    for (std::size_t n = 0; n < x.size(); ++n) {
      const auto s = p.step(x[n]);
      o.pass = o.pass && s.bandpassed == batch.bandpassed[n] && s.cubed_ma == batch.cubed_ma[n] &&
               s.abs_ma == batch.abs_ma[n];
    }
    const auto a = run_engine(x, EngineConfig{});
    const auto b = run_batch(x, EngineConfig{});
    o.pass = o.pass && a.beats.size() == b.beats.size() && a.heart_rates == b.heart_rates;
    for (std::size_t k = 0; o.pass && k < a.beats.size(); ++k) {
      o.pass = a.beats[k].processed_index == b.beats[k].processed_index &&
               a.beats[k].amplitude == b.beats[k].amplitude;
    }
    ++trials;
  }
  o.detail = fmt("%d random inputs of 10000 samples: stages and beats bit-identical", trials);
  if (!o.pass) o.detail = "streaming and whole-sequence outputs differ";
  return o;
}

Outcome scale_covariance() {
  Outcome o;
  int runs = 0;
  std::size_t beats = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    synth::SynthConfig sc;
    sc.duration_s = 120.0;
    sc.mean_hr_bpm = 55.0 + 10.0 * static_cast<double>(seed);
    sc.hr_jitter_pct = 5.0;
    sc.amplitude_jitter_pct = 10.0;
    sc.noise_snr_db = seed % 2 == 0 ? std::optional<double>(10.0) : std::nullopt;
    if (seed > 2) sc.motion_bursts = {{40.0, 4.0, 3.0}};
    sc.seed = seed;
    const auto sig = synth::generate(sc, SignalConfig{});
    const auto base = raw_indices(run_engine(sig.samples, EngineConfig{}));
    beats += base.size();
    for (double k : {1e3, 1e-3}) {
      std::vector<double> scaled(sig.samples);
      for (double& v : scaled) v *= k;
      o.pass = o.pass && raw_indices(run_engine(scaled, EngineConfig{})) == base;
      ++runs;
    }
  }
  o.detail = fmt("%d scaled runs (x1e3, x1e-3), %zu baseline beats, indices %s", runs, beats,
                 o.pass ? "identical" : "differ");
  return o;
}

Outcome performance() {
  synth::SynthConfig sc;
  sc.duration_s = 3600.0;
  sc.noise_snr_db = 15.0;
  const auto sig = synth::generate(sc, SignalConfig{});
  const auto start = Clock::now();
  const auto r = run_engine(sig.samples, EngineConfig{});
  const double t = seconds_since(start);
  Outcome o;
  o.pass = sig.samples.size() == 180000 && t < 1.0 && !r.beats.empty();
  o.detail = fmt("%zu samples in %.3f s (%zu beats)", sig.samples.size(), t, r.beats.size());
  return o;
}

Outcome property_suites() {
  constexpr int kCases = 100;
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int ma_ok = 0, fir_ok = 0, spacing_ok = 0, floor_ok = 0;

  for (int c = 0; c < kCases; ++c) {
    const std::size_t w = 1 + static_cast<std::size_t>(unit(rng) * 40);
    std::normal_distribution<double> dist(0.0, 1.0 + 100.0 * unit(rng));
    std::vector<double> x(2000);
    for (double& v : x) v = dist(rng);
    dsp::MovingAverage m(w);
    bool ok = true;
    for (std::size_t n = 0; n < x.size(); ++n) {
      double s = 0.0;
      for (std::size_t k = 0; k < w && k <= n; ++k) s += x[n - k];
      const double brute = s / static_cast<double>(w);
      ok = ok && std::fabs(m.step(x[n]) - brute) <= 1e-9 * (1.0 + std::fabs(brute));
    }
    ma_ok += ok;
  }

  for (int c = 0; c < kCases; ++c) {
    std::vector<double> h(1 + static_cast<std::size_t>(unit(rng) * 150));
    for (double& v : h) v = 2.0 * unit(rng) - 1.0;
    dsp::FirFilter f(h);
    bool ok = f.step(1.0) == h[0];
    for (std::size_t k = 1; k < h.size() + 5; ++k) ok = ok && f.step(0.0) == (k < h.size() ? h[k] : 0.0);
    fir_ok += ok;
  }

  const detect::DetectorConfig dc;
  for (int c = 0; c < kCases; ++c) {
    synth::SynthConfig sc;
    sc.duration_s = 40.0;
    sc.mean_hr_bpm = 40.0 + 140.0 * unit(rng);
    sc.hr_jitter_pct = 15.0 * unit(rng);
    sc.amplitude_jitter_pct = 50.0 * unit(rng);
    sc.respiration_amplitude = 5.0 * unit(rng);
    sc.noise_snr_db = -5.0 + 25.0 * unit(rng);
    if (unit(rng) < 0.5) sc.motion_bursts = {{5.0 + 25.0 * unit(rng), 1.0 + 4.0 * unit(rng), 1.0 + 4.0 * unit(rng)}};
    sc.seed = rng();
    const auto sig = synth::generate(sc, SignalConfig{});
    const auto smoothed = dsp::run_stages(dsp::PipelineConfig{}, sig.samples).abs_ma;
    detect::BeatDetector d(dc);
    std::vector<detect::Beat> beats;
    bool positive = true;
    for (double v : smoothed) {
      const auto s = d.step(v);
      if (s.finalized) beats.push_back(*s.finalized);
      if (d.initialized()) {
        positive = positive && d.state().threshold > 0.0 && d.state().threshold >= d.state().floor;
      }
    }
    if (auto b = d.finish()) beats.push_back(*b);
    bool spaced = true;
    for (std::size_t k = 1; k < beats.size(); ++k) {
      spaced = spaced && beats[k].index - beats[k - 1].index > static_cast<std::int64_t>(dc.refractory_samples());
    }
    spacing_ok += spaced;
    floor_ok += positive;
  }

  Outcome o;
  o.pass = ma_ok == kCases && fir_ok == kCases && spacing_ok == kCases && floor_ok == kCases;
  o.detail = fmt("moving average %d/%d, FIR impulse %d/%d, beat spacing %d/%d, threshold floor %d/%d",
                 ma_ok, kCases, fir_ok, kCases, spacing_ok, kCases, floor_ok, kCases);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"detection table reproduction", table_reproduction},
      {"band-pass filter specification", filter_spec},
      {"clean synthetic end-to-end", clean_end_to_end},
      {"noisy synthetic end-to-end", noisy_end_to_end},
      {"heart-rate responsiveness", responsiveness},
      {"heart-rate accuracy at 72 bpm", hr_accuracy},
      {"streaming equals whole-sequence", streaming_equivalence},
      {"scale covariance", scale_covariance},
      {"one hour in under a second", performance},
      {"property suites", property_suites},
  };
  int failures = 0;
  int id = 0;
  for (const auto& c : criteria) {
    ++id;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s %2d %-34s %s\n", o.pass ? "PASS" : "FAIL", id, c.name, o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", id - failures, id);
  return failures == 0 ? 0 : 1;
}
