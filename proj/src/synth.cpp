#include "bcg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "bcg/errors.hpp"

namespace bcg::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kWaveletSupportSigmas = 6.0;
constexpr double kBurstRampS = 0.25;
constexpr std::size_t kHrAveragedIntervals = 8;
constexpr double kHrCadenceS = 3.0;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidConfig(what);
}

// Raised-cosine ramps at both ends of [0, duration], flat 1 in between.
double tukey(double t, double duration) {
  if (t < 0.0 || t > duration) return 0.0;
  const double ramp = std::min(kBurstRampS, duration / 2.0);
  if (t < ramp) return 0.5 * (1.0 - std::cos(std::numbers::pi * t / ramp));
  if (t > duration - ramp) return 0.5 * (1.0 - std::cos(std::numbers::pi * (duration - t) / ramp));
  return 1.0;
}

std::vector<HrPoint> hr_series(const std::vector<double>& beat_times, double duration_s,
                               int rate) {
  std::vector<HrPoint> out;
  const auto cadence = static_cast<std::int64_t>(samples_for(kHrCadenceS, rate));
  const auto n = static_cast<std::int64_t>(samples_for(duration_s, rate));
  for (std::int64_t at = cadence; at < n; at += cadence) {
    const double t = static_cast<double>(at) / rate;
    const auto end = std::upper_bound(beat_times.begin(), beat_times.end(), t);
    const auto beats = static_cast<std::size_t>(end - beat_times.begin());
    if (beats < 2) continue;
    const std::size_t intervals = std::min(beats - 1, kHrAveragedIntervals);
    const double span = beat_times[beats - 1] - beat_times[beats - 1 - intervals];
    out.push_back({at, 60.0 * static_cast<double>(intervals) / span});
  }
  return out;
}

}  // namespace

void SynthConfig::validate() const {
  require(duration_s > 0.0, "duration_s must be positive");
  require(mean_hr_bpm >= 30.0 && mean_hr_bpm <= 200.0, "mean_hr_bpm must be in [30, 200]");
  require(hr_jitter_pct >= 0.0 && hr_jitter_pct < 50.0, "hr_jitter_pct must be in [0, 50)");
  require(beat_amplitude > 0.0, "beat_amplitude must be positive");
  require(amplitude_jitter_pct >= 0.0 && amplitude_jitter_pct < 100.0,
          "amplitude_jitter_pct must be in [0, 100)");
  require(respiration_hz >= 0.0, "respiration_hz must be nonnegative");
  require(respiration_amplitude >= 0.0, "respiration_amplitude must be nonnegative");
  require(!noise_snr_db || std::isfinite(*noise_snr_db), "noise_snr_db must be finite");
  require(carrier_hz > 0.0 && envelope_sigma_s > 0.0, "wavelet parameters must be positive");
  for (const auto& b : motion_bursts) {
    require(b.start_s >= 0.0 && b.duration_s > 0.0 && b.gain > 0.0,
            "motion bursts need start_s >= 0, duration_s > 0 and gain > 0");
  }
}

SynthSignal generate(const SynthConfig& cfg, const SignalConfig& sig) {
  sig.validate();
  cfg.validate();
  const int rate = sig.sample_rate_hz;
  const double fs = rate;
  const std::size_t n = samples_for(cfg.duration_s, rate);
  require(n > 0, "duration_s is shorter than one sample");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  SynthSignal out;
  out.cardiac.assign(n, 0.0);

  const double mean_interval = 60.0 / cfg.mean_hr_bpm;
  const double last_time = static_cast<double>(n - 1) / fs;
  const double support = kWaveletSupportSigmas * cfg.envelope_sigma_s;
  const double two_var = 2.0 * cfg.envelope_sigma_s * cfg.envelope_sigma_s;

  // Interval and amplitude draws alternate per beat so the sequence is fixed
  // by the seed alone.
  double t = 0.5 * mean_interval;
  while (t <= last_time) {
    const double amp =
        cfg.beat_amplitude * (1.0 + cfg.amplitude_jitter_pct / 100.0 * unit(rng));
    out.truth.beat_times_s.push_back(t);
    out.truth.beat_indices.push_back(static_cast<std::int64_t>(std::nearbyint(t * fs)));

    const auto first = static_cast<std::int64_t>(std::ceil((t - support) * fs));
    const auto last = static_cast<std::int64_t>(std::floor((t + support) * fs));
    for (std::int64_t k = std::max<std::int64_t>(first, 0);
         k <= std::min<std::int64_t>(last, static_cast<std::int64_t>(n) - 1); ++k) {
      const double tau = static_cast<double>(k) / fs - t;
      out.cardiac[static_cast<std::size_t>(k)] +=
          amp * std::exp(-tau * tau / two_var) * std::cos(kTwoPi * cfg.carrier_hz * tau);
    }
    t += mean_interval * (1.0 + cfg.hr_jitter_pct / 100.0 * unit(rng));
  }

  out.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double tk = static_cast<double>(k) / fs;
    out.samples[k] = out.cardiac[k] +
                     cfg.respiration_amplitude * std::sin(kTwoPi * cfg.respiration_hz * tk);
  }

  for (const auto& burst : cfg.motion_bursts) {
    for (std::size_t k = 0; k < n; ++k) {
      const double local = static_cast<double>(k) / fs - burst.start_s;
      if (local < 0.0 || local > burst.duration_s) continue;
      const double w = tukey(local, burst.duration_s);
      const double lobe = (burst.gain - 1.0) * cfg.beat_amplitude *
                          std::sin(std::numbers::pi * local / burst.duration_s);
      out.samples[k] = out.samples[k] * (1.0 + (burst.gain - 1.0) * w) + lobe;
    }
  }

  if (cfg.noise_snr_db) {
    const double power =
        std::inner_product(out.cardiac.begin(), out.cardiac.end(), out.cardiac.begin(), 0.0) /
        static_cast<double>(n);
    const double sigma = std::sqrt(power) / std::pow(10.0, *cfg.noise_snr_db / 20.0);
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& s : out.samples) s += noise(rng);
  }

  out.truth.true_hr_series = hr_series(out.truth.beat_times_s, cfg.duration_s, rate);
  return out;
}

}  // namespace bcg::synth
