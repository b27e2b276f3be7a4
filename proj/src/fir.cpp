#include "bcg/fir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bcg/errors.hpp"

namespace bcg::dsp {

namespace {

constexpr std::size_t kValidationGridPoints = 8193;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Kaiser's empirical attenuation/beta relations.
double kaiser_attenuation_db(double transition_hz, double fs, std::size_t taps) {
  return 14.36 * (transition_hz / fs) * static_cast<double>(taps - 1) + 7.95;
}

double kaiser_beta(double atten_db) {
  if (atten_db > 50.0) return 0.1102 * (atten_db - 8.7);
  if (atten_db >= 21.0) {
    return 0.5842 * std::pow(atten_db - 21.0, 0.4) + 0.07886 * (atten_db - 21.0);
  }
  return 0.0;
}

double kaiser_window(std::size_t n, std::size_t taps, double beta) {
  const double half = static_cast<double>(taps - 1) / 2.0;
  const double r = (static_cast<double>(n) - half) / half;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
         std::cyl_bessel_i(0.0, beta);
}

}  // namespace

void BandpassSpec::validate(const SignalConfig& cfg) const {
  cfg.validate();
  const double nyquist = cfg.sample_rate_hz / 2.0;
  if (!(0.0 < stop_low_hz && stop_low_hz < pass_low_hz && pass_low_hz < pass_high_hz &&
        pass_high_hz < stop_high_hz && stop_high_hz < nyquist)) {
    std::ostringstream msg;
    msg << "band edges must satisfy 0 < stop_low < pass_low < pass_high < stop_high < "
        << nyquist << " Hz (got " << stop_low_hz << ", " << pass_low_hz << ", "
        << pass_high_hz << ", " << stop_high_hz << ")";
    throw InvalidSpec(msg.str());
  }
  if (!(min_stop_atten_db >= 40.0)) {
    throw InvalidSpec("min_stop_atten_db must be at least 40 dB");
  }
  if (tap_count == 0 || tap_count % 2 == 0) {
    throw InvalidSpec("tap_count must be a positive odd number, got " +
                      std::to_string(tap_count));
  }
}

FirFilter::FirFilter(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)), history_(coefficients_.size(), 0.0) {
  if (coefficients_.empty()) throw InvalidSpec("FIR filter needs at least one tap");
}

double FirFilter::step(double x) {
  const std::size_t n = coefficients_.size();
  head_ = head_ == 0 ? n - 1 : head_ - 1;
  history_[head_] = x;
  double acc = 0.0;
  std::size_t pos = head_;
  for (std::size_t k = 0; k < n; ++k) {
    acc += coefficients_[k] * history_[pos];
    if (++pos == n) pos = 0;
  }
  return acc;
}

void FirFilter::reset() {
  std::fill(history_.begin(), history_.end(), 0.0);
  head_ = 0;
}

double magnitude_at(std::span<const double> coefficients, double frequency_hz,
                    const SignalConfig& cfg) {
  const double w = 2.0 * std::numbers::pi * frequency_hz / cfg.sample_rate_hz;
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    re += coefficients[k] * std::cos(w * static_cast<double>(k));
    im -= coefficients[k] * std::sin(w * static_cast<double>(k));
  }
  return std::hypot(re, im);
}

std::vector<ResponsePoint> magnitude_response(std::span<const double> coefficients,
                                              const SignalConfig& cfg,
                                              std::size_t points) {
  std::vector<ResponsePoint> out;
  if (points == 0) return out;
  out.reserve(points);
  const double nyquist = cfg.sample_rate_hz / 2.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double f =
        points == 1 ? 0.0 : nyquist * static_cast<double>(i) / static_cast<double>(points - 1);
    out.push_back({f, 20.0 * std::log10(magnitude_at(coefficients, f, cfg))});
  }
  return out;
}

FirFilter design_bandpass(const BandpassSpec& spec, const SignalConfig& cfg) {
  spec.validate(cfg);
  const double fs = cfg.sample_rate_hz;
  const std::size_t taps = spec.tap_count;

  const double cut_low = 0.5 * (spec.stop_low_hz + spec.pass_low_hz);
  const double cut_high = 0.5 * (spec.pass_high_hz + spec.stop_high_hz);
  const double transition = std::min(spec.pass_low_hz - spec.stop_low_hz,
                                     spec.stop_high_hz - spec.pass_high_hz);
  const double beta = kaiser_beta(kaiser_attenuation_db(transition, fs, taps));

  const double center = static_cast<double>(taps - 1) / 2.0;
  std::vector<double> h(taps);
  for (std::size_t n = 0; n <= taps / 2; ++n) {
    const double m = static_cast<double>(n) - center;
    const double ideal = 2.0 * cut_high / fs * sinc(2.0 * cut_high * m / fs) -
                         2.0 * cut_low / fs * sinc(2.0 * cut_low * m / fs);
    h[n] = h[taps - 1 - n] = ideal * kaiser_window(n, taps, beta);
  }

  // Unity gain at the passband center.
  const double gain = magnitude_at(h, 0.5 * (spec.pass_low_hz + spec.pass_high_hz), cfg);
  for (double& c : h) c /= gain;

  double pass_peak = 0.0;
  double stop_peak = 0.0;
  for (std::size_t i = 0; i < kValidationGridPoints; ++i) {
    const double f = (fs / 2.0) * static_cast<double>(i) /
                     static_cast<double>(kValidationGridPoints - 1);
    const double mag = magnitude_at(h, f, cfg);
    if (f >= spec.pass_low_hz && f <= spec.pass_high_hz) pass_peak = std::max(pass_peak, mag);
    if (f <= spec.stop_low_hz || f >= spec.stop_high_hz) stop_peak = std::max(stop_peak, mag);
  }
  const double achieved_db = 20.0 * std::log10(pass_peak / stop_peak);
  if (!(achieved_db >= spec.min_stop_atten_db)) {
    std::ostringstream msg;
    msg << taps << " taps reach only " << achieved_db << " dB stopband attenuation; "
        << spec.min_stop_atten_db << " dB required";
    throw SpecUnachievable(msg.str());
  }
  return FirFilter(std::move(h));
}

std::vector<double> fir_filter(std::span<const double> coefficients,
                               std::span<const double> input) {
  std::vector<double> out(input.size());
  for (std::size_t n = 0; n < input.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
      acc += coefficients[k] * (k <= n ? input[n - k] : 0.0);
    }
    out[n] = acc;
  }
  return out;
}

}  // namespace bcg::dsp
