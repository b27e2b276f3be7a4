#include "bcg/moving_average.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bcg/errors.hpp"

namespace bcg::dsp {

MovingAverage::MovingAverage(std::size_t window_len) : buffer_(window_len, 0.0) {
  if (window_len == 0) throw InvalidConfig("moving average window must be at least 1 sample");
}

double MovingAverage::step(double x) {
  sum_ -= buffer_[next_];
  buffer_[next_] = x;
  sum_ += x;
  if (++next_ == buffer_.size()) {
    next_ = 0;
    // Re-anchor once per window so incremental rounding cannot accumulate.
    sum_ = std::accumulate(buffer_.begin(), buffer_.end(), 0.0);
  }
  return sum_ / static_cast<double>(buffer_.size());
}

void MovingAverage::reset() {
  std::fill(buffer_.begin(), buffer_.end(), 0.0);
  next_ = 0;
  sum_ = 0.0;
}

double RectifiedAverage::step(double x) {
  // Incremental subtraction can leave -1e-17 residue after a loud window
  // drains; the mean of magnitudes is clamped to its true lower bound.
  return std::max(0.0, average_.step(std::fabs(x)));
}

std::vector<double> moving_average(std::size_t window_len, std::span<const double> input) {
  MovingAverage avg(window_len);
  std::vector<double> out(input.size());
  std::transform(input.begin(), input.end(), out.begin(), [&](double x) { return avg.step(x); });
  return out;
}

std::vector<double> rectified_average(std::size_t window_len, std::span<const double> input) {
  RectifiedAverage avg(window_len);
  std::vector<double> out(input.size());
  std::transform(input.begin(), input.end(), out.begin(), [&](double x) { return avg.step(x); });
  return out;
}

}  // namespace bcg::dsp
