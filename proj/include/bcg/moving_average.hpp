#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bcg::dsp {

// Streaming arithmetic mean over the last window_len inputs. History starts
// zero-filled, so the first window_len - 1 outputs are biased toward zero.
class MovingAverage {
 public:
  explicit MovingAverage(std::size_t window_len);

  double step(double x);
  void reset();

  std::size_t window_len() const { return buffer_.size(); }
  double running_sum() const { return sum_; }
  std::span<const double> window() const { return buffer_; }

 private:
  std::vector<double> buffer_;
  std::size_t next_ = 0;
  double sum_ = 0.0;
};

// Mean of the last window_len values of |x|. Never negative.
class RectifiedAverage {
 public:
  explicit RectifiedAverage(std::size_t window_len) : average_(window_len) {}

  double step(double x);
  void reset() { average_.reset(); }
  std::size_t window_len() const { return average_.window_len(); }

 private:
  MovingAverage average_;
};

// x^3; odd and strictly monotone. Evaluated in double precision, which has
// ample headroom for any physical sample range (|x| < 1e102).
constexpr double signed_cube(double x) { return x * x * x; }

// Whole-sequence counterparts of the streaming stages.
std::vector<double> moving_average(std::size_t window_len, std::span<const double> input);
std::vector<double> rectified_average(std::size_t window_len, std::span<const double> input);

}  // namespace bcg::dsp
