#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "bcg/errors.hpp"
#include "bcg/moving_average.hpp"

using namespace bcg;
using namespace bcg::dsp;

namespace {

// Mean of the last `w` inputs with zeros before the start.
std::vector<double> brute_window_means(std::size_t w, const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    double s = 0.0;
    for (std::size_t k = 0; k < w; ++k) s += n >= k ? x[n - k] : 0.0;
    out[n] = s / static_cast<double>(w);
  }
  return out;
}

}  // namespace

TEST_CASE("signed_cube") {
  CHECK(signed_cube(0.0) == 0.0);
  CHECK(signed_cube(2.0) == 8.0);
  CHECK(signed_cube(-2.0) == -8.0);
  CHECK(signed_cube(0.5) == 0.125);
}

TEST_CASE("property: signed_cube is odd and strictly increasing") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double a = dist(rng);
    const double b = dist(rng);
    CHECK(signed_cube(-a) == -signed_cube(a));
    if (a < b) CHECK(signed_cube(a) < signed_cube(b));
    if (a > b) CHECK(signed_cube(a) > signed_cube(b));
  }
}

TEST_CASE("ma_step examples") {
  MovingAverage m(3);
  m.step(1.0);
  m.step(2.0);
  CHECK(m.step(3.0) == 2.0);

  MovingAverage c(15);
  double last = 0.0;
  for (int i = 0; i < 40; ++i) last = c.step(4.25);
  CHECK(last == doctest::Approx(4.25).epsilon(1e-15));
}

TEST_CASE("zero-length window is rejected") {
  CHECK_THROWS_AS(MovingAverage(0), InvalidConfig);
}

TEST_CASE("streaming means equal brute-force window means over 1e4 samples") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> dist(0.0, 10.0);
  std::vector<double> x(10000);
  for (double& v : x) v = dist(rng);
  for (std::size_t w : {1u, 3u, 15u, 64u}) {
    const auto oracle = brute_window_means(w, x);
    MovingAverage m(w);
    for (std::size_t n = 0; n < x.size(); ++n) {
      CHECK(m.step(x[n]) == doctest::Approx(oracle[n]).epsilon(1e-9).scale(10.0));
    }
  }
}

TEST_CASE("property: running sum tracks the buffer; output inside window bounds") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> wlen(1, 40);
  std::uniform_real_distribution<double> dist(-100.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t w = wlen(rng);
    MovingAverage m(w);
    std::vector<double> seen;
    for (int n = 0; n < 500; ++n) {
      const double x = dist(rng);
      seen.push_back(x);
      const double y = m.step(x);
      const auto win = m.window();
      const double sum = std::accumulate(win.begin(), win.end(), 0.0);
      CHECK(m.running_sum() == doctest::Approx(sum).epsilon(1e-12).scale(100.0));
      if (seen.size() >= w) {
        const auto [lo, hi] = std::minmax_element(seen.end() - static_cast<long>(w), seen.end());
        CHECK(y >= *lo - 1e-12 * 100.0);
        CHECK(y <= *hi + 1e-12 * 100.0);
      }
    }
  }
}

TEST_CASE("rectify_smooth examples") {
  RectifiedAverage r(15);
  double last = 0.0;
  for (int i = 0; i < 30; ++i) last = r.step(-2.5);
  CHECK(last == doctest::Approx(2.5));

  RectifiedAverage alt(15);
  for (int i = 0; i < 30; ++i) last = alt.step(i % 2 == 0 ? 1.0 : -1.0);
  CHECK(last == doctest::Approx(1.0));
}

TEST_CASE("property: rectify_smooth output is never negative") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> mag(-30.0, 30.0);
  for (int trial = 0; trial < 100; ++trial) {
    RectifiedAverage r(15);
    for (int n = 0; n < 400; ++n) {
      // Loud bursts followed by exact zeros stress the incremental sum.
      const double x = (n / 20) % 2 == 0 ? std::pow(10.0, mag(rng) / 3.0) * mag(rng) : 0.0;
      CHECK(r.step(x) >= 0.0);
    }
  }
}

TEST_CASE("batch helpers match streaming") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> dist;
  std::vector<double> x(2000);
  for (double& v : x) v = dist(rng);
  const auto batch = moving_average(15, x);
  const auto rect = rectified_average(15, x);
  MovingAverage m(15);
  RectifiedAverage r(15);
  for (std::size_t n = 0; n < x.size(); ++n) {
    CHECK(m.step(x[n]) == batch[n]);
    CHECK(r.step(x[n]) == rect[n]);
  }
}
