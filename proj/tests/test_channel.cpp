#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "misose/channel.hpp"
#include "misose/rate.hpp"
#include "misose/sampling.hpp"

using namespace misose;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

// Critical value at alpha = 0.001.
double ks_critical(std::size_t n, std::size_t m) {
  return 1.949 * std::sqrt(static_cast<double>(n + m) / static_cast<double>(n * m));
}

struct ThreadOverride {
  explicit ThreadOverride(const char* value) { setenv("MISOSE_THREADS", value, 1); }
  ~ThreadOverride() { unsetenv("MISOSE_THREADS"); }
};

}  // namespace

TEST_CASE("model and allocation validation") {
  CHECK_THROWS_AS(ChannelModel(0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel(2, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel(2, 1.0, -1.0), std::invalid_argument);
  const ChannelModel m(2, 1.0, 0.5);
  CHECK(m.ratio_a() == doctest::Approx(0.25));
  CHECK(m.degraded());
  CHECK_FALSE(ChannelModel(2, 0.5, 1.0).degraded());

  CHECK_THROWS_AS(PowerAllocation({}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PowerAllocation({-0.1, 1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PowerAllocation({0.6, 0.6}, 1.0), std::invalid_argument);
  CHECK_NOTHROW(PowerAllocation({0.2, 0.3}, 1.0));
  const auto u = PowerAllocation::uniform(4, 2.0);
  CHECK(u.total() == doctest::Approx(2.0));
  CHECK(u[3] == 0.5);
}

TEST_CASE("sample_channel is a pure function of its inputs") {
  const ChannelModel m(2, 1.0, 0.5);
  const auto a = sample_channel(m, Side::legitimate, 4, 7);
  const auto b = sample_channel(m, Side::legitimate, 4, 7);
  REQUIRE(a.rows() == 4);
  REQUIRE(a.cols() == 2);
  CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin()));

  const auto c = sample_channel(m, Side::legitimate, 4, 8);
  CHECK_FALSE(std::equal(a.data().begin(), a.data().end(), c.data().begin()));

  CHECK_THROWS_AS(sample_channel(m, Side::legitimate, 0, 7), std::invalid_argument);
}

TEST_CASE("sample_channel output does not depend on the worker count") {
  const ChannelModel m(3, 1.0, 0.5);
  const std::size_t count = 5 * sampling::kChunkRows + 123;
  std::vector<Complex> serial;
  {
    ThreadOverride one("1");
    const auto g = sample_channel(m, Side::eavesdropper, count, 11);
    serial.assign(g.data().begin(), g.data().end());
  }
  ThreadOverride four("4");
  const auto g = sample_channel(m, Side::eavesdropper, count, 11);
  CHECK(std::equal(serial.begin(), serial.end(), g.data().begin()));

  // A shorter request is a prefix of a longer one.
  const auto prefix = sample_channel(m, Side::eavesdropper, 1000, 11);
  CHECK(std::equal(prefix.data().begin(), prefix.data().end(), g.data().begin()));
}

TEST_CASE("legitimate and eavesdropper streams differ for the same seed") {
  const ChannelModel m(1, 1.0, 1.0);
  const auto h = sample_channel(m, Side::legitimate, 16, 3);
  const auto g = sample_channel(m, Side::eavesdropper, 16, 3);
  CHECK_FALSE(std::equal(h.data().begin(), h.data().end(), g.data().begin()));
}

TEST_CASE("second moments match the CN(0, sigma^2) convention") {
  SUBCASE("E|h|^2 = 1 for sigma_h = 1") {
    const ChannelModel m(1, 1.0, 1.0);
    const std::size_t n = 1'000'000;
    const auto h = sample_channel(m, Side::legitimate, n, 1);
    double sum = 0.0;
    for (const auto& z : h.data()) sum += std::norm(z);
    // |h|^2 ~ Exp(1): variance 1.
    CHECK(std::abs(sum / n - 1.0) <= 3.0 * std::sqrt(1.0 / n));
  }
  SUBCASE("E||g||^2 = 3 * 0.25 for n_t = 3, sigma_g = 0.5") {
    const ChannelModel m(3, 1.0, 0.5);
    const std::size_t n = 1'000'000;
    const auto g = sample_channel(m, Side::eavesdropper, n, 2);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& z : g.row(i)) sum += std::norm(z);
    // Sum of three Exp(mean 0.25): variance 3 * 0.25^2.
    const double se = std::sqrt(3.0 * 0.0625 / n);
    CHECK(std::abs(sum / n - 0.75) <= 3.0 * se);
  }
  SUBCASE("real and imaginary parts each carry sigma^2 / 2") {
    const ChannelModel m(2, 2.0, 1.0);
    const std::size_t n = 200'000;
    const auto h = sample_channel(m, Side::legitimate, n, 5);
    double re2 = 0.0;
    double im2 = 0.0;
    for (const auto& z : h.data()) {
      re2 += z.real() * z.real();
      im2 += z.imag() * z.imag();
    }
    const double entries = static_cast<double>(h.data().size());
    // (sigma^2 / 2) * chi^2_1 has variance 2 (sigma^2 / 2)^2 = 8 here.
    const double se = std::sqrt(8.0 / entries);
    CHECK(std::abs(re2 / entries - 2.0) <= 3.0 * se);
    CHECK(std::abs(im2 / entries - 2.0) <= 3.0 * se);
  }
}

TEST_CASE("quadratic_form") {
  const ChannelModel m(2, 1.0, 0.5);
  const auto g = sample_channel(m, Side::eavesdropper, 3, 9);

  SUBCASE("zero allocation") {
    for (double q : quadratic_form(g, PowerAllocation::zeros(2))) CHECK(q == 0.0);
  }
  SUBCASE("single-antenna selection") {
    const auto q = quadratic_form(g, PowerAllocation::single(2, 5.0));
    for (std::size_t i = 0; i < 3; ++i) CHECK(q[i] == doctest::Approx(5.0 * std::norm(g(i, 0))));
  }
  SUBCASE("matches a direct elementwise recomputation") {
    const auto q = quadratic_form(g, PowerAllocation({1.0, 2.0}, 3.0));
    for (std::size_t i = 0; i < 3; ++i) {
      const double re0 = g(i, 0).real();
      const double im0 = g(i, 0).imag();
      const double re1 = g(i, 1).real();
      const double im1 = g(i, 1).imag();
      const double expected = 1.0 * (re0 * re0 + im0 * im0) + 2.0 * (re1 * re1 + im1 * im1);
      CHECK(q[i] == doctest::Approx(expected).epsilon(1e-14));
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(quadratic_form(g, PowerAllocation::uniform(3, 1.0)), std::invalid_argument);
  }
}

TEST_CASE("quadratic_form is nonnegative for random allocations") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n_t = 1 + trial % 6;
    std::vector<double> d(static_cast<std::size_t>(n_t));
    for (double& v : d) v = unit(rng) * (trial % 3 == 0 ? 0.0 : 3.0);
    const double total = std::max(1e-9, std::accumulate(d.begin(), d.end(), 0.0));
    const ChannelModel m(n_t, 1.0, 0.3);
    const auto g = sample_channel(m, Side::legitimate, 200, static_cast<std::uint64_t>(trial));
    for (double q : quadratic_form(g, PowerAllocation(d, total))) CHECK(q >= 0.0);
  }
}

TEST_CASE("random_unitary is unitary") {
  for (int n : {1, 2, 4, 7}) {
    const auto u = random_unitary(n, 17);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Complex dot{0.0, 0.0};
        for (int k = 0; k < n; ++k)
          dot += std::conj(u[static_cast<std::size_t>(k * n + i)]) * u[static_cast<std::size_t>(k * n + j)];
        CHECK(std::abs(dot - Complex(i == j ? 1.0 : 0.0, 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("rotation leaves the distribution of g^H D g unchanged") {
  const ChannelModel m(3, 1.0, 0.7);
  const std::size_t n = 20'000;
  const PowerAllocation d({2.0, 0.5, 0.5}, 3.0);
  const auto u = random_unitary(3, 99);

  const auto plain = quadratic_form(sample_channel(m, Side::eavesdropper, n, 1), d);
  const auto rotated =
      quadratic_form(rotate(sample_channel(m, Side::eavesdropper, n, 2), u), d);
  CHECK(ks_statistic(plain, rotated) < ks_critical(n, n));

  // The same test separates genuinely different allocations.
  const auto other =
      quadratic_form(sample_channel(m, Side::eavesdropper, n, 3), PowerAllocation::single(3, 3.0));
  CHECK(ks_statistic(plain, other) > ks_critical(n, n));
}

TEST_CASE("standard error shrinks as 1/sqrt(n)") {
  const auto alloc = PowerAllocation::uniform(2, 4.0);
  const auto small = ergodic_log_rate_mc(1.0, alloc, 100'000, 5);
  const auto large = ergodic_log_rate_mc(1.0, alloc, 400'000, 6);
  CHECK(large.std_error / small.std_error == doctest::Approx(0.5).epsilon(0.05));
  CHECK(small.std_error >= 0.0);
}

TEST_CASE("RunningMoments merge equals a single pass") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(2.0, 3.0);
  sampling::RunningMoments whole;
  sampling::RunningMoments left;
  sampling::RunningMoments right;
  for (int i = 0; i < 1000; ++i) {
    const double x = normal(rng);
    whole.add(x);
    (i < 377 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.count() == whole.count());
  CHECK(left.mean() == doctest::Approx(whole.mean()).epsilon(1e-13));
  CHECK(left.variance() == doctest::Approx(whole.variance()).epsilon(1e-12));
}
