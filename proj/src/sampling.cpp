#include "misose/sampling.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

namespace misose::sampling {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

std::uint64_t stream_key(std::uint64_t seed, StreamTag tag) {
  return mix(seed, static_cast<std::uint64_t>(tag));
}

std::uint64_t stream_key(std::uint64_t seed, Side side) {
  return stream_key(seed, side == Side::legitimate ? StreamTag::legitimate
                                                   : StreamTag::eavesdropper);
}

std::size_t chunk_count(std::size_t rows) { return (rows + kChunkRows - 1) / kChunkRows; }

namespace {

std::mt19937_64 chunk_engine(std::uint64_t key, std::size_t chunk) {
  return std::mt19937_64{mix(key, static_cast<std::uint64_t>(chunk))};
}

}  // namespace

void fill_gain_chunk(std::uint64_t key, std::size_t chunk, std::size_t rows, int n_t,
                     double scale, std::span<Complex> out) {
  auto engine = chunk_engine(key, chunk);
  std::normal_distribution<double> normal(0.0, scale * std::sqrt(0.5));
  const std::size_t n = rows * static_cast<std::size_t>(n_t);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = normal(engine);
    const double im = normal(engine);
    out[i] = {re, im};
  }
}

void fill_power_chunk(std::uint64_t key, std::size_t chunk, std::size_t rows, int n_t,
                      double scale, std::span<double> out) {
  auto engine = chunk_engine(key, chunk);
  std::normal_distribution<double> normal(0.0, scale * std::sqrt(0.5));
  const std::size_t n = rows * static_cast<std::size_t>(n_t);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = normal(engine);
    const double im = normal(engine);
    out[i] = re * re + im * im;
  }
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double RunningMoments::std_error() const {
  if (n_ < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(n_));
}

std::size_t worker_count(std::size_t jobs) {
  if (detail::in_parallel_region) return 1;
  std::size_t hw = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("MISOSE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) hw = static_cast<std::size_t>(v);
  }
  if (hw == 0) hw = 1;
  return std::min(hw, jobs);
}

}  // namespace misose::sampling
