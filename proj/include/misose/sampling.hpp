#pragma once

// Chunked, seed-splittable sampling shared by every Monte Carlo routine.
//
// A sample stream is identified by a 64-bit key. Samples are produced in
// fixed-size chunks; chunk i is drawn from an engine seeded with
// mix(key, i), so any chunk can be regenerated independently and the output
// does not depend on how chunks are distributed over threads.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <thread>
#include <vector>

#include "misose/channel.hpp"

namespace misose::sampling {

inline constexpr std::size_t kChunkRows = 8192;

enum class StreamTag : std::uint64_t {
  generic = 0x67656e6572696300ULL,
  legitimate = 0x6c65676974000000ULL,
  eavesdropper = 0x6561766573000000ULL,
  pool = 0x706f6f6c00000000ULL,
  start = 0x7374617274000000ULL,
  unitary = 0x756e697461727900ULL,
  probe = 0x70726f6265000000ULL,
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t mix(std::uint64_t a, std::uint64_t b);

std::uint64_t stream_key(std::uint64_t seed, StreamTag tag);
std::uint64_t stream_key(std::uint64_t seed, Side side);

std::size_t chunk_count(std::size_t rows);

/// Fills out (rows x n_t, row-major) with CN(0, scale^2) entries for one chunk.
void fill_gain_chunk(std::uint64_t key, std::size_t chunk, std::size_t rows, int n_t,
                     double scale, std::span<Complex> out);

/// Same draws as fill_gain_chunk, reduced to |entry|^2.
void fill_power_chunk(std::uint64_t key, std::size_t chunk, std::size_t rows, int n_t,
                      double scale, std::span<double> out);

/// Mean / variance accumulator (Welford, with Chan's pairwise merge).
class RunningMoments {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  void merge(const RunningMoments& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance (0 for fewer than two samples).
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Worker threads for `jobs` independent tasks. Honors MISOSE_THREADS and
/// returns 1 inside an enclosing parallel_for, so nested regions run inline.
std::size_t worker_count(std::size_t jobs);

namespace detail {
inline thread_local bool in_parallel_region = false;
}

/// Runs body(i) for i in [0, jobs) across a static thread partition.
template <typename Body>
void parallel_for(std::size_t jobs, Body&& body) {
  const std::size_t workers = worker_count(jobs);
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&body, &errors, w, workers, jobs] {
        detail::in_parallel_region = true;
        try {
          for (std::size_t i = w; i < jobs; i += workers) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Reduces per-chunk moments in chunk order, so the result is bit-identical
/// for any worker count. chunk_fn(chunk, rows, moments) accumulates one chunk.
template <typename ChunkFn>
RunningMoments chunked_moments(std::size_t rows, ChunkFn&& chunk_fn) {
  const std::size_t chunks = chunk_count(rows);
  std::vector<RunningMoments> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kChunkRows;
    const std::size_t n = std::min(kChunkRows, rows - begin);
    chunk_fn(c, n, partial[c]);
  });
  RunningMoments total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace misose::sampling
