#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "misose/channel.hpp"

namespace misose {

/// Euclidean projection of v onto {d >= 0, sum d = total_power}.
std::vector<double> project_to_simplex(std::span<const double> v, double total_power);

/// Fixed batch of |g_k|^2 draws, reused across gradient and objective
/// evaluations (common random numbers).
class PowerSamplePool {
 public:
  /// Draws from the same eavesdropper stream secrecy_rate_coupled_mc uses for
  /// this seed, so pool statistics and the coupled estimator agree draw for draw.
  PowerSamplePool(const ChannelModel& model, std::size_t n_samples, std::uint64_t seed);

  std::size_t size() const { return rows_; }
  int n_t() const { return n_t_; }
  std::span<const double> row(std::size_t i) const {
    return {power_.data() + i * static_cast<std::size_t>(n_t_), static_cast<std::size_t>(n_t_)};
  }

 private:
  int n_t_;
  std::size_t rows_;
  std::vector<double> power_;
};

struct GradientEstimate {
  std::vector<double> values;
  std::vector<double> std_errors;
};

/// d/d d_k of E[log2(a + q) - log2(1 + q)], q = g^H D g, evaluated on the pool.
GradientEstimate pool_gradient(const PowerSamplePool& pool, double ratio_a,
                               std::span<const double> d);
/// The coupled secrecy-rate integrand averaged over the pool.
RateEstimate pool_objective(const PowerSamplePool& pool, double ratio_a,
                            std::span<const double> d);

/// Monte Carlo gradient of the secrecy-rate objective. Throws
/// std::domain_error when sigma_h <= sigma_g (objective is nonpositive and the
/// gradient test is meaningless).
GradientEstimate grad_estimate(const ChannelModel& model, const PowerAllocation& alloc,
                               std::size_t n_samples, std::uint64_t seed);

/// Secrecy-rate objective for a diagonal allocation (the coupled estimator).
RateEstimate objective_value(const ChannelModel& model, const PowerAllocation& alloc,
                             std::size_t n_samples, std::uint64_t seed);

struct OptimizerConfig {
  int max_iters = 600;
  /// First step is initial_step_fraction * P / ||grad_1||; step t is that over sqrt(t).
  double initial_step_fraction = 0.5;
  std::size_t grad_samples = 50'000;
  /// The sample pool is redrawn every refresh_every iterations.
  int refresh_every = 10;
  /// Convergence: movement over `window` iterations below tol_fraction * P.
  int window = 20;
  double tol_fraction = 1e-3;
  std::uint64_t seed = 1;

  void validate() const;
};

struct OptimizerTrace {
  std::vector<PowerAllocation> iterates;
  std::vector<RateEstimate> objective_values;
  bool converged = false;

  const PowerAllocation& final_allocation() const { return iterates.back(); }
};

/// Dirichlet(1, ..., 1) point scaled to total_power.
PowerAllocation random_allocation(int n_t, double total_power, std::uint64_t seed);

/// Projected stochastic gradient ascent of the secrecy-rate objective over the
/// power simplex. Starts from `start`, or from random_allocation(seed) when
/// absent. Throws std::domain_error when sigma_h <= sigma_g.
OptimizerTrace optimize_allocation(const ChannelModel& model, double total_power,
                                   const OptimizerConfig& config,
                                   std::optional<PowerAllocation> start = std::nullopt);

}  // namespace misose
