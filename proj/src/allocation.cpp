#include "misose/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "misose/rate.hpp"
#include "misose/sampling.hpp"

namespace misose {

std::vector<double> project_to_simplex(std::span<const double> v, double total_power) {
  if (v.empty()) throw std::invalid_argument("project_to_simplex: empty input");
  if (!(total_power > 0.0) || !std::isfinite(total_power))
    throw std::invalid_argument("project_to_simplex: total power must be positive");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("project_to_simplex: non-finite input");

  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  const bool nonnegative = std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
  if (nonnegative && std::abs(sum - total_power) <= 1e-15 * total_power)
    return {v.begin(), v.end()};

  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double threshold = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - total_power) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) threshold = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::max(v[k] - threshold, 0.0);
  return out;
}

PowerSamplePool::PowerSamplePool(const ChannelModel& model, std::size_t n_samples,
                                 std::uint64_t seed)
    : n_t_(model.n_t()), rows_(n_samples) {
  if (n_samples == 0) throw std::invalid_argument("sample pool needs at least one sample");
  const auto width = static_cast<std::size_t>(n_t_);
  power_.resize(rows_ * width);
  const auto key = sampling::stream_key(seed, Side::eavesdropper);
  sampling::parallel_for(sampling::chunk_count(rows_), [&](std::size_t c) {
    const std::size_t begin = c * sampling::kChunkRows;
    const std::size_t rows = std::min(sampling::kChunkRows, rows_ - begin);
    sampling::fill_power_chunk(key, c, rows, n_t_, model.sigma_g(),
                               std::span<double>(power_.data() + begin * width, rows * width));
  });
}

namespace {

void check_width(const PowerSamplePool& pool, std::span<const double> d) {
  if (d.size() != static_cast<std::size_t>(pool.n_t()))
    throw std::invalid_argument("allocation length does not match the sample pool width");
}

double quadratic(std::span<const double> power, std::span<const double> d) {
  double q = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) q += d[k] * power[k];
  return q;
}

void require_degraded(const ChannelModel& model) {
  if (!model.degraded())
    throw std::domain_error(
        "degenerate regime sigma_h <= sigma_g: secrecy objective is nonpositive everywhere");
}

}  // namespace

GradientEstimate pool_gradient(const PowerSamplePool& pool, double ratio_a,
                               std::span<const double> d) {
  check_width(pool, d);
  const std::size_t n_t = d.size();
  std::vector<sampling::RunningMoments> moments(n_t);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto power = pool.row(i);
    const double q = quadratic(power, d);
    const double factor = (1.0 / (ratio_a + q) - 1.0 / (1.0 + q)) / std::numbers::ln2;
    for (std::size_t k = 0; k < n_t; ++k) moments[k].add(power[k] * factor);
  }
  GradientEstimate out;
  out.values.reserve(n_t);
  out.std_errors.reserve(n_t);
  for (const auto& m : moments) {
    out.values.push_back(m.mean());
    out.std_errors.push_back(m.std_error());
  }
  return out;
}

RateEstimate pool_objective(const PowerSamplePool& pool, double ratio_a,
                            std::span<const double> d) {
  check_width(pool, d);
  const double log_a = std::log2(ratio_a);
  sampling::RunningMoments m;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double q = quadratic(pool.row(i), d);
    m.add(std::log2(ratio_a + q) - log_a - std::log2(1.0 + q));
  }
  return {m.mean(), m.std_error(), m.count(), 0};
}

GradientEstimate grad_estimate(const ChannelModel& model, const PowerAllocation& alloc,
                               std::size_t n_samples, std::uint64_t seed) {
  require_degraded(model);
  if (alloc.size() != static_cast<std::size_t>(model.n_t()))
    throw std::invalid_argument("allocation length does not match n_t");
  const PowerSamplePool pool(model, n_samples, seed);
  return pool_gradient(pool, model.ratio_a(), alloc.d());
}

RateEstimate objective_value(const ChannelModel& model, const PowerAllocation& alloc,
                             std::size_t n_samples, std::uint64_t seed) {
  return secrecy_rate_coupled_mc(model, alloc, n_samples, seed);
}

void OptimizerConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(initial_step_fraction > 0.0)) throw std::invalid_argument("initial step must be > 0");
  if (grad_samples < 1) throw std::invalid_argument("grad_samples must be >= 1");
  if (refresh_every < 1) throw std::invalid_argument("refresh_every must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (!(tol_fraction > 0.0)) throw std::invalid_argument("tol must be > 0");
}

PowerAllocation random_allocation(int n_t, double total_power, std::uint64_t seed) {
  if (n_t < 1) throw std::invalid_argument("n_t must be >= 1");
  std::mt19937_64 engine(sampling::stream_key(seed, sampling::StreamTag::start));
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(n_t));
  double sum = 0.0;
  for (double& x : w) {
    x = expo(engine);
    sum += x;
  }
  for (double& x : w) x *= total_power / sum;
  return {project_to_simplex(w, total_power), total_power};
}

OptimizerTrace optimize_allocation(const ChannelModel& model, double total_power,
                                   const OptimizerConfig& config,
                                   std::optional<PowerAllocation> start) {
  config.validate();
  require_degraded(model);
  if (!(total_power > 0.0) || !std::isfinite(total_power))
    throw std::invalid_argument("total power must be positive");
  const int n_t = model.n_t();
  if (start && start->size() != static_cast<std::size_t>(n_t))
    throw std::invalid_argument("start allocation length does not match n_t");

  const double a = model.ratio_a();
  OptimizerTrace trace;

  if (n_t == 1) {
    const PowerAllocation only({total_power}, total_power);
    const PowerSamplePool pool(model, config.grad_samples, config.seed);
    trace.iterates.push_back(only);
    trace.objective_values.push_back(pool_objective(pool, a, only.d()));
    trace.converged = true;
    return trace;
  }

  std::vector<double> d;
  if (start) {
    d = project_to_simplex(start->d(), total_power);
  } else {
    const auto initial = random_allocation(n_t, total_power, config.seed);
    d.assign(initial.d().begin(), initial.d().end());
  }

  std::optional<PowerSamplePool> pool;
  double step0 = 0.0;
  for (int t = 1; t <= config.max_iters; ++t) {
    if ((t - 1) % config.refresh_every == 0) {
      const auto block = static_cast<std::uint64_t>((t - 1) / config.refresh_every);
      pool.emplace(model, config.grad_samples, sampling::mix(config.seed, block));
    }
    if (t == 1) {
      trace.iterates.emplace_back(d, total_power);
      trace.objective_values.push_back(pool_objective(*pool, a, d));
    }

    const auto grad = pool_gradient(*pool, a, d);
    if (t == 1) {
      double norm = 0.0;
      for (double g : grad.values) norm += g * g;
      norm = std::sqrt(norm);
      step0 = norm > 0.0 ? config.initial_step_fraction * total_power / norm : 0.0;
    }
    const double step = step0 / std::sqrt(static_cast<double>(t));
    std::vector<double> moved(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) moved[k] = d[k] + step * grad.values[k];
    d = project_to_simplex(moved, total_power);
    trace.iterates.emplace_back(d, total_power);
    trace.objective_values.push_back(pool_objective(*pool, a, d));

    if (t >= config.window) {
      const auto& past = trace.iterates[trace.iterates.size() - 1 -
                                        static_cast<std::size_t>(config.window)];
      double movement = 0.0;
      for (std::size_t k = 0; k < d.size(); ++k)
        movement = std::max(movement, std::abs(d[k] - past[k]));

      const auto [lo, hi] = std::minmax_element(grad.values.begin(), grad.values.end());
      const double noise = *std::max_element(grad.std_errors.begin(), grad.std_errors.end());
      const bool equalized = (*hi - *lo) <= 3.0 * noise;

      if (movement < config.tol_fraction * total_power && equalized) {
        trace.converged = true;
        break;
      }
    }
  }
  return trace;
}

}  // namespace misose
