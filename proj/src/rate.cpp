#include "misose/rate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "misose/sampling.hpp"

namespace misose {

namespace {

void require_samples(std::size_t n_samples) {
  if (n_samples == 0) throw std::invalid_argument("n_samples must be >= 1");
}

bool all_zero(const PowerAllocation& alloc) {
  for (double v : alloc.d())
    if (v != 0.0) return false;
  return true;
}

// Per-sample mean of integrand(q) over one stream of q = sum_k d_k |g_k|^2.
template <typename Integrand>
sampling::RunningMoments stream_moments(std::uint64_t key, double scale,
                                        const PowerAllocation& alloc, std::size_t n_samples,
                                        Integrand&& integrand) {
  const int n_t = static_cast<int>(alloc.size());
  const auto d = alloc.d();
  return sampling::chunked_moments(
      n_samples, [&](std::size_t chunk, std::size_t rows, sampling::RunningMoments& acc) {
        std::vector<double> power(rows * alloc.size());
        sampling::fill_power_chunk(key, chunk, rows, n_t, scale, power);
        for (std::size_t i = 0; i < rows; ++i) {
          double q = 0.0;
          for (std::size_t k = 0; k < d.size(); ++k) q += d[k] * power[i * d.size() + k];
          acc.add(integrand(q));
        }
      });
}

RateEstimate to_estimate(const sampling::RunningMoments& m, std::uint64_t seed) {
  return {m.mean(), m.std_error(), m.count(), seed};
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::direct_mc:
      return "direct_mc";
    case Method::coupled_mc:
      return "coupled_mc";
    case Method::quadrature:
      return "quadrature";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "direct" || text == "direct_mc") return Method::direct_mc;
  if (text == "coupled" || text == "coupled_mc") return Method::coupled_mc;
  if (text == "quad" || text == "quadrature") return Method::quadrature;
  throw std::invalid_argument("unknown method '" + std::string(text) +
                              "' (expected direct, coupled or quad)");
}

RateEstimate ergodic_log_rate_mc(double sigma, const PowerAllocation& alloc,
                                 std::size_t n_samples, std::uint64_t seed) {
  require_samples(n_samples);
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (all_zero(alloc)) return {0.0, 0.0, n_samples, seed};
  const auto key = sampling::stream_key(seed, sampling::StreamTag::generic);
  const auto m =
      stream_moments(key, sigma, alloc, n_samples, [](double q) { return std::log2(1.0 + q); });
  return to_estimate(m, seed);
}

RateEstimate secrecy_rate_direct_mc(const ChannelModel& model, const PowerAllocation& alloc,
                                    std::size_t n_samples, std::uint64_t seed) {
  require_samples(n_samples);
  if (alloc.size() != static_cast<std::size_t>(model.n_t()))
    throw std::invalid_argument("allocation length does not match n_t");
  if (all_zero(alloc)) return {0.0, 0.0, n_samples, seed};
  const auto log_rate = [](double q) { return std::log2(1.0 + q); };
  const auto legit = stream_moments(sampling::stream_key(seed, Side::legitimate),
                                    model.sigma_h(), alloc, n_samples, log_rate);
  const auto eaves = stream_moments(sampling::stream_key(seed, Side::eavesdropper),
                                    model.sigma_g(), alloc, n_samples, log_rate);
  const double se = std::hypot(legit.std_error(), eaves.std_error());
  return {legit.mean() - eaves.mean(), se, n_samples, seed};
}

RateEstimate secrecy_rate_coupled_mc(const ChannelModel& model, const PowerAllocation& alloc,
                                     std::size_t n_samples, std::uint64_t seed) {
  require_samples(n_samples);
  if (alloc.size() != static_cast<std::size_t>(model.n_t()))
    throw std::invalid_argument("allocation length does not match n_t");
  if (all_zero(alloc)) return {0.0, 0.0, n_samples, seed};
  const double a = model.ratio_a();
  const double log_a = std::log2(a);
  const auto m = stream_moments(
      sampling::stream_key(seed, Side::eavesdropper), model.sigma_g(), alloc, n_samples,
      [a, log_a](double q) { return std::log2(a + q) - log_a - std::log2(1.0 + q); });
  return to_estimate(m, seed);
}

QuadratureRule gauss_legendre_rule(std::size_t n_nodes) {
  if (n_nodes == 0) throw std::invalid_argument("quadrature needs at least one node");
  const auto n = static_cast<Eigen::Index>(n_nodes);
  // Golub-Welsch on the Legendre Jacobi matrix.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(n > 1 ? n - 1 : 0);
  for (Eigen::Index i = 1; i < n; ++i) {
    const auto k = static_cast<double>(i);
    off(i - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("Gauss-Legendre eigen-decomposition failed");

  QuadratureRule rule;
  rule.nodes.resize(n_nodes);
  rule.weights.resize(n_nodes);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = 2.0 * v0 * v0;
  }
  return rule;
}

double gamma_survival(int shape, double z) {
  if (shape < 1) throw std::invalid_argument("shape must be >= 1");
  if (std::isnan(z)) throw std::invalid_argument("z must not be NaN");
  if (z <= 0.0) return 1.0;
  if (std::isinf(z)) return 0.0;
  // e^{-z} sum_{k < shape} z^k / k!, each term formed in log space.
  const double log_z = std::log(z);
  double log_term = -z;
  double sum = 0.0;
  for (int k = 0; k < shape; ++k) {
    if (k > 0) log_term += log_z - std::log(static_cast<double>(k));
    sum += std::exp(log_term);
  }
  return std::min(sum, 1.0);
}

double ergodic_log_rate_quadrature(double sigma, double total_power, int n_t,
                                   std::size_t n_nodes) {
  if (n_t < 1) throw std::invalid_argument("n_t must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (total_power < 0.0 || !std::isfinite(total_power))
    throw std::invalid_argument("total power must be nonnegative and finite");
  if (n_nodes < 8) throw std::invalid_argument("quadrature needs at least 8 nodes");
  if (total_power == 0.0) return 0.0;

  // With T ~ Gamma(n_t, 1) and c = sigma^2 P / n_t, integration by parts gives
  // E[ln(1 + cT)] = int_0^inf Q(n_t, (e^y - 1) / c) dy, an entire integrand in y.
  // Q is 1 to double precision below the lower Gamma quantile and 0 above the
  // upper one, so only the window between them is integrated.
  const double c = total_power / n_t * sigma * sigma;
  const double n = static_cast<double>(n_t);
  const double wh = 1.0 - 1.0 / (9.0 * n) - 3.0 / std::sqrt(n);
  const double z_lo = wh > 0.0 ? n * wh * wh * wh : 0.0;
  const double z_hi = n + 10.0 * std::sqrt(n) + 40.0;
  const double y_lo = std::log1p(c * z_lo);
  const double y_hi = std::log1p(c * z_hi);
  const double half = 0.5 * (y_hi - y_lo);

  const auto rule = gauss_legendre_rule(n_nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double y = y_lo + half * (rule.nodes[i] + 1.0);
    sum += rule.weights[i] * gamma_survival(n_t, std::expm1(y) / c);
  }
  return (y_lo + half * sum) / std::numbers::ln2;
}

RateEstimate secrecy_capacity(const ChannelModel& model, double total_power,
                              const EvalMethod& method) {
  if (total_power < 0.0 || !std::isfinite(total_power))
    throw std::invalid_argument("total power must be nonnegative and finite");
  if (method.count == 0) throw std::invalid_argument("sample/node count must be >= 1");
  if (!model.degraded() || total_power == 0.0) return {0.0, 0.0, method.count, method.seed};

  const auto alloc = PowerAllocation::uniform(model.n_t(), total_power);
  switch (method.method) {
    case Method::direct_mc:
      return secrecy_rate_direct_mc(model, alloc, method.count, method.seed);
    case Method::coupled_mc:
      return secrecy_rate_coupled_mc(model, alloc, method.count, method.seed);
    case Method::quadrature: {
      const double legit =
          ergodic_log_rate_quadrature(model.sigma_h(), total_power, model.n_t(), method.count);
      const double eaves =
          ergodic_log_rate_quadrature(model.sigma_g(), total_power, model.n_t(), method.count);
      return {legit - eaves, 0.0, method.count, method.seed};
    }
  }
  throw std::logic_error("unhandled evaluation method");
}

double asymptote_high_snr(const ChannelModel& model) {
  if (!model.degraded()) return 0.0;
  return 2.0 * std::log2(model.sigma_h() / model.sigma_g());
}

double asymptote_large_nt(const ChannelModel& model, double total_power) {
  if (!model.degraded() || total_power <= 0.0) return 0.0;
  const double sh2 = model.sigma_h() * model.sigma_h();
  const double sg2 = model.sigma_g() * model.sigma_g();
  return (std::log1p(total_power * sh2) - std::log1p(total_power * sg2)) / std::numbers::ln2;
}

}  // namespace misose
