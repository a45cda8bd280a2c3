#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "misose/channel.hpp"

namespace misose {

enum class Method { direct_mc, coupled_mc, quadrature };

std::string_view to_string(Method method);
/// Accepts "direct", "coupled", "quad" and the full enum names.
Method parse_method(std::string_view text);

/// How an expectation is evaluated. `count` is the sample count for the
/// Monte Carlo methods and the node count for quadrature.
struct EvalMethod {
  Method method = Method::coupled_mc;
  std::size_t count = 1'000'000;
  std::uint64_t seed = 1;

  static EvalMethod direct(std::size_t samples, std::uint64_t seed) {
    return {Method::direct_mc, samples, seed};
  }
  static EvalMethod coupled(std::size_t samples, std::uint64_t seed) {
    return {Method::coupled_mc, samples, seed};
  }
  static EvalMethod quadrature(std::size_t nodes) { return {Method::quadrature, nodes, 0}; }
};

/// E[log2(1 + sum_k d_k |g_k|^2)] with g_k ~ CN(0, sigma^2), by sample mean.
RateEstimate ergodic_log_rate_mc(double sigma, const PowerAllocation& alloc,
                                 std::size_t n_samples, std::uint64_t seed);

/// E_h[log2(1 + h^H D h)] - E_g[log2(1 + g^H D g)] from independent h and g
/// streams; the standard error combines both terms.
RateEstimate secrecy_rate_direct_mc(const ChannelModel& model, const PowerAllocation& alloc,
                                    std::size_t n_samples, std::uint64_t seed);

/// Same quantity through the coupled channel h = (sigma_h / sigma_g) g: one
/// g stream, per-sample integrand log2(a + q) - log2(a) - log2(1 + q) with
/// q = g^H D g and a = sigma_g^2 / sigma_h^2.
RateEstimate secrecy_rate_coupled_mc(const ChannelModel& model, const PowerAllocation& alloc,
                                     std::size_t n_samples, std::uint64_t seed);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
/// Gauss-Legendre nodes and weights on [-1, 1].
QuadratureRule gauss_legendre_rule(std::size_t n_nodes);

/// Regularized upper incomplete gamma Q(shape, z) = P(T > z), T ~ Gamma(shape, 1).
double gamma_survival(int shape, double z);

/// E[log2(1 + (P / n_t) X)] with X ~ Gamma(shape n_t, scale sigma^2), i.e.
/// X = ||g||^2 for g ~ CN(0, sigma^2 I_{n_t}) under uniform allocation.
/// Deterministic: a fixed Gauss-Legendre rule over the Gamma survival
/// function in the variable y = ln(1 + (P / n_t) X).
double ergodic_log_rate_quadrature(double sigma, double total_power, int n_t,
                                   std::size_t n_nodes);

/// Ergodic secrecy capacity under uniform allocation; exactly 0 when
/// sigma_h <= sigma_g.
RateEstimate secrecy_capacity(const ChannelModel& model, double total_power,
                              const EvalMethod& method);

/// High-SNR limit 2 log2(sigma_h / sigma_g); 0 when sigma_h <= sigma_g.
double asymptote_high_snr(const ChannelModel& model);

/// Large-n_t limit log2(1 + P sigma_h^2) - log2(1 + P sigma_g^2), floored at 0.
double asymptote_large_nt(const ChannelModel& model, double total_power);

}  // namespace misose
