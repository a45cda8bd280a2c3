#pragma once

// Numerical probes of the stochastic-ordering argument behind uniform power
// allocation: majorization, Laplace-transform order of g^H D g, complete
// monotonicity of psi(x) = d/dx [ln(a + x) - ln(1 + x)], and Schur-concavity
// of sum_k log(1 + s d_k).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace misose {

enum class Relation { majorization, lt_order, complete_monotone, schur_concave };
std::string_view to_string(Relation relation);

struct Witness {
  std::string point;
  double value = 0.0;
  /// >= 0 means the probed claim holds at this point.
  double margin = 0.0;
  /// Same probe under the alternative MGF convention (linear factor 1 + 2 s d).
  std::optional<double> alt_value;
};

struct OrderCheckReport {
  Relation relation = Relation::majorization;
  std::string grid;
  double min_margin = 0.0;
  std::vector<Witness> witnesses;

  void add(Witness w);
  const Witness* worst() const;
  bool holds(double slack = 1e-12) const { return min_margin >= -slack; }
};

/// Minimum over proper prefixes j < n of (sum of the j largest x) - (sum of the
/// j largest y); 0 for length-one vectors.
/// Requires equal lengths and sums equal to 1e-9 relative.
double majorization_slack(std::span<const double> x, std::span<const double> y);

/// True iff x majorizes y (y is majorized by x).
bool majorizes(std::span<const double> x, std::span<const double> y);

/// E[exp(-s g^H D g)] = prod_k 1 / (1 + s d_k sigma^2) for g ~ CN(0, sigma^2 I).
double mgf_quadratic_form(std::span<const double> d, double sigma, double s);
/// prod_k 1 / (1 + factor s d_k). factor = sigma^2 reproduces mgf_quadratic_form.
double mgf_linear_factor(std::span<const double> d, double factor, double s);

/// log2(mgf(d) / mgf(d_star)) = sum log2(1 + s d*_k sigma^2) - sum log2(1 + s d_k sigma^2).
/// Nonnegative whenever d_star is majorized by d.
double lt_order_gap(std::span<const double> d_star, std::span<const double> d, double sigma,
                    double s);
double lt_order_gap_factor(std::span<const double> d_star, std::span<const double> d,
                           double factor, double s);

/// sum_k log2(1 + s d_k).
double schur_log_sum(std::span<const double> d, double s);

inline constexpr int kMaxDerivativeOrder = 20;

/// n-th derivative of psi(x) = 1/(a + x) - 1/(1 + x), closed form.
double cm_derivative(double a, double x, int n);

/// f(x) = log2(a + x) - log2(1 + x), the coupled secrecy integrand up to a constant.
double secrecy_integrand(double a, double x);

/// E[f(B2)] - E[f(B1)] >= 0 with B_i = g^H D_i g, g ~ CN(0, sigma^2 I), given
/// d2 is majorized by d1. Paired estimator over common draws; the witness
/// margin is diff + 3 * std_error. Throws std::invalid_argument when d2 is not
/// majorized by d1.
OrderCheckReport verify_lemma_lt_implies_expectation(std::span<const double> d1,
                                                     std::span<const double> d2, double sigma,
                                                     double a, std::size_t n_samples,
                                                     std::uint64_t seed);

struct MajorizationPair {
  std::vector<double> d;
  std::vector<double> d_star;  // majorized by d, same sum
};

/// d uniform on the simplex of the given total, d_star = w d + (1 - w) uniform
/// with w ~ U(0, 1).
MajorizationPair random_majorization_pair(int n_t, double total, std::uint64_t seed,
                                          std::uint64_t index);

std::vector<double> log_grid(double lo, double hi, int points);

struct ProbeSizes {
  int pairs = 1000;
  int s_points = 50;
  double s_min = 1e-3;
  double s_max = 1e3;
  int x_points = 61;
  double x_min = 1e-3;
  double x_max = 1e3;
  int max_order = 10;
  std::size_t mc_samples = 200'000;
  int min_antennas = 2;
  int max_antennas = 8;
};

/// Prefix-sum slack of random pairs (d majorizes d_star) and of
/// every random d against the uniform point.
OrderCheckReport probe_majorization(const ProbeSizes& sizes, std::uint64_t seed);
/// lt_order_gap over random pairs on a log s-grid in [s_min, s_max].
OrderCheckReport probe_lt_order(const ProbeSizes& sizes, std::uint64_t seed);
/// (-1)^n psi^(n)(x) > 0 on a in {0, 0.1, 0.5, 0.9}, log x-grid, n <= max_order.
OrderCheckReport probe_complete_monotone(const ProbeSizes& sizes);
/// Relative mismatch between psi^(n+1) and a central difference of psi^(n);
/// margin is 1e-4 - relative error on interior grid points.
OrderCheckReport probe_cm_finite_difference(const ProbeSizes& sizes);
/// schur_log_sum(d_star) - schur_log_sum(d) over random pairs and the s-grid.
OrderCheckReport probe_schur_concave(const ProbeSizes& sizes, std::uint64_t seed);
/// mgf_quadratic_form against a Monte Carlo average of exp(-s q); margin is
/// 3 std_error - |mc - closed form|. The factor-2 convention is recorded as alt_value.
OrderCheckReport probe_mgf_convention(const ProbeSizes& sizes, std::uint64_t seed);

}  // namespace misose
