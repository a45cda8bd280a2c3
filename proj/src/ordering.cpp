#include "misose/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "misose/sampling.hpp"

namespace misose {

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::majorization:
      return "majorization";
    case Relation::lt_order:
      return "lt_order";
    case Relation::complete_monotone:
      return "complete_monotone";
    case Relation::schur_concave:
      return "schur_concave";
  }
  return "unknown";
}

void OrderCheckReport::add(Witness w) {
  if (witnesses.empty() || w.margin < min_margin) min_margin = w.margin;
  witnesses.push_back(std::move(w));
}

const Witness* OrderCheckReport::worst() const {
  if (witnesses.empty()) return nullptr;
  return &*std::min_element(witnesses.begin(), witnesses.end(),
                            [](const Witness& l, const Witness& r) { return l.margin < r.margin; });
}

namespace {

void require_equal_sums(std::span<const double> x, std::span<const double> y,
                        std::string_view what) {
  if (x.size() != y.size())
    throw std::invalid_argument(std::string(what) + ": vectors have different lengths");
  if (x.empty()) throw std::invalid_argument(std::string(what) + ": empty vectors");
  const double sx = std::accumulate(x.begin(), x.end(), 0.0);
  const double sy = std::accumulate(y.begin(), y.end(), 0.0);
  const double scale = std::max({std::abs(sx), std::abs(sy), 1e-300});
  if (std::abs(sx - sy) > 1e-9 * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": sums differ (" << sx << " vs " << sy << ")";
    throw std::invalid_argument(msg.str());
  }
}

void require_nonnegative(std::span<const double> d, std::string_view what) {
  for (double v : d)
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative entry");
}

void require_positive_s(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("s must be positive");
}

std::string describe(std::span<const double> v) {
  std::ostringstream out;
  out.precision(6);
  out << "(";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << ")";
  return out.str();
}

std::vector<double> sorted_desc(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

double majorization_slack(std::span<const double> x, std::span<const double> y) {
  require_equal_sums(x, y, "majorization");
  const auto xs = sorted_desc(x);
  const auto ys = sorted_desc(y);
  double px = 0.0;
  double py = 0.0;
  double slack = std::numeric_limits<double>::infinity();
  // The full sums agree by precondition; only proper prefixes carry information.
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    px += xs[j];
    py += ys[j];
    slack = std::min(slack, px - py);
  }
  return xs.size() == 1 ? 0.0 : slack;
}

bool majorizes(std::span<const double> x, std::span<const double> y) {
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  return majorization_slack(x, y) >= -1e-12 * std::max(1.0, std::abs(total));
}

double mgf_linear_factor(std::span<const double> d, double factor, double s) {
  require_nonnegative(d, "mgf");
  require_positive_s(s);
  double log_value = 0.0;
  for (double v : d) log_value -= std::log1p(factor * s * v);
  return std::exp(log_value);
}

double mgf_quadratic_form(std::span<const double> d, double sigma, double s) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  return mgf_linear_factor(d, sigma * sigma, s);
}

double lt_order_gap_factor(std::span<const double> d_star, std::span<const double> d,
                           double factor, double s) {
  require_equal_sums(d_star, d, "lt_order_gap");
  require_nonnegative(d_star, "lt_order_gap");
  require_nonnegative(d, "lt_order_gap");
  require_positive_s(s);
  double gap = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k)
    gap += std::log1p(factor * s * d_star[k]) - std::log1p(factor * s * d[k]);
  return gap / std::numbers::ln2;
}

double lt_order_gap(std::span<const double> d_star, std::span<const double> d, double sigma,
                    double s) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  return lt_order_gap_factor(d_star, d, sigma * sigma, s);
}

double schur_log_sum(std::span<const double> d, double s) {
  require_nonnegative(d, "schur_log_sum");
  require_positive_s(s);
  double sum = 0.0;
  for (double v : d) sum += std::log1p(s * v);
  return sum / std::numbers::ln2;
}

double cm_derivative(double a, double x, int n) {
  if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("cm_derivative: a must lie in [0, 1)");
  if (!(x > 0.0)) throw std::invalid_argument("cm_derivative: x must be positive");
  if (n < 0 || n > kMaxDerivativeOrder)
    throw std::invalid_argument("cm_derivative: order must lie in [0, 20]");
  double factorial = 1.0;
  for (int k = 2; k <= n; ++k) factorial *= k;
  const double power = n + 1.0;
  // n! (a+x)^{-(n+1)} (1 - ((a+x)/(1+x))^{n+1}), with the bracket via expm1.
  const double lead = factorial * std::exp(-power * std::log(a + x));
  const double bracket = -std::expm1(power * std::log1p((a - 1.0) / (1.0 + x)));
  const double magnitude = lead * bracket;
  return (n % 2 == 0) ? magnitude : -magnitude;
}

double secrecy_integrand(double a, double x) { return std::log2(a + x) - std::log2(1.0 + x); }

OrderCheckReport verify_lemma_lt_implies_expectation(std::span<const double> d1,
                                                     std::span<const double> d2, double sigma,
                                                     double a, std::size_t n_samples,
                                                     std::uint64_t seed) {
  if (!majorizes(d1, d2))
    throw std::invalid_argument("lemma check requires d2 to be majorized by d1");
  require_nonnegative(d1, "lemma check");
  require_nonnegative(d2, "lemma check");
  if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("lemma check: a must lie in [0, 1)");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (n_samples < 2) throw std::invalid_argument("lemma check needs at least two samples");

  const auto n_t = static_cast<int>(d1.size());
  const auto key = sampling::stream_key(seed, sampling::StreamTag::probe);
  const auto diff = sampling::chunked_moments(
      n_samples, [&](std::size_t chunk, std::size_t rows, sampling::RunningMoments& acc) {
        std::vector<double> power(rows * d1.size());
        sampling::fill_power_chunk(key, chunk, rows, n_t, sigma, power);
        for (std::size_t i = 0; i < rows; ++i) {
          double q1 = 0.0;
          double q2 = 0.0;
          for (std::size_t k = 0; k < d1.size(); ++k) {
            q1 += d1[k] * power[i * d1.size() + k];
            q2 += d2[k] * power[i * d1.size() + k];
          }
          acc.add(q1 == q2 ? 0.0 : secrecy_integrand(a, q2) - secrecy_integrand(a, q1));
        }
      });

  OrderCheckReport report;
  report.relation = Relation::lt_order;
  std::ostringstream grid;
  grid << "E[f(B2)] - E[f(B1)], a=" << a << ", sigma=" << sigma << ", n=" << n_samples;
  report.grid = grid.str();
  Witness w;
  std::ostringstream point;
  point << "d1=" << describe(d1) << " d2=" << describe(d2) << " std_error=" << diff.std_error();
  w.point = point.str();
  w.value = diff.mean();
  w.margin = diff.mean() + 3.0 * diff.std_error();
  report.add(std::move(w));
  return report;
}

MajorizationPair random_majorization_pair(int n_t, double total, std::uint64_t seed,
                                          std::uint64_t index) {
  if (n_t < 1) throw std::invalid_argument("n_t must be >= 1");
  std::mt19937_64 engine(sampling::mix(sampling::stream_key(seed, sampling::StreamTag::probe),
                                       index));
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MajorizationPair pair;
  pair.d.resize(static_cast<std::size_t>(n_t));
  double sum = 0.0;
  for (double& v : pair.d) {
    v = expo(engine);
    sum += v;
  }
  for (double& v : pair.d) v *= total / sum;
  const double w = unit(engine);
  const double level = total / n_t;
  pair.d_star.resize(pair.d.size());
  for (std::size_t k = 0; k < pair.d.size(); ++k)
    pair.d_star[k] = w * pair.d[k] + (1.0 - w) * level;
  return pair;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw std::invalid_argument("log_grid needs 0 < lo < hi and at least two points");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

namespace {

struct PairSource {
  const ProbeSizes& sizes;
  std::uint64_t seed;

  MajorizationPair operator()(int i) const {
    std::mt19937_64 engine(sampling::mix(seed, 0x5eed0000ULL + static_cast<std::uint64_t>(i)));
    std::uniform_int_distribution<int> antennas(sizes.min_antennas, sizes.max_antennas);
    std::uniform_real_distribution<double> log_total(std::log(0.1), std::log(10.0));
    const int n_t = antennas(engine);
    const double total = std::exp(log_total(engine));
    return random_majorization_pair(n_t, total, seed, static_cast<std::uint64_t>(i));
  }
};

std::string s_grid_label(const ProbeSizes& sizes) {
  std::ostringstream out;
  out << sizes.pairs << " random pairs, " << sizes.s_points << "-point log s-grid in ["
      << sizes.s_min << ", " << sizes.s_max << "]";
  return out.str();
}

}  // namespace

OrderCheckReport probe_majorization(const ProbeSizes& sizes, std::uint64_t seed) {
  OrderCheckReport report;
  report.relation = Relation::majorization;
  report.grid = std::to_string(sizes.pairs) + " random pairs plus uniform point";
  const PairSource source{sizes, seed};
  for (int i = 0; i < sizes.pairs; ++i) {
    const auto pair = source(i);
    const double total = std::accumulate(pair.d.begin(), pair.d.end(), 0.0);
    const std::vector<double> uniform(pair.d.size(), total / static_cast<double>(pair.d.size()));
    const double pair_slack = majorization_slack(pair.d, pair.d_star);
    const double uniform_slack = majorization_slack(pair.d, uniform);
    const bool pair_worse = pair_slack <= uniform_slack;
    Witness w;
    w.point = pair_worse ? "d=" + describe(pair.d) + " d_star=" + describe(pair.d_star)
                         : "d=" + describe(pair.d) + " uniform";
    w.value = pair_worse ? pair_slack : uniform_slack;
    w.margin = w.value;
    report.add(std::move(w));
  }
  return report;
}

OrderCheckReport probe_lt_order(const ProbeSizes& sizes, std::uint64_t seed) {
  OrderCheckReport report;
  report.relation = Relation::lt_order;
  report.grid = s_grid_label(sizes);
  const auto s_grid = log_grid(sizes.s_min, sizes.s_max, sizes.s_points);
  const PairSource source{sizes, seed};
  for (int i = 0; i < sizes.pairs; ++i) {
    const auto pair = source(i);
    Witness worst;
    worst.margin = std::numeric_limits<double>::infinity();
    for (double s : s_grid) {
      const double gap = lt_order_gap(pair.d_star, pair.d, 1.0, s);
      if (gap < worst.margin) {
        std::ostringstream point;
        point << "d=" << describe(pair.d) << " d_star=" << describe(pair.d_star) << " s=" << s;
        worst.point = point.str();
        worst.value = gap;
        worst.margin = gap;
        worst.alt_value = lt_order_gap_factor(pair.d_star, pair.d, 2.0, s);
      }
    }
    report.add(std::move(worst));
  }
  return report;
}

OrderCheckReport probe_complete_monotone(const ProbeSizes& sizes) {
  OrderCheckReport report;
  report.relation = Relation::complete_monotone;
  const auto x_grid = log_grid(sizes.x_min, sizes.x_max, sizes.x_points);
  std::ostringstream grid;
  grid << "a in {0, 0.1, 0.5, 0.9}, " << sizes.x_points << "-point log x-grid in ["
       << sizes.x_min << ", " << sizes.x_max << "], n in 0.." << sizes.max_order;
  report.grid = grid.str();
  for (double a : {0.0, 0.1, 0.5, 0.9}) {
    for (int n = 0; n <= sizes.max_order; ++n) {
      Witness worst;
      worst.margin = std::numeric_limits<double>::infinity();
      for (double x : x_grid) {
        const double signed_value = (n % 2 == 0 ? 1.0 : -1.0) * cm_derivative(a, x, n);
        if (signed_value < worst.margin) {
          std::ostringstream point;
          point << "a=" << a << " n=" << n << " x=" << x;
          worst.point = point.str();
          worst.value = cm_derivative(a, x, n);
          worst.margin = signed_value;
        }
      }
      report.add(std::move(worst));
    }
  }
  return report;
}

OrderCheckReport probe_cm_finite_difference(const ProbeSizes& sizes) {
  constexpr double kRelTol = 1e-4;
  constexpr double kRelStep = 1e-4;
  OrderCheckReport report;
  report.relation = Relation::complete_monotone;
  const auto x_grid = log_grid(sizes.x_min, sizes.x_max, sizes.x_points);
  report.grid = "central differences of psi^(n) vs psi^(n+1), interior x points, rel tol 1e-4";
  const int top = std::min(sizes.max_order, kMaxDerivativeOrder - 1);
  for (double a : {0.0, 0.1, 0.5, 0.9}) {
    for (int n = 0; n <= top; ++n) {
      Witness worst;
      worst.margin = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i + 1 < x_grid.size(); ++i) {
        const double x = x_grid[i];
        const double h = kRelStep * x;
        const double fd = (cm_derivative(a, x + h, n) - cm_derivative(a, x - h, n)) / (2.0 * h);
        const double exact = cm_derivative(a, x, n + 1);
        const double rel = std::abs(fd - exact) / std::abs(exact);
        if (kRelTol - rel < worst.margin) {
          std::ostringstream point;
          point << "a=" << a << " n=" << n << " x=" << x;
          worst.point = point.str();
          worst.value = rel;
          worst.margin = kRelTol - rel;
        }
      }
      report.add(std::move(worst));
    }
  }
  return report;
}

OrderCheckReport probe_schur_concave(const ProbeSizes& sizes, std::uint64_t seed) {
  OrderCheckReport report;
  report.relation = Relation::schur_concave;
  report.grid = s_grid_label(sizes);
  const auto s_grid = log_grid(sizes.s_min, sizes.s_max, sizes.s_points);
  const PairSource source{sizes, seed ^ 0x5c4u};
  for (int i = 0; i < sizes.pairs; ++i) {
    const auto pair = source(i);
    Witness worst;
    worst.margin = std::numeric_limits<double>::infinity();
    for (double s : s_grid) {
      const double diff = schur_log_sum(pair.d_star, s) - schur_log_sum(pair.d, s);
      if (diff < worst.margin) {
        std::ostringstream point;
        point << "d=" << describe(pair.d) << " d_star=" << describe(pair.d_star) << " s=" << s;
        worst.point = point.str();
        worst.value = diff;
        worst.margin = diff;
      }
    }
    report.add(std::move(worst));
  }
  return report;
}

OrderCheckReport probe_mgf_convention(const ProbeSizes& sizes, std::uint64_t seed) {
  OrderCheckReport report;
  report.relation = Relation::lt_order;
  report.grid = "closed-form MGF vs Monte Carlo E[exp(-s q)], " +
                std::to_string(sizes.mc_samples) + " draws, 3 std_error";
  struct Case {
    std::vector<double> d;
    double sigma;
    double s;
  };
  const std::vector<Case> cases{{{1.0, 2.0}, 1.0, 0.3}, {{0.5, 0.25, 1.25}, 0.5, 2.0}};
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& cs = cases[c];
    const auto n_t = static_cast<int>(cs.d.size());
    const auto key = sampling::mix(sampling::stream_key(seed, sampling::StreamTag::probe), c);
    const auto mc = sampling::chunked_moments(
        sizes.mc_samples, [&](std::size_t chunk, std::size_t rows, sampling::RunningMoments& acc) {
          std::vector<double> power(rows * cs.d.size());
          sampling::fill_power_chunk(key, chunk, rows, n_t, cs.sigma, power);
          for (std::size_t i = 0; i < rows; ++i) {
            double q = 0.0;
            for (std::size_t k = 0; k < cs.d.size(); ++k) q += cs.d[k] * power[i * cs.d.size() + k];
            acc.add(std::exp(-cs.s * q));
          }
        });
    const double exact = mgf_quadratic_form(cs.d, cs.sigma, cs.s);
    Witness w;
    std::ostringstream point;
    point << "d=" << describe(cs.d) << " sigma=" << cs.sigma << " s=" << cs.s
          << " mc=" << mc.mean() << "+/-" << mc.std_error();
    w.point = point.str();
    w.value = exact;
    w.margin = 3.0 * mc.std_error() - std::abs(mc.mean() - exact);
    w.alt_value = mgf_linear_factor(cs.d, 2.0, cs.s);
    report.add(std::move(w));
  }
  return report;
}

}  // namespace misose
