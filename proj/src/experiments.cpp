#include "misose/experiments.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "misose/sampling.hpp"

namespace misose {

std::string_view to_string(SweepKind kind) {
  return kind == SweepKind::snr ? "snr" : "antennas";
}

void SweepSpec::validate() const {
  if (grid.empty()) throw std::invalid_argument("sweep grid must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw std::invalid_argument("sweep grid values must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("sweep grid must be strictly increasing");
  }
  if (kind == SweepKind::antennas) {
    for (double v : grid) {
      if (v < 1.0 || v != std::floor(v))
        throw std::invalid_argument("antenna sweep values must be positive integers");
    }
    if (total_power < 0.0 || !std::isfinite(total_power))
      throw std::invalid_argument("total power must be nonnegative and finite");
  }
  if (method.count == 0) throw std::invalid_argument("sample/node count must be >= 1");
  if (method.method == Method::quadrature && method.count < 8)
    throw std::invalid_argument("quadrature needs at least 8 nodes");
}

double snr_db_to_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

namespace {

std::vector<SweepRow> run_points(const SweepSpec& spec) {
  std::vector<SweepRow> rows(spec.grid.size());
  sampling::parallel_for(spec.grid.size(), [&](std::size_t i) {
    const double value = spec.grid[i];
    const bool snr = spec.kind == SweepKind::snr;
    const ChannelModel model =
        snr ? spec.model : spec.model.with_antennas(static_cast<int>(value));
    const double power = snr ? snr_db_to_linear(value) : spec.total_power;
    const auto estimate = secrecy_capacity(model, power, spec.method);

    SweepRow& row = rows[i];
    row.kind = spec.kind;
    row.sweep_value = value;
    row.n_t = model.n_t();
    row.sigma_h = model.sigma_h();
    row.sigma_g = model.sigma_g();
    row.total_power = power;
    row.method = spec.method.method;
    row.capacity_bits = estimate.mean;
    row.std_error_bits = estimate.std_error;
    row.asymptote_bits = snr ? asymptote_high_snr(model) : asymptote_large_nt(model, power);
    row.seed = spec.method.seed;
  });
  return rows;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), result.ptr};
}

}  // namespace

std::vector<SweepRow> run_sweep_snr(const SweepSpec& spec) {
  if (spec.kind != SweepKind::snr) throw std::invalid_argument("run_sweep_snr needs an snr sweep");
  spec.validate();
  return run_points(spec);
}

std::vector<SweepRow> run_sweep_antennas(const SweepSpec& spec) {
  if (spec.kind != SweepKind::antennas)
    throw std::invalid_argument("run_sweep_antennas needs an antennas sweep");
  spec.validate();
  return run_points(spec);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  return spec.kind == SweepKind::snr ? run_sweep_snr(spec) : run_sweep_antennas(spec);
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.kind) << ',' << format_number(r.sweep_value) << ',' << r.n_t << ','
        << format_number(r.sigma_h) << ',' << format_number(r.sigma_g) << ','
        << format_number(r.total_power) << ',' << to_string(r.method) << ','
        << format_number(r.capacity_bits) << ',' << format_number(r.std_error_bits) << ','
        << format_number(r.asymptote_bits) << ',' << r.seed << '\n';
  }
}

void write_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(file, rows);
  file.flush();
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

bool VerifySummary::passed() const {
  if (!optimizer_ok) return false;
  return std::all_of(reports.begin(), reports.end(),
                     [](const auto& entry) { return entry.second.holds(1e-12); });
}

VerifySummary run_verify_suite(const VerifyOptions& options) {
  VerifySummary summary;

  if (options.injected_pair) {
    const auto& pair = *options.injected_pair;
    // Throws std::invalid_argument on unequal sums or lengths.
    const double slack = majorization_slack(pair.d, pair.d_star);
    OrderCheckReport injected;
    injected.relation = Relation::lt_order;
    injected.grid = "injected pair, log s-grid";
    Witness w;
    w.point = "injected pair majorization slack";
    w.value = slack;
    w.margin = slack;
    injected.add(w);
    for (double s : log_grid(options.sizes.s_min, options.sizes.s_max, options.sizes.s_points)) {
      std::ostringstream point;
      point << "injected pair s=" << s;
      Witness gap;
      gap.point = point.str();
      gap.value = lt_order_gap(pair.d_star, pair.d, 1.0, s);
      gap.margin = gap.value;
      gap.alt_value = lt_order_gap_factor(pair.d_star, pair.d, 2.0, s);
      injected.add(std::move(gap));
    }
    summary.reports.emplace_back("injected_pair", std::move(injected));
  }

  const auto& sizes = options.sizes;
  summary.reports.emplace_back("majorization", probe_majorization(sizes, options.seed));
  summary.reports.emplace_back("lt_order_gap", probe_lt_order(sizes, options.seed));
  summary.reports.emplace_back("schur_concave", probe_schur_concave(sizes, options.seed));
  summary.reports.emplace_back("cm_sign", probe_complete_monotone(sizes));
  summary.reports.emplace_back("cm_finite_difference", probe_cm_finite_difference(sizes));

  ProbeSizes mgf_sizes = sizes;
  mgf_sizes.mc_samples = options.mc_samples;
  summary.reports.emplace_back("mgf_convention", probe_mgf_convention(mgf_sizes, options.seed));

  // The uniform point is majorized by (P, 0); the Laplace order then implies
  // E[f(B_uniform)] >= E[f(B_single)] for f(x) = log(a + x) - log(1 + x).
  OrderCheckReport lemma;
  lemma.relation = Relation::lt_order;
  lemma.grid = "paired Monte Carlo, 3 std_error";
  for (double a : {0.25, 0.0}) {
    const std::vector<double> single{10.0, 0.0};
    const std::vector<double> uniform{5.0, 5.0};
    const auto r = verify_lemma_lt_implies_expectation(single, uniform, 1.0, a,
                                                       options.mc_samples, options.seed);
    for (const auto& w : r.witnesses) {
      Witness copy = w;
      copy.point = "a=" + format_number(a) + " " + copy.point;
      lemma.add(std::move(copy));
    }
  }
  summary.reports.emplace_back("lemma_expectation", std::move(lemma));

  const ChannelModel model(4, 1.0, 0.5);
  const double power = 4.0;
  OptimizerConfig config = options.optimizer;
  config.seed = sampling::mix(options.seed, 0x0b7u);
  const auto trace = optimize_allocation(model, power, config);
  const auto& final_alloc = trace.final_allocation();
  summary.optimizer_final.assign(final_alloc.d().begin(), final_alloc.d().end());
  double deviation = 0.0;
  for (double v : summary.optimizer_final)
    deviation = std::max(deviation, std::abs(v - power / model.n_t()));
  summary.optimizer_deviation = deviation;
  summary.optimizer_tolerance = 0.01 * power;
  summary.optimizer_ok = deviation <= summary.optimizer_tolerance;
  return summary;
}

void print_summary(std::ostream& out, const VerifySummary& summary) {
  for (const auto& [name, report] : summary.reports) {
    out << (report.holds(1e-12) ? "PASS " : "FAIL ") << name << " [" << to_string(report.relation)
        << "] min_margin=" << report.min_margin << " (" << report.grid << ")\n";
    if (const Witness* w = report.worst()) {
      out << "     worst: " << w->point << " value=" << w->value;
      if (w->alt_value) out << " alt(1+2sd)=" << *w->alt_value;
      out << '\n';
    }
  }
  out << (summary.optimizer_ok ? "PASS " : "FAIL ") << "optimizer_to_uniform max|d-P/n|="
      << summary.optimizer_deviation << " tol=" << summary.optimizer_tolerance << " final=(";
  for (std::size_t i = 0; i < summary.optimizer_final.size(); ++i)
    out << (i ? "," : "") << summary.optimizer_final[i];
  out << ")\n";
}

}  // namespace misose
