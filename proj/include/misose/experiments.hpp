#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "misose/allocation.hpp"
#include "misose/channel.hpp"
#include "misose/ordering.hpp"
#include "misose/rate.hpp"

namespace misose {

enum class SweepKind { snr, antennas };
std::string_view to_string(SweepKind kind);

/// A capacity sweep. For snr sweeps `grid` holds SNR values in dB (P = 10^(dB/10))
/// and `model.n_t()` is fixed; for antennas sweeps `grid` holds n_t values and
/// `total_power` is fixed.
struct SweepSpec {
  SweepKind kind = SweepKind::snr;
  ChannelModel model{2, 1.0, 0.5};
  double total_power = 10.0;
  std::vector<double> grid;
  EvalMethod method;

  void validate() const;
};

/// One CSV record. Each row reproduces as
/// secrecy_capacity(ChannelModel(n_t, sigma_h, sigma_g), P, {method, count, seed}).
struct SweepRow {
  SweepKind kind = SweepKind::snr;
  double sweep_value = 0.0;
  int n_t = 1;
  double sigma_h = 1.0;
  double sigma_g = 1.0;
  double total_power = 0.0;
  Method method = Method::coupled_mc;
  double capacity_bits = 0.0;
  double std_error_bits = 0.0;
  double asymptote_bits = 0.0;
  std::uint64_t seed = 0;
};

double snr_db_to_linear(double snr_db);

std::vector<SweepRow> run_sweep_snr(const SweepSpec& spec);
std::vector<SweepRow> run_sweep_antennas(const SweepSpec& spec);
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "sweep_kind,sweep_value,n_t,sigma_h,sigma_g,P,method,capacity_bits,std_error_bits,"
    "asymptote_bits,seed";

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// Throws std::runtime_error naming the path on I/O failure.
void write_csv(const std::string& path, const std::vector<SweepRow>& rows);

struct VerifyOptions {
  ProbeSizes sizes;
  std::uint64_t seed = 1;
  /// Lemma and MGF checks.
  std::size_t mc_samples = 200'000;
  OptimizerConfig optimizer;
  /// Extra (d, d_star) pair checked for d_star majorized by d; unequal sums are
  /// rejected with std::invalid_argument.
  std::optional<MajorizationPair> injected_pair;
};

struct VerifySummary {
  std::vector<std::pair<std::string, OrderCheckReport>> reports;
  std::vector<double> optimizer_final;
  double optimizer_deviation = 0.0;
  double optimizer_tolerance = 0.0;
  bool optimizer_ok = false;

  bool passed() const;
  /// 0 if every margin >= -1e-12 and the optimizer met its tolerance, else 1.
  int exit_code() const { return passed() ? 0 : 1; }
};

/// Runs the majorization / LT-order / complete-monotonicity / Schur probes,
/// the Laplace-order expectation check and an optimizer-to-uniform run.
VerifySummary run_verify_suite(const VerifyOptions& options);

void print_summary(std::ostream& out, const VerifySummary& summary);

}  // namespace misose
