// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <boost/math/special_functions/expint.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "misose/allocation.hpp"
#include "misose/experiments.hpp"
#include "misose/ordering.hpp"
#include "misose/rate.hpp"

using namespace misose;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

Outcome high_snr() {
  const ChannelModel m(2, 1.0, 0.5);
  const auto c = secrecy_capacity(m, snr_db_to_linear(60.0), EvalMethod::coupled(10'000'000, 1));
  return {std::abs(c.mean - 2.0) <= 0.05,
          "capacity=" + fmt(c.mean) + " +/- " + fmt(c.std_error, 2) + ", target 2 +/- 0.05"};
}

Outcome large_nt() {
  const ChannelModel m(128, 1.0, 0.5);
  const double limit = std::log2(11.0 / 3.5);
  const auto mc = secrecy_capacity(m, 10.0, EvalMethod::coupled(1'000'000, 1));
  const double quad = secrecy_capacity(m, 10.0, EvalMethod::quadrature(64)).mean;
  const bool ok = std::abs(mc.mean - limit) <= 0.1 && std::abs(quad - limit) <= 0.1 &&
                  std::abs(asymptote_large_nt(m, 10.0) - limit) <= 1e-12;
  return {ok, "coupled=" + fmt(mc.mean) + " quad=" + fmt(quad) + " limit=" + fmt(limit) +
                  ", tolerance 0.1"};
}

Outcome cross_method() {
  double worst = 0.0;
  std::string where;
  int points = 0;
  for (int n_t : {1, 2, 4, 8}) {
    for (double power : {0.1, 1.0, 10.0}) {
      for (double ratio : {0.1, 0.5, 0.9}) {
        const ChannelModel m(n_t, 1.0, ratio);
        const auto direct = secrecy_capacity(m, power, EvalMethod::direct(1'000'000, 7));
        const auto coupled = secrecy_capacity(m, power, EvalMethod::coupled(1'000'000, 7));
        const auto quad = secrecy_capacity(m, power, EvalMethod::quadrature(64));
        const double z[] = {
            std::abs(direct.mean - coupled.mean) / std::hypot(direct.std_error, coupled.std_error),
            std::abs(direct.mean - quad.mean) / direct.std_error,
            std::abs(coupled.mean - quad.mean) / coupled.std_error};
        for (double v : z) {
          if (v > worst) {
            worst = v;
            where = "n_t=" + std::to_string(n_t) + " P=" + fmt(power) + " ratio=" + fmt(ratio);
          }
        }
        ++points;
      }
    }
  }
  return {worst <= 3.0, std::to_string(points) + " points, worst |diff|/combined_se=" +
                            fmt(worst, 3) + " at " + where};
}

Outcome optimizer() {
  const ChannelModel m(4, 1.0, 0.5);
  double worst = 0.0;
  int converged = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    OptimizerConfig config;
    config.seed = seed;
    const auto trace = optimize_allocation(m, 4.0, config);
    converged += trace.converged ? 1 : 0;
    for (double v : trace.final_allocation().d()) worst = std::max(worst, std::abs(v - 1.0));
  }
  return {worst <= 0.04, "10 random starts, worst max|d_k - 1|=" + fmt(worst, 3) +
                             " (tolerance 0.04), converged " + std::to_string(converged) + "/10"};
}

Outcome lt_order() {
  ProbeSizes sizes;
  sizes.pairs = 1000;
  sizes.s_points = 50;
  const auto report = probe_lt_order(sizes, 1);
  return {report.holds(1e-12), std::to_string(sizes.pairs) + " pairs x " +
                                   std::to_string(sizes.s_points) + " s-points, min gap=" +
                                   fmt(report.min_margin, 3) + " (bound -1e-12)"};
}

Outcome complete_monotone() {
  ProbeSizes sizes;
  const auto sign = probe_complete_monotone(sizes);
  const auto fd = probe_cm_finite_difference(sizes);
  const double worst_rel = 1e-4 - fd.min_margin;
  return {sign.holds(0.0) && sign.min_margin > 0.0 && fd.holds(0.0),
          "min (-1)^n psi^(n)=" + fmt(sign.min_margin, 3) + " on " + sign.grid +
              "; worst finite-difference rel err=" + fmt(worst_rel, 3) + " (bound 1e-4)"};
}

Outcome clamp() {
  int checked = 0;
  int nonzero = 0;
  for (int n_t : {1, 2, 4, 8}) {
    for (const auto& [sh, sg] : {std::pair{0.5, 1.0}, std::pair{1.0, 1.0}, std::pair{0.3, 0.9}}) {
      const ChannelModel m(n_t, sh, sg);
      for (double power : {0.0, 0.1, 1.0, 10.0, 100.0, 1e6}) {
        for (const auto& method : {EvalMethod::direct(10'000, 1), EvalMethod::coupled(10'000, 1),
                                   EvalMethod::quadrature(64)}) {
          ++checked;
          if (secrecy_capacity(m, power, method).mean != 0.0) ++nonzero;
        }
      }
    }
  }
  return {nonzero == 0, std::to_string(checked) + " evaluations, " + std::to_string(nonzero) +
                            " nonzero"};
}

Outcome single_antenna() {
  const double quad = ergodic_log_rate_quadrature(1.0, 1.0, 1, 64);
  const double exact = std::exp(1.0) * boost::math::expint(1, 1.0) / std::numbers::ln2;
  const auto mc = ergodic_log_rate_mc(1.0, PowerAllocation::single(1, 1.0), 10'000'000, 1);
  const bool ok = std::abs(quad - 0.860338) <= 1e-5 && std::abs(mc.mean - quad) <= 3.0 * mc.std_error;
  return {ok, "quad=" + fmt(quad, 10) + " (e E1(1)/ln2=" + fmt(exact, 10) + "), mc=" +
                  fmt(mc.mean, 7) + " +/- " + fmt(mc.std_error, 2)};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome csv_determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "misose_acceptance";
  std::filesystem::create_directories(dir);
  const auto a = dir / "run_a.csv";
  const auto b = dir / "run_b.csv";
#ifdef MISOSE_CLI_PATH
  auto run = [](const std::filesystem::path& out) {
    const std::string cmd = std::string("\"") + MISOSE_CLI_PATH +
                            "\" sweep-snr --ntx 2 --sigma-h 1 --sigma-g 0.5 --snr-grid 0:10:60 "
                            "--samples 1000000 --seed 42 --out \"" +
                            out.string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };
  const std::string how = "two CLI sweep-snr runs";
#else
  auto run = [](const std::filesystem::path& out) {
    SweepSpec spec;
    spec.grid = {0, 10, 20, 30, 40, 50, 60};
    spec.method = EvalMethod::coupled(1'000'000, 42);
    write_csv(out.string(), run_sweep_snr(spec));
    return true;
  };
  const std::string how = "two library sweeps";
#endif
  if (!run(a) || !run(b)) return {false, how + ": a run failed"};
  const auto x = slurp(a);
  const auto y = slurp(b);
  const bool ok = !x.empty() && x == y;
  return {ok, how + ", " + std::to_string(x.size()) + " bytes, " +
                  (x == y ? "identical" : "different")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"high-SNR asymptote", high_snr},
      {"large-n_t limit", large_nt},
      {"cross-method equivalence", cross_method},
      {"uniform-allocation optimality", optimizer},
      {"LT-order inequality", lt_order},
      {"complete monotonicity", complete_monotone},
      {"capacity clamp", clamp},
      {"single-antenna closed form", single_antenna},
      {"CSV determinism", csv_determinism},
  };

  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << index << "] " << c.name << ": "
              << outcome.detail << " (" << fmt(seconds, 3) << " s)" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
