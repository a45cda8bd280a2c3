// misose: ergodic secrecy capacity of MISOSE Rayleigh wiretap channels.
//
//   misose capacity  --ntx 2 --sigma-h 1 --sigma-g 0.5 --snr-db 30
//   misose optimize  --ntx 4 --snr-db 6.0206 --seed 3
//   misose verify    --seed 7
//   misose sweep-snr --snr-grid 0:10:60 --out fig1.csv
//   misose sweep-nt  --nt-grid 1,2,4,8,16,32,64,128 --snr-db 10 --out fig2.csv
//
// Every flag may also be given as `flag = value` in a file passed with
// --config; flags on the command line win. Exit codes: 0 success, 1 runtime or
// numeric failure, 2 invalid arguments or violated preconditions.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "misose/allocation.hpp"
#include "misose/config.hpp"
#include "misose/experiments.hpp"
#include "misose/ordering.hpp"
#include "misose/rate.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Options {
  int ntx = 2;
  double sigma_h = 1.0;
  double sigma_g = 0.5;
  double snr_db = 10.0;
  std::string snr_grid = "0:10:60";
  std::string nt_grid = "1,2,4,8,16,32,64,128";
  std::size_t samples = 1'000'000;
  std::size_t nodes = 64;
  std::string method = "coupled";
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
  // optimize
  int iters = misose::OptimizerConfig{}.max_iters;
  std::size_t grad_samples = misose::OptimizerConfig{}.grad_samples;
  std::string start;
  // verify
  int pairs = 1000;
  int s_points = 50;
  std::string check_d;
  std::string check_dstar;
};

misose::EvalMethod eval_method(const Options& o) {
  const auto m = misose::parse_method(o.method);
  if (m == misose::Method::quadrature) return misose::EvalMethod::quadrature(o.nodes);
  return {m, o.samples, o.seed};
}

misose::ChannelModel model_of(const Options& o) { return {o.ntx, o.sigma_h, o.sigma_g}; }

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--ntx", o.ntx, "Transmit antennas")->capture_default_str();
  cmd->add_option("--sigma-h", o.sigma_h, "Legitimate channel scale")->capture_default_str();
  cmd->add_option("--sigma-g", o.sigma_g, "Eavesdropper channel scale")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void add_eval_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--samples", o.samples, "Monte Carlo samples per expectation")
      ->capture_default_str();
  cmd->add_option("--nodes", o.nodes, "Quadrature nodes")->capture_default_str();
  cmd->add_option("--method", o.method, "direct | coupled | quad")
      ->check(CLI::IsMember({"direct", "coupled", "quad"}))
      ->capture_default_str();
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  return file;
}

int cmd_capacity(const Options& o) {
  const auto model = model_of(o);
  const double power = misose::snr_db_to_linear(o.snr_db);
  const auto method = eval_method(o);
  const auto est = misose::secrecy_capacity(model, power, method);
  std::cout.precision(10);
  std::cout << "n_t=" << model.n_t() << " sigma_h=" << model.sigma_h()
            << " sigma_g=" << model.sigma_g() << " snr_db=" << o.snr_db << " P=" << power << '\n'
            << "method=" << misose::to_string(method.method) << " count=" << method.count
            << " seed=" << method.seed << '\n'
            << "capacity_bits=" << est.mean << " std_error_bits=" << est.std_error << '\n'
            << "asymptote_high_snr_bits=" << misose::asymptote_high_snr(model) << '\n'
            << "asymptote_large_nt_bits=" << misose::asymptote_large_nt(model, power) << '\n';
  return 0;
}

int cmd_optimize(const Options& o) {
  const auto model = model_of(o);
  const double power = misose::snr_db_to_linear(o.snr_db);
  misose::OptimizerConfig config;
  config.max_iters = o.iters;
  config.grad_samples = o.grad_samples;
  config.seed = o.seed;
  std::optional<misose::PowerAllocation> start;
  if (!o.start.empty()) {
    const auto v = misose::parse_list(o.start);
    start.emplace(misose::project_to_simplex(v, power), power);
  }
  const auto trace = misose::optimize_allocation(model, power, config, start);

  std::ofstream file;
  if (!o.out.empty()) {
    std::ostream& out = open_output(o.out, file);
    out.precision(17);
    out << "iteration";
    for (int k = 0; k < model.n_t(); ++k) out << ",d" << (k + 1);
    out << ",objective_bits,std_error_bits\n";
    for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
      out << i;
      for (double v : trace.iterates[i].d()) out << ',' << v;
      out << ',' << trace.objective_values[i].mean << ',' << trace.objective_values[i].std_error
          << '\n';
    }
    if (!out) throw std::runtime_error("failed writing '" + o.out + "'");
  }

  const auto& final_alloc = trace.final_allocation();
  double deviation = 0.0;
  std::cout.precision(8);
  std::cout << "iterations=" << trace.iterates.size() - 1
            << " converged=" << (trace.converged ? "true" : "false") << "\nfinal=(";
  for (std::size_t k = 0; k < final_alloc.size(); ++k) {
    std::cout << (k ? "," : "") << final_alloc[k];
    deviation = std::max(deviation, std::abs(final_alloc[k] - power / model.n_t()));
  }
  std::cout << ")\nmax_deviation_from_uniform=" << deviation
            << "\nobjective_bits=" << trace.objective_values.back().mean << '\n';
  return trace.converged ? 0 : kExitRuntime;
}

int cmd_verify(const Options& o) {
  misose::VerifyOptions options;
  options.seed = o.seed;
  options.sizes.pairs = o.pairs;
  options.sizes.s_points = o.s_points;
  options.mc_samples = o.samples;
  if (!o.check_d.empty() || !o.check_dstar.empty()) {
    if (o.check_d.empty() || o.check_dstar.empty())
      throw std::invalid_argument("--check-d and --check-dstar must be given together");
    options.injected_pair = misose::MajorizationPair{misose::parse_list(o.check_d),
                                                     misose::parse_list(o.check_dstar)};
  }
  const auto summary = misose::run_verify_suite(options);
  misose::print_summary(std::cout, summary);
  return summary.exit_code();
}

int cmd_sweep(const Options& o, misose::SweepKind kind) {
  misose::SweepSpec spec;
  spec.kind = kind;
  spec.model = model_of(o);
  spec.method = eval_method(o);
  if (kind == misose::SweepKind::snr) {
    spec.grid = misose::parse_grid(o.snr_grid);
  } else {
    spec.grid = misose::parse_grid(o.nt_grid);
    spec.total_power = misose::snr_db_to_linear(o.snr_db);
  }
  const auto rows = misose::run_sweep(spec);
  if (o.out.empty() || o.out == "-") {
    misose::write_csv(std::cout, rows);
  } else {
    misose::write_csv(o.out, rows);
  }
  return 0;
}

// Fills options that were not given on the command line from the config file.
void apply_settings(CLI::App& app, CLI::App* active, const misose::Settings& settings) {
  std::set<std::string> known;
  for (const CLI::App* sub : app.get_subcommands({})) {
    for (const CLI::Option* opt : sub->get_options()) {
      for (const auto& name : opt->get_lnames()) known.insert(name);
    }
  }
  for (const auto& [key, value] : settings) {
    if (key == "config") continue;
    if (!known.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
    if (active == nullptr) continue;
    CLI::Option* opt = active->get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Ergodic secrecy capacity toolkit for MISOSE Rayleigh wiretap channels"};
  app.require_subcommand(1);

  auto* capacity = app.add_subcommand("capacity", "Secrecy capacity at one SNR point");
  add_model_flags(capacity, o);
  add_eval_flags(capacity, o);
  capacity->add_option("--snr-db", o.snr_db, "Transmit SNR in dB (P = 10^(dB/10))")
      ->capture_default_str();

  auto* optimize = app.add_subcommand("optimize", "Projected gradient search for D*");
  add_model_flags(optimize, o);
  optimize->add_option("--snr-db", o.snr_db, "Transmit SNR in dB")->capture_default_str();
  optimize->add_option("--iters", o.iters, "Maximum iterations")->capture_default_str();
  optimize->add_option("--grad-samples", o.grad_samples, "Samples per gradient pool")
      ->capture_default_str();
  optimize->add_option("--start", o.start, "Start allocation, comma separated");
  optimize->add_option("--out", o.out, "Write the iterate trace as CSV");

  auto* verify = app.add_subcommand("verify", "Stochastic-ordering and optimality probes");
  verify->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  verify->add_option("--samples", o.samples, "Monte Carlo samples for expectation checks")
      ->capture_default_str();
  verify->add_option("--pairs", o.pairs, "Random majorization pairs")->capture_default_str();
  verify->add_option("--s-points", o.s_points, "Points on the log s-grid")
      ->capture_default_str();
  verify->add_option("--check-d", o.check_d, "Extra pair: the majorizing vector d");
  verify->add_option("--check-dstar", o.check_dstar, "Extra pair: the majorized vector d*");

  auto* sweep_snr = app.add_subcommand("sweep-snr", "Capacity versus SNR, CSV output");
  add_model_flags(sweep_snr, o);
  add_eval_flags(sweep_snr, o);
  sweep_snr->add_option("--snr-grid", o.snr_grid, "dB grid: list or start:step:stop")
      ->capture_default_str();
  sweep_snr->add_option("--out", o.out, "CSV path (stdout when omitted)");

  auto* sweep_nt = app.add_subcommand("sweep-nt", "Capacity versus n_t, CSV output");
  add_model_flags(sweep_nt, o);
  add_eval_flags(sweep_nt, o);
  sweep_nt->add_option("--nt-grid", o.nt_grid, "Antenna counts: list or start:step:stop")
      ->capture_default_str();
  sweep_nt->add_option("--snr-db", o.snr_db, "Transmit SNR in dB")->capture_default_str();
  sweep_nt->add_option("--out", o.out, "CSV path (stdout when omitted)");

  for (auto* sub : {capacity, optimize, verify, sweep_snr, sweep_nt})
    sub->add_option("--config", o.config, "key=value file; command-line flags override it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    CLI::App* active = nullptr;
    for (auto* sub : app.get_subcommands()) active = sub;
    if (!o.config.empty()) apply_settings(app, active, misose::load_settings(o.config));

    if (active == capacity) return cmd_capacity(o);
    if (active == optimize) return cmd_optimize(o);
    if (active == verify) return cmd_verify(o);
    if (active == sweep_snr) return cmd_sweep(o, misose::SweepKind::snr);
    if (active == sweep_nt) return cmd_sweep(o, misose::SweepKind::antennas);
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
