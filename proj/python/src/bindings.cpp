#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "misose/allocation.hpp"
#include "misose/channel.hpp"
#include "misose/experiments.hpp"
#include "misose/ordering.hpp"
#include "misose/rate.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace misose;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

EvalMethod make_method(const std::string& method, std::size_t samples, std::size_t nodes,
                       std::uint64_t seed) {
  const Method m = parse_method(method);
  if (m == Method::quadrature) return EvalMethod::quadrature(nodes);
  return {m, samples, seed};
}

ComplexArray to_array(const ComplexGainMatrix& g) {
  ComplexArray out({g.rows(), g.cols()});
  std::copy(g.data().begin(), g.data().end(), out.mutable_data());
  return out;
}

ComplexGainMatrix from_array(const ComplexArray& a, double scale) {
  if (a.ndim() != 2) throw std::invalid_argument("gains must be a 2-D array");
  ComplexGainMatrix g(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                      scale);
  std::copy(a.data(), a.data() + a.size(), g.data().begin());
  return g;
}

std::string repr(const RateEstimate& r) {
  std::ostringstream s;
  s << "RateEstimate(mean=" << r.mean << ", std_error=" << r.std_error
    << ", n_samples=" << r.n_samples << ", seed=" << r.seed << ")";
  return s.str();
}

SweepSpec make_spec(SweepKind kind, const ChannelModel& model, double total_power,
                    std::vector<double> grid, const std::string& method, std::size_t samples,
                    std::size_t nodes, std::uint64_t seed) {
  SweepSpec spec;
  spec.kind = kind;
  spec.model = model;
  spec.total_power = total_power;
  spec.grid = std::move(grid);
  spec.method = make_method(method, samples, nodes, seed);
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ergodic secrecy capacity of the MISOSE Rayleigh wiretap channel.";

  py::enum_<Side>(m, "Side")
      .value("legitimate", Side::legitimate)
      .value("eavesdropper", Side::eavesdropper);

  py::enum_<Method>(m, "Method")
      .value("direct_mc", Method::direct_mc)
      .value("coupled_mc", Method::coupled_mc)
      .value("quadrature", Method::quadrature);

  py::class_<ChannelModel>(m, "ChannelModel")
      .def(py::init<int, double, double>(), py::arg("n_t"), py::arg("sigma_h"), py::arg("sigma_g"))
      .def_property_readonly("n_t", &ChannelModel::n_t)
      .def_property_readonly("sigma_h", &ChannelModel::sigma_h)
      .def_property_readonly("sigma_g", &ChannelModel::sigma_g)
      .def_property_readonly("ratio_a", &ChannelModel::ratio_a)
      .def_property_readonly("degraded", &ChannelModel::degraded)
      .def("with_antennas", &ChannelModel::with_antennas, py::arg("n_t"))
      .def("__repr__", [](const ChannelModel& c) {
        std::ostringstream s;
        s << "ChannelModel(n_t=" << c.n_t() << ", sigma_h=" << c.sigma_h()
          << ", sigma_g=" << c.sigma_g() << ")";
        return s.str();
      });

  py::class_<PowerAllocation>(m, "PowerAllocation")
      .def(py::init([](std::vector<double> d, std::optional<double> budget) {
             const double b = budget ? *budget : std::accumulate(d.begin(), d.end(), 0.0);
             return PowerAllocation(std::move(d), b);
           }),
           py::arg("d"), py::arg("budget") = py::none(),
           "Diagonal power allocation; the budget defaults to sum(d).")
      .def_static("uniform", &PowerAllocation::uniform, py::arg("n_t"), py::arg("budget"))
      .def_static("single", &PowerAllocation::single, py::arg("n_t"), py::arg("budget"))
      .def_static("zeros", &PowerAllocation::zeros, py::arg("n_t"))
      .def_property_readonly("d", [](const PowerAllocation& a) { return to_vector(a.d()); })
      .def_property_readonly("budget", &PowerAllocation::budget)
      .def("total", &PowerAllocation::total)
      .def("__len__", &PowerAllocation::size)
      .def("__repr__", [](const PowerAllocation& a) {
        std::ostringstream s;
        s << "PowerAllocation(d=[";
        for (std::size_t k = 0; k < a.size(); ++k) s << (k ? ", " : "") << a[k];
        s << "], budget=" << a.budget() << ")";
        return s.str();
      });

  py::class_<RateEstimate>(m, "RateEstimate")
      .def_readonly("mean", &RateEstimate::mean)
      .def_readonly("std_error", &RateEstimate::std_error)
      .def_readonly("n_samples", &RateEstimate::n_samples)
      .def_readonly("seed", &RateEstimate::seed)
      .def("__repr__", &repr);

  py::class_<EvalMethod>(m, "EvalMethod")
      .def_readonly("method", &EvalMethod::method)
      .def_readonly("count", &EvalMethod::count)
      .def_readonly("seed", &EvalMethod::seed)
      .def_static("direct", &EvalMethod::direct, py::arg("samples"), py::arg("seed"))
      .def_static("coupled", &EvalMethod::coupled, py::arg("samples"), py::arg("seed"))
      .def_static("quadrature", &EvalMethod::quadrature, py::arg("nodes") = 64);

  m.def("sample_channel",
        [](const ChannelModel& model, Side side, std::size_t count, std::uint64_t seed) {
          return to_array(sample_channel(model, side, count, seed));
        },
        py::arg("model"), py::arg("side"), py::arg("count"), py::arg("seed"),
        "Complex array of shape (count, n_t) with CN(0, sigma^2) entries.");
  m.def("quadratic_form",
        [](const ComplexArray& gains, const PowerAllocation& alloc) {
          return quadratic_form(from_array(gains, 1.0), alloc);
        },
        py::arg("gains"), py::arg("alloc"));

  // Rates.
  m.def("ergodic_log_rate_mc", &ergodic_log_rate_mc, py::arg("sigma"), py::arg("alloc"),
        py::arg("samples"), py::arg("seed"), py::call_guard<py::gil_scoped_release>());
  m.def("secrecy_rate_direct_mc", &secrecy_rate_direct_mc, py::arg("model"), py::arg("alloc"),
        py::arg("samples"), py::arg("seed"), py::call_guard<py::gil_scoped_release>());
  m.def("secrecy_rate_coupled_mc", &secrecy_rate_coupled_mc, py::arg("model"), py::arg("alloc"),
        py::arg("samples"), py::arg("seed"), py::call_guard<py::gil_scoped_release>());
  m.def("ergodic_log_rate_quadrature", &ergodic_log_rate_quadrature, py::arg("sigma"),
        py::arg("total_power"), py::arg("n_t"), py::arg("nodes") = 64);
  m.def("secrecy_capacity",
        [](const ChannelModel& model, double total_power, const std::string& method,
           std::size_t samples, std::size_t nodes, std::uint64_t seed) {
          const auto how = make_method(method, samples, nodes, seed);
          py::gil_scoped_release release;
          return secrecy_capacity(model, total_power, how);
        },
        py::arg("model"), py::arg("total_power"), py::arg("method") = "coupled",
        py::arg("samples") = 1'000'000, py::arg("nodes") = 64, py::arg("seed") = 1,
        "Method is 'direct', 'coupled' or 'quad'.");
  m.def("asymptote_high_snr", &asymptote_high_snr, py::arg("model"));
  m.def("asymptote_large_nt", &asymptote_large_nt, py::arg("model"), py::arg("total_power"));
  m.def("snr_db_to_linear", &snr_db_to_linear, py::arg("snr_db"));

  // Allocation.
  m.def("project_to_simplex",
        [](const std::vector<double>& v, double total_power) {
          return project_to_simplex(v, total_power);
        },
        py::arg("v"), py::arg("total_power"));
  m.def("grad_estimate",
        [](const ChannelModel& model, const PowerAllocation& alloc, std::size_t samples,
           std::uint64_t seed) {
          const auto g = grad_estimate(model, alloc, samples, seed);
          return py::make_tuple(g.values, g.std_errors);
        },
        py::arg("model"), py::arg("alloc"), py::arg("samples"), py::arg("seed"),
        "Returns (values, std_errors).");
  m.def("objective_value", &objective_value, py::arg("model"), py::arg("alloc"),
        py::arg("samples"), py::arg("seed"), py::call_guard<py::gil_scoped_release>());
  m.def("random_allocation", &random_allocation, py::arg("n_t"), py::arg("total_power"),
        py::arg("seed"));

  py::class_<OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init<>())
      .def_readwrite("max_iters", &OptimizerConfig::max_iters)
      .def_readwrite("initial_step_fraction", &OptimizerConfig::initial_step_fraction)
      .def_readwrite("grad_samples", &OptimizerConfig::grad_samples)
      .def_readwrite("refresh_every", &OptimizerConfig::refresh_every)
      .def_readwrite("window", &OptimizerConfig::window)
      .def_readwrite("tol_fraction", &OptimizerConfig::tol_fraction)
      .def_readwrite("seed", &OptimizerConfig::seed);

  py::class_<OptimizerTrace>(m, "OptimizerTrace")
      .def_readonly("iterates", &OptimizerTrace::iterates)
      .def_readonly("objective_values", &OptimizerTrace::objective_values)
      .def_readonly("converged", &OptimizerTrace::converged)
      .def_property_readonly("final_allocation", &OptimizerTrace::final_allocation);

  m.def("optimize_allocation", &optimize_allocation, py::arg("model"), py::arg("total_power"),
        py::arg("config") = OptimizerConfig{}, py::arg("start") = py::none(),
        py::call_guard<py::gil_scoped_release>());

  // Ordering.
  py::class_<Witness>(m, "Witness")
      .def_readonly("point", &Witness::point)
      .def_readonly("value", &Witness::value)
      .def_readonly("margin", &Witness::margin)
      .def_readonly("alt_value", &Witness::alt_value);

  py::class_<OrderCheckReport>(m, "OrderCheckReport")
      .def_property_readonly("relation",
                             [](const OrderCheckReport& r) { return std::string(to_string(r.relation)); })
      .def_readonly("grid", &OrderCheckReport::grid)
      .def_readonly("min_margin", &OrderCheckReport::min_margin)
      .def_readonly("witnesses", &OrderCheckReport::witnesses)
      .def("holds", &OrderCheckReport::holds, py::arg("slack") = 1e-12);

  py::class_<ProbeSizes>(m, "ProbeSizes")
      .def(py::init<>())
      .def_readwrite("pairs", &ProbeSizes::pairs)
      .def_readwrite("s_points", &ProbeSizes::s_points)
      .def_readwrite("x_points", &ProbeSizes::x_points)
      .def_readwrite("max_order", &ProbeSizes::max_order)
      .def_readwrite("mc_samples", &ProbeSizes::mc_samples);

  m.def("majorization_slack",
        [](const std::vector<double>& x, const std::vector<double>& y) {
          return majorization_slack(x, y);
        },
        py::arg("x"), py::arg("y"));
  m.def("majorizes",
        [](const std::vector<double>& x, const std::vector<double>& y) { return majorizes(x, y); },
        py::arg("x"), py::arg("y"), "True iff x majorizes y.");
  m.def("mgf_quadratic_form",
        [](const std::vector<double>& d, double sigma, double s) {
          return mgf_quadratic_form(d, sigma, s);
        },
        py::arg("d"), py::arg("sigma"), py::arg("s"));
  m.def("lt_order_gap",
        [](const std::vector<double>& d_star, const std::vector<double>& d, double sigma, double s) {
          return lt_order_gap(d_star, d, sigma, s);
        },
        py::arg("d_star"), py::arg("d"), py::arg("sigma"), py::arg("s"));
  m.def("cm_derivative", &cm_derivative, py::arg("a"), py::arg("x"), py::arg("n"));
  m.def("verify_lemma_lt_implies_expectation",
        [](const std::vector<double>& d1, const std::vector<double>& d2, double sigma, double a,
           std::size_t samples, std::uint64_t seed) {
          return verify_lemma_lt_implies_expectation(d1, d2, sigma, a, samples, seed);
        },
        py::arg("d1"), py::arg("d2"), py::arg("sigma"), py::arg("a"), py::arg("samples"),
        py::arg("seed"));

  // Experiments.
  py::class_<SweepRow>(m, "SweepRow")
      .def_property_readonly("sweep_kind",
                             [](const SweepRow& r) { return std::string(to_string(r.kind)); })
      .def_readonly("sweep_value", &SweepRow::sweep_value)
      .def_readonly("n_t", &SweepRow::n_t)
      .def_readonly("sigma_h", &SweepRow::sigma_h)
      .def_readonly("sigma_g", &SweepRow::sigma_g)
      .def_readonly("P", &SweepRow::total_power)
      .def_readonly("method", &SweepRow::method)
      .def_readonly("capacity_bits", &SweepRow::capacity_bits)
      .def_readonly("std_error_bits", &SweepRow::std_error_bits)
      .def_readonly("asymptote_bits", &SweepRow::asymptote_bits)
      .def_readonly("seed", &SweepRow::seed);

  m.def("sweep_snr",
        [](const ChannelModel& model, std::vector<double> snr_db, const std::string& method,
           std::size_t samples, std::size_t nodes, std::uint64_t seed) {
          const auto spec = make_spec(SweepKind::snr, model, 0.0, std::move(snr_db), method,
                                      samples, nodes, seed);
          py::gil_scoped_release release;
          return run_sweep_snr(spec);
        },
        py::arg("model"), py::arg("snr_db"), py::arg("method") = "coupled",
        py::arg("samples") = 1'000'000, py::arg("nodes") = 64, py::arg("seed") = 1);
  m.def("sweep_antennas",
        [](const ChannelModel& model, double total_power, std::vector<double> n_t_grid,
           const std::string& method, std::size_t samples, std::size_t nodes, std::uint64_t seed) {
          const auto spec = make_spec(SweepKind::antennas, model, total_power, std::move(n_t_grid),
                                      method, samples, nodes, seed);
          py::gil_scoped_release release;
          return run_sweep_antennas(spec);
        },
        py::arg("model"), py::arg("total_power"), py::arg("n_t_grid"),
        py::arg("method") = "coupled", py::arg("samples") = 1'000'000, py::arg("nodes") = 64,
        py::arg("seed") = 1);
  m.def("write_csv",
        [](const std::vector<SweepRow>& rows, std::optional<std::string> path) -> py::object {
          if (path) {
            write_csv(*path, rows);
            return py::none();
          }
          std::ostringstream out;
          write_csv(out, rows);
          return py::str(out.str());
        },
        py::arg("rows"), py::arg("path") = py::none(),
        "Writes rows to path, or returns the CSV text when path is None.");
  m.def("verify_suite",
        [](std::uint64_t seed, int pairs, std::size_t mc_samples) {
          VerifyOptions options;
          options.seed = seed;
          options.sizes.pairs = pairs;
          options.mc_samples = mc_samples;
          VerifySummary summary;
          {
            py::gil_scoped_release release;
            summary = run_verify_suite(options);
          }
          std::ostringstream out;
          print_summary(out, summary);
          return py::make_tuple(summary.passed(), out.str());
        },
        py::arg("seed") = 1, py::arg("pairs") = 1000, py::arg("mc_samples") = 200'000,
        "Returns (passed, report text).");

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
