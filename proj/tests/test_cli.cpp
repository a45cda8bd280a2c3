#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "misose_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

Result run(const std::string& args) {
  const auto out_path = scratch("stdout.txt");
  const std::string cmd =
      std::string("\"") + MISOSE_CLI_PATH + "\" " + args + " > \"" + out_path.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  return r;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("capacity --method exact").code == 2);
  CHECK(run("capacity --ntx 0").code == 2);
  CHECK(run("capacity --sigma-h -1").code == 2);
  CHECK(run("capacity --method quad --nodes 4").code == 2);
  CHECK(run("sweep-snr --snr-grid 10,0").code == 2);
  CHECK(run("sweep-nt --nt-grid 1,2.5").code == 2);
  CHECK(run("optimize --sigma-h 1 --sigma-g 1").code == 2);
  CHECK(run("capacity --config /nonexistent/settings.conf").code == 2);
}

TEST_CASE("help exits with 0") {
  const auto r = run("--help");
  CHECK(r.code == 0);
  CHECK(r.out.find("sweep-snr") != std::string::npos);
}

TEST_CASE("capacity") {
  const auto r = run("capacity --ntx 2 --sigma-h 1 --sigma-g 0.5 --snr-db 60 --method quad");
  CHECK(r.code == 0);
  CHECK(r.out.find("capacity_bits=1.99999") != std::string::npos);

  const auto clamp = run("capacity --sigma-h 0.5 --sigma-g 1 --samples 1000");
  CHECK(clamp.code == 0);
  CHECK(clamp.out.find("capacity_bits=0 ") != std::string::npos);
}

TEST_CASE("verify") {
  SUBCASE("unequal sums are a precondition error") {
    const auto r = run("verify --check-d 2,0 --check-dstar 1,0.5");
    CHECK(r.code == 2);
    CHECK(r.out.find("error:") != std::string::npos);
  }
  SUBCASE("a reversed pair is a violated margin") {
    const auto r = run("verify --pairs 20 --samples 20000 --check-d 1,1 --check-dstar 2,0");
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL injected_pair") != std::string::npos);
  }
  SUBCASE("a valid pair passes") {
    const auto r = run("verify --pairs 50 --check-d 2,0 --check-dstar 1,1");
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS injected_pair") != std::string::npos);
  }
}

TEST_CASE("optimize") {
  const auto trace = scratch("trace.csv");
  const auto r = run("optimize --ntx 4 --snr-db 6.0206 --seed 3 --out \"" + trace.string() + "\"");
  CHECK(r.code == 0);
  CHECK(r.out.find("converged=true") != std::string::npos);
  const auto text = slurp(trace);
  CHECK(text.rfind("iteration,d1,d2,d3,d4,objective_bits,std_error_bits\n", 0) == 0);

  CHECK(run("optimize --ntx 4 --iters 1").code == 1);
}

TEST_CASE("sweep-snr output is byte-identical across runs") {
  const auto a = scratch("a.csv");
  const auto b = scratch("b.csv");
  const std::string args = "sweep-snr --snr-grid 0:10:30 --samples 20000 --seed 5 --out ";
  REQUIRE(run(args + "\"" + a.string() + "\"").code == 0);
  REQUIRE(run(args + "\"" + b.string() + "\"").code == 0);
  const auto text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.rfind("sweep_kind,sweep_value,n_t,sigma_h,sigma_g,P,method,capacity_bits,"
                   "std_error_bits,asymptote_bits,seed\n",
                   0) == 0);
  CHECK(run("sweep-snr --snr-grid 0 --out /nonexistent-dir/out.csv").code == 1);
}

TEST_CASE("config file values are overridden by flags") {
  const auto conf = scratch("settings.conf");
  write_file(conf,
             "# sweep settings\n"
             "ntx = 3\n"
             "method = quad\n"
             "snr-grid = 0,20\n");
  const auto from_file = run("sweep-snr --config \"" + conf.string() + "\"");
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out.find("snr,0,3,1,0.5,1,quadrature,") != std::string::npos);
  CHECK(from_file.out.find("snr,20,3,") != std::string::npos);

  const auto overridden = run("sweep-snr --ntx 4 --config \"" + conf.string() + "\"");
  REQUIRE(overridden.code == 0);
  CHECK(overridden.out.find("snr,0,4,1,0.5,1,quadrature,") != std::string::npos);

  write_file(conf, "bogus-key = 1\n");
  CHECK(run("sweep-snr --config \"" + conf.string() + "\"").code == 2);
  write_file(conf, "ntx = many\n");
  CHECK(run("sweep-snr --config \"" + conf.string() + "\"").code == 2);
}
