#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cechlab/errors.hpp"
#include "cechlab/experiments.hpp"
#include "cechlab/rods/fem.hpp"
#include "cechlab/triplets.hpp"

using namespace cechlab;
using namespace cechlab::experiments;

namespace {

std::string table_csv(const SweepConfig& cfg) {
  std::ostringstream os;
  write_table_csv(os, run_table1(cfg), cfg.precise);
  return os.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "cechlab_test_experiments";
  std::filesystem::create_directories(dir);
  return dir / name;
}

int run_cli(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd = std::string(CECHLAB_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# sweep\n"
      "epsilons = 0.1, 0.01  # two rows\n"
      "r = 2\n"
      "w01=0.5\n"
      "norm = graph\n"
      "hat_residual = integrated\n"
      "precise = true\n"
      "samples = 7\n");
  const SweepConfig c = parse_config(in);
  CHECK(c.epsilons == std::vector<double>{0.1, 0.01});
  CHECK(c.r == 2.0);
  CHECK(c.w == 1.0);
  CHECK(c.w01 == 0.5);
  CHECK(c.norm == NormKind::graph);
  CHECK(c.hat == estimators::HatResidual::integrated);
  CHECK(c.precise);
  CHECK(c.samples == 7);
  CHECK_NOTHROW(c.validate());

  for (const char* bad : {"colour = red\n", "r = abc\n", "epsilons = 0.1,,0.01\n", "r\n", "norm = h1\n"}) {
    std::istringstream b(bad);
    CHECK_THROWS_AS(parse_config(b), ParameterError);
  }
  SweepConfig inc;
  inc.epsilons = {0.01, 0.1};
  CHECK_THROWS_AS(inc.validate(), ParameterError);
  SweepConfig out_of_range;
  out_of_range.epsilons = {1.0};
  CHECK_THROWS_AS(out_of_range.validate(), ParameterError);
  SweepConfig few;
  few.samples = 1;
  CHECK_THROWS_AS(few.validate(), ParameterError);
  CHECK_THROWS_AS(load_config("/nonexistent/cechlab.cfg"), ParameterError);
}

TEST_CASE("rates attach to the earlier row") {
  CHECK(rate(4.0, 1.0, 0.4, 0.1) == doctest::Approx(1.0));
  SweepConfig cfg;
  const RateTable t = run_table1(cfg);
  REQUIRE(t.rows.size() == cfg.epsilons.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].report.epsilon == cfg.epsilons[i]);
    CHECK(t.rows[i].rate_u.has_value() == (i + 1 < t.rows.size()));
    if (i + 1 < t.rows.size()) {
      const auto& a = t.rows[i].report;
      const auto& b = t.rows[i + 1].report;
      CHECK(*t.rows[i].rate_sigma == doctest::Approx(std::log(a.e_sigma / b.e_sigma) / std::log(a.epsilon / b.epsilon)));
    }
  }
  CHECK(t.all_reliable());
}

TEST_CASE("table CSV layout and determinism") {
  SweepConfig cfg;
  const std::string a = table_csv(cfg);
  CHECK(a == table_csv(cfg));
  const auto rows = lines(a);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "epsilon,error_u,rate_u,efficiency_u,error_sigma,rate_sigma,efficiency_sigma");
  CHECK(rows[1].rfind("2.000e-01,", 0) == 0);
  CHECK(rows[5].rfind("7.813e-04,", 0) == 0);
  // Last row: empty rate fields.
  CHECK(rows[6].find(",,") != std::string::npos);

  cfg.epsilons = {0.05};
  const auto single = lines(table_csv(cfg));
  REQUIRE(single.size() == 2);
  CHECK(std::count(single[1].begin(), single[1].end(), ',') == 6);

  cfg.precise = true;
  const auto precise = lines(table_csv(cfg));
  CHECK(precise[1].rfind("0.050000000000000003,", 0) == 0);
}

TEST_CASE("fields CSV") {
  RodParams p;
  std::ostringstream os;
  write_fields_csv(os, p, 100);
  const auto rows = lines(os.str());
  // 2 solutions x (4 two-piece fields + σ01) x 100 samples
  CHECK(rows.size() == 1 + 2 * 9 * 100);

  bool sigma0_at_eps = false;
  for (const std::string& r : rows) {
    if (r.rfind("0.20000000000000001,sigma0,", 0) == 0 && r.find(",cech") != std::string::npos) {
      sigma0_at_eps = true;
      std::istringstream is(r);
      std::string x, f, v;
      std::getline(is, x, ',');
      std::getline(is, f, ',');
      std::getline(is, v, ',');
      CHECK(std::abs(std::stod(v)) <= 1e-14);
    }
  }
  CHECK(sigma0_at_eps);

  // Embedded displacement is constant across the overlap samples.
  double lo = 1e300, hi = -1e300;
  for (const std::string& r : rows) {
    if (r.find(",u0,") == std::string::npos || r.find(",embedded") == std::string::npos) continue;
    const double x = std::stod(r.substr(0, r.find(',')));
    if (x <= -0.2 + 1e-15) continue;
    const double v = std::stod(r.substr(r.find(",u0,") + 4));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi - lo == 0.0);

  p.r = 0.0;
  std::ostringstream zero;
  write_fields_csv(zero, p, 5);
  for (const std::string& r : lines(zero.str())) {
    if (r.rfind("x,", 0) == 0) continue;
    std::istringstream is(r);
    std::string x, f, v;
    std::getline(is, x, ',');
    std::getline(is, f, ',');
    std::getline(is, v, ',');
    CHECK(v == "0");
  }
  CHECK_THROWS_AS(write_fields_csv(zero, p, 1), ParameterError);
}

TEST_CASE("complex check") {
  RodParams p;
  const CheckReport ok = complex_check(p, 1.0 / 64);
  for (const Check& c : ok.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.pass);
  }

  ComplexCheckOptions fault;
  fault.flip_sign = true;
  const CheckReport bad = complex_check(p, 1.0 / 64, fault);
  CHECK_FALSE(bad.all_pass());
  bool anticommutator_failed = false;
  for (const Check& c : bad.checks) {
    if (c.name.find("d_h d_v + d_v d_h") != std::string::npos) anticommutator_failed = !c.pass;
  }
  CHECK(anticommutator_failed);

  CHECK_THROWS_AS(complex_check(p, 0.3), ParameterError);

  ComplexCheckOptions dump;
  dump.dump_dir = scratch("dump").string();
  complex_check(p, 0.1, dump);
  std::ifstream d0(scratch("dump") / "D0.txt");
  const Matrix m = read_triplets(d0);
  CHECK(m.cols() > 0);
}

TEST_CASE("flip_sign changes exactly one entry") {
  RodParams p;
  const rods::DiscreteRods dr(p, 0.1);
  const DoubleComplex f = flip_sign(dr.cech(), {0, 0}, 0, dr.overlap_node0(0));
  const Matrix diff = f.d_h({0, 0}) - dr.cech().d_h({0, 0});
  CHECK((diff.array() != 0.0).count() == 1);
  CHECK_THROWS_AS(flip_sign(dr.cech(), {0, 0}, 1000, 0), ParameterError);
}

TEST_CASE("command line") {
  const auto out = scratch("out.txt");
  CHECK(run_cli("table1", out) == 0);
  const std::string first = slurp(out);
  CHECK(run_cli("table1", out) == 0);
  CHECK(slurp(out) == first);

  const auto csv = scratch("table.csv");
  CHECK(run_cli("table1 --epsilons 0.1 --out " + csv.string(), out) == 0);
  CHECK(lines(slurp(csv)).size() == 2);

  const auto cfg = scratch("sweep.cfg");
  {
    std::ofstream f(cfg);
    f << "epsilons = 0.2, 0.05\nprecise = true\n";
  }
  CHECK(run_cli("table1 --config " + cfg.string(), out) == 0);
  CHECK(lines(slurp(out)).size() == 3);
  // The displacement estimator does not bound the graph-norm error.
  CHECK(run_cli("table1 --config " + cfg.string() + " --norm graph", out) == 2);
  CHECK(slurp(out).find("reliability violated") != std::string::npos);

  CHECK(run_cli("fields --r 0 --samples 4", out) == 0);
  CHECK(run_cli("complex-check --mesh-size 0.0625", out) == 0);
  CHECK(run_cli("complex-check --mesh-size 0.0625 --flip-sign", out) == 2);
  CHECK(slurp(out).find("FAIL d_h d_v + d_v d_h") != std::string::npos);

  std::filesystem::remove(csv);
  CHECK(run_cli("table1 --epsilons 0.1,0.2 --out " + csv.string(), out) == 1);
  CHECK_FALSE(std::filesystem::exists(csv));
  CHECK(run_cli("complex-check --mesh-size 0.5", out) == 1);
  CHECK(run_cli("", out) == 1);
  CHECK(run_cli("table1 --norm h1", out) == 1);
  CHECK(run_cli("table1 --unknown", out) == 1);
  CHECK(run_cli("--help", out) == 0);
}
