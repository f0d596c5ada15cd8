#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helix/experiments.hpp"
#include "oracles.hpp"

using namespace helix;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("helix_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small() {
  ExperimentConfig c;
  c.n_r = 16;
  c.n_theta = 32;
  c.dt = 2e-3;
  c.t_star = 0.02;
  c.t_end = 0.02;
  c.sigmas = {2, 4, 8};
  return c;
}

}  // namespace

TEST_CASE("sigma list parsing") {
  CHECK(parse_sigma_list("2,4,8") == std::vector<double>{2, 4, 8});
  CHECK(parse_sigma_list(" 2 4 ; 8 ") == std::vector<double>{2, 4, 8});
  CHECK(parse_sigma_list("").empty());
  CHECK(std::isinf(parse_sigma_list("2,inf")[1]));
  CHECK(std::isinf(parse_sigma_list("planar")[0]));
  CHECK_THROWS_AS(parse_sigma_list("2,x"), ConfigError);
  CHECK_THROWS_AS(parse_sigma_list("2,4q"), ConfigError);
  CHECK(parse_sigma_list(format_sigma_list({2.5, 1e10})) == std::vector<double>{2.5, 1e10});
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "[grid]\nn_r = 32\nn_theta = 64\n[time]\ndt = 5e-4\nt_star = 0.25\n[sweep]\nsigma = 2, 4, 8\n"
      "[initial]\nfamily = gaussian-blob\nwidth = 0.1\n[tolerance]\nslope_slack = 0.05\n[run]\nseed = 7\n");
  auto c = parse_config(in);
  CHECK(c.n_r == 32);
  CHECK(c.n_theta == 64);
  CHECK(c.dt == 5e-4);
  CHECK(c.t_star == 0.25);
  CHECK(c.sigmas == std::vector<double>{2, 4, 8});
  CHECK(c.family == "gaussian-blob");
  CHECK(c.width == 0.1);
  CHECK(c.slope_slack == 0.05);
  CHECK(c.seed == 7u);
  CHECK(c.nu == 1.0);

  std::istringstream unknown("[grid]\nn_rr = 3\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  std::istringstream section("[mesh]\nn_r = 3\n");
  CHECK_THROWS_AS(parse_config(section), ConfigError);
  std::istringstream bad("[time]\ndt = fast\n");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  std::istringstream odd("[grid]\nn_theta = 15\n");
  CHECK_THROWS_AS(parse_config(odd), ConfigError);
  std::istringstream neg("[time]\ndt = -1\n");
  CHECK_THROWS_AS(parse_config(neg), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/helix.ini"), ConfigError);
}

TEST_CASE("manifest round trip") {
  auto dir = scratch("manifest");
  auto c = small();
  c.experiment = "ns-converge";
  auto m = make_manifest(c);
  for (const char* k : {"experiment", "n_r", "n_theta", "n_z", "dt", "t_end", "sigma_list", "family", "seed", "version"})
    CHECK(m.count(k) == 1);
  write_manifest((dir / "a.manifest").string(), m);
  CHECK(read_manifest((dir / "a.manifest").string()) == m);
  const std::string text = slurp(dir / "a.manifest");
  CHECK(text.find("n_r=16\n") != std::string::npos);
  CHECK(text.find("dt=2.0000000000000000e-03\n") != std::string::npos);
  std::ofstream(dir / "bad.manifest") << "just text\n";
  CHECK_THROWS(read_manifest((dir / "bad.manifest").string()));
}

TEST_CASE("csv format") {
  CHECK(format_double(0.1) == "1.0000000000000001e-01");
  CHECK(format_double(-2.0) == "-2.0000000000000000e+00");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  auto dir = scratch("csv");
  CsvTable t{{"sigma", "t_star", "l2_theta", "h1_theta_timeint"},
             {{format_double(2), format_double(0.5), format_double(1e-3), format_double(2e-4)}}};
  write_csv((dir / "a.csv").string(), t);
  CHECK(slurp(dir / "a.csv") ==
        "sigma,t_star,l2_theta,h1_theta_timeint\n"
        "2.0000000000000000e+00,5.0000000000000000e-01,1.0000000000000000e-03,2.0000000000000001e-04\n");
  auto back = read_csv((dir / "a.csv").string());
  CHECK(back.header == t.header);
  CHECK(csv_column(back, "l2_theta") == std::vector<double>{1e-3});
  CHECK_THROWS(csv_column(back, "nope"));
  CsvTable ragged{{"a", "b"}, {{"1"}}};
  CHECK_THROWS_AS(to_csv(ragged), std::invalid_argument);
  std::ofstream(dir / "r.csv") << "a,b\n1,2,3\n";
  CHECK_THROWS(read_csv((dir / "r.csv").string()));
  std::ofstream(dir / "e.csv") << "";
  CHECK_THROWS(read_csv((dir / "e.csv").string()));
}

TEST_CASE("field dump") {
  auto dir = scratch("dump");
  auto g = build_grid(8, 16);
  auto f = sample(g, [](double a, double b) { return a - 2 * b; });
  auto h = sample(g, [](double a, double) { return a * a; });
  const auto p = (dir / "f.bin").string();
  write_field_dump(p, {f, h});
  CHECK(fs::file_size(p) == 16u + 2 * 8 * 16 * 8);
  const std::string raw = slurp(p);
  CHECK(raw.substr(0, 4) == "HLXF");
  CHECK(raw[4] == 8);
  CHECK(raw[8] == 16);
  CHECK(raw[12] == 2);
  auto back = read_field_dump(p, g);
  REQUIRE(back.size() == 2);
  CHECK(oracle::max_diff(back[0], f) == 0.0);
  CHECK(oracle::max_diff(back[1], h) == 0.0);
  CHECK_THROWS(read_field_dump(p, build_grid(8, 32)));
  std::ofstream(dir / "bad.bin") << "XXXX";
  CHECK_THROWS(read_field_dump((dir / "bad.bin").string(), g));
  std::ofstream(dir / "short.bin", std::ios::binary) << raw.substr(0, raw.size() - 3);
  CHECK_THROWS(read_field_dump((dir / "short.bin").string(), g));

  // as an initial-data family
  ExperimentConfig c = small();
  c.n_r = 8;
  c.n_theta = 16;
  c.family = "file";
  c.field_file = p;
  CHECK_THROWS_AS(initial_velocity(c, g), ConfigError);
  write_field_dump(p, {f});
  CHECK(oracle::max_diff(initial_vorticity(c, g), f) == 0.0);
}

TEST_CASE("initial families") {
  auto g = build_grid(16, 32);
  ExperimentConfig c = small();
  for (const char* fam : {"default-generic", "radial-swirl", "bessel-swirl"}) {
    c.family = fam;
    auto w = initial_velocity(c, g);
    CHECK(lp_norm(divergence_h(w, Closure::vanishing), INFINITY) < 1e-10);
    CHECK(max_abs(w) > 0.1);
  }
  c.family = "gaussian-blob";
  CHECK(lp_norm(initial_vorticity(c, g), INFINITY) > 0.5);
  CHECK_THROWS_AS(initial_velocity(c, g), ConfigError);
  c.family = "nope";
  CHECK_THROWS_AS(initial_vorticity(c, g), ConfigError);
}

TEST_CASE("jobs resolution") {
  unsetenv("HELIX_JOBS");
  CHECK(resolve_jobs(0) == 1);
  CHECK(resolve_jobs(3) == 3);
  setenv("HELIX_JOBS", "4", 1);
  CHECK(resolve_jobs(0) == 4);
  CHECK(resolve_jobs(2) == 2);
  setenv("HELIX_JOBS", "junk", 1);
  CHECK(resolve_jobs(0) == 1);
  unsetenv("HELIX_JOBS");
}

TEST_CASE("ns-converge: output independent of parallelism") {
  auto c = small();
  c.experiment = "ns-converge";
  auto d1 = scratch("ns1"), d3 = scratch("ns3");
  auto r1 = cmd_ns_converge(c, d1.string(), 1);
  auto r3 = cmd_ns_converge(c, d3.string(), 3);
  CHECK(slurp(d1 / "ns-converge.csv") == slurp(d3 / "ns-converge.csv"));
  CHECK(slurp(d1 / "ns-converge.manifest") == slurp(d3 / "ns-converge.manifest"));
  auto t = read_csv((d1 / "ns-converge.csv").string());
  CHECK(t.header == std::vector<std::string>{"sigma", "t_star", "l2_theta", "h1_theta_timeint"});
  CHECK(csv_column(t, "sigma") == c.sigmas);
  CHECK(r1.report.error_l2.size() == 3);
  CHECK(r1.report.pair_slopes.size() == 2);
  CHECK(r1.report.t_star == doctest::Approx(0.02));
}

TEST_CASE("ns-converge: radial swirl is degenerate and config errors") {
  auto c = small();
  c.family = "radial-swirl";
  auto r = cmd_ns_converge(c);
  for (double e : r.report.error_l2) CHECK(e <= 1e-8);
  CHECK(r.report.degenerate);
  CHECK(r.exit_code == 0);
  c.sigmas = {};
  CHECK_THROWS_AS(cmd_ns_converge(c), ConfigError);
  c.sigmas = {4, 2};
  CHECK_THROWS_AS(cmd_ns_converge(c), ConfigError);
  c.sigmas = {0.5};
  CHECK_THROWS_AS(cmd_ns_converge(c), ConfigError);
}

TEST_CASE("euler-converge") {
  auto c = small();
  c.family = "radial-blob";
  c.width = 0.2;
  c.t_star = 0.0;
  auto r = cmd_euler_converge(c);
  for (double e : r.report.error_l2) CHECK(e <= 1e-12);
  c.family = "gaussian-blob";
  c.sigmas = {4};
  auto one = cmd_euler_converge(c);
  CHECK(one.exit_code == 0);
  CHECK(one.csv.rows.size() == 2);
  c.sigmas = {2, 8, 32};
  c.t_star = 0.02;
  auto three = cmd_euler_converge(c);
  CHECK(three.exit_code == 0);
  CHECK(three.report.error_l2[2] < three.report.error_l2[0]);
}

TEST_CASE("energy-audit") {
  auto c = small();
  c.n_r = 32;
  c.n_theta = 32;
  c.family = "bessel-swirl";
  c.sigmas = {2, INFINITY};
  c.dt = 1e-3;
  c.t_end = 0.05;
  auto a = cmd_energy_audit(c);
  CHECK(a.exit_code == 0);
  CHECK(a.csv.rows.size() == 2 * 51);
  c.dt = 2e-3;
  auto b = cmd_energy_audit(c);
  const double ratio = b.checks[0].value / a.checks[0].value;
  MESSAGE("doubling dt scales the residual by " << ratio);
  CHECK(ratio > 1.5);
  c.amplitude = 0.0;
  auto z = cmd_energy_audit(c);
  for (const auto& ch : z.checks) CHECK(ch.value == 0.0);
}

TEST_CASE("operator-check and lift-check") {
  ExperimentConfig c;
  c.n_r = 8;
  c.n_theta = 16;
  auto op = cmd_operator_check(c);
  CHECK(op.exit_code == 0);
  c.n_r = 16;
  c.n_theta = 32;
  c.n_z = 8;
  c.sigmas = {1};
  auto li = cmd_lift_check(c);
  for (const auto& ch : li.checks) CHECK_MESSAGE(ch.pass, ch.name);
  CHECK(li.exit_code == 0);
}
