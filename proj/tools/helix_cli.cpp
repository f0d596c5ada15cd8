// helix: experiment driver
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "helix/experiments.hpp"

using namespace helix;

namespace {

void print(const CommandResult& r) {
  for (const auto& c : r.checks)
    std::printf("%-34s sigma=%-10s value=%-24s threshold=%-24s %s\n", c.name.c_str(),
                c.sigma == 0.0 ? "-" : format_double(c.sigma).c_str(), format_double(c.value).c_str(),
                format_double(c.threshold).c_str(), c.pass ? "PASS" : "FAIL");
  for (const auto& n : r.notes) std::printf("%s\n", n.c_str());
  if (!r.report.pair_slopes.empty()) {
    std::printf("pair slopes:");
    for (double s : r.report.pair_slopes) std::printf(" %.4f", s);
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"helical Navier-Stokes / Euler experiments on the unit disk"};
  app.require_subcommand(1);
  std::string config, out, sigma;
  int jobs = 0;
  auto common = [&](CLI::App* c) {
    c->add_option("--config", config, "INI config file")->check(CLI::ExistingFile);
    c->add_option("--out", out, "output directory for csv and manifest");
    c->add_option("--jobs", jobs, "parallel sigma workers (default HELIX_JOBS or 1)")->check(CLI::PositiveNumber);
    c->add_option("--sigma", sigma, "sigma list override, e.g. 2,4,8");
  };
  auto* ns = app.add_subcommand("ns-converge", "viscous planar-limit rate");
  auto* eu = app.add_subcommand("euler-converge", "inviscid stream-function convergence");
  auto* en = app.add_subcommand("energy-audit", "energy identity residuals");
  auto* op = app.add_subcommand("operator-check", "operator identity suite");
  auto* li = app.add_subcommand("lift-check", "helical lift checks");
  for (auto* c : {ns, eu, en, op, li}) common(c);
  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config(config);
    if (!sigma.empty()) cfg.sigmas = parse_sigma_list(sigma);
    const int j = resolve_jobs(jobs);
    CommandResult r;
    if (ns->parsed()) {
      cfg.experiment = "ns-converge";
      r = cmd_ns_converge(cfg, out, j);
    } else if (eu->parsed()) {
      cfg.experiment = "euler-converge";
      if (config.empty()) cfg.family = "gaussian-blob";
      r = cmd_euler_converge(cfg, out, j);
    } else if (en->parsed()) {
      cfg.experiment = "energy-audit";
      r = cmd_energy_audit(cfg, out, j);
    } else if (op->parsed()) {
      cfg.experiment = "operator-check";
      r = cmd_operator_check(cfg, out);
    } else {
      cfg.experiment = "lift-check";
      r = cmd_lift_check(cfg, out);
    }
    const bool sweep = ns->parsed() || eu->parsed() || en->parsed();
    if (sweep && out.empty()) std::cout << to_csv(r.csv);
    print(r);
    return r.exit_code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
