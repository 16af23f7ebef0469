#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mz/euler.hpp"
#include "mz/fld_io.hpp"
#include "mz/harness.hpp"
#include "mz/numerics.hpp"
#include "mz/profile.hpp"

namespace {

int fail(int code, const std::string& msg) {
  std::cerr << "mz: " << msg << "\n";
  return code;
}

int cmd_truncate(const std::string& config, const std::string& out_dir) {
  if (!std::filesystem::exists(config)) return fail(mz::kExitSchema, "config file not found: " + config);
  const mz::RunOutcome r =
      mz::run_config_file(config, out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir));
  if (r.exit_code != mz::kExitOk) return fail(r.exit_code, r.message);
  std::cout << r.report["summary"].dump(2) << "\n";
  return mz::kExitOk;
}

int cmd_euler(int d, int n, std::uint64_t seed, const std::string& out, const std::string& report) {
  if (d != 3 && d != 4) return fail(mz::kExitSchema, "--dim must be 3 or 4");
  if (n < 4) return fail(mz::kExitSchema, "--grid must be at least 4");
  mz::EulerRun run = mz::run_euler_potential(d, n, seed);
  if (!out.empty()) mz::write_fld(out, run.state);
  if (!report.empty()) {
    std::ofstream f(report);
    if (!f) return fail(mz::kExitSchema, "cannot write report: " + report);
    f << run.report.dump(2) << "\n";
  }
  std::cout << run.report.dump(2) << "\n";
  if (!run.report["passed"].get<bool>()) return fail(mz::kExitInvariant, "residual above tolerance");
  return mz::kExitOk;
}

int cmd_symbol(const std::string& pair, int d, int trials, double tol) {
  if (trials < 1) return fail(mz::kExitSchema, "--trials must be positive");
  if (!(tol > 0.0)) return fail(mz::kExitSchema, "--tol must be positive");
  mz::ExactnessReport rep;
  if (pair == "euler") {
    if (d < 3) return fail(mz::kExitSchema, "euler pair needs --dim >= 3");
    rep = mz::exactness_check(mz::euler_A_operator(d), mz::euler_B_operator(d), trials, tol);
  } else {
    if (d < 1) return fail(mz::kExitSchema, "--dim must be positive");
    const auto [a, b] = mz::symgrad_pair(d);
    rep = mz::exactness_check(b, a, trials, tol);
  }
  std::cout << rep.to_json().dump(2) << "\n";
  if (!rep.passed()) return fail(mz::kExitInvariant, "exactness failed in " + std::to_string(rep.failures.size()) + " trials");
  return mz::kExitOk;
}

int cmd_profile(double eps) {
  if (!(eps > 0.0 && eps < 0.1)) return fail(mz::kExitSchema, "--epsilon must lie in (0, 0.1)");
  const mz::ProfileCertificate c = mz::make_profile(eps, 1.0).certify();
  nlohmann::ordered_json j;
  j["epsilon"] = c.epsilon;
  j["samples"] = c.samples;
  j["max_slope"] = c.max_slope;
  j["slope_bound"] = c.slope_bound;
  j["max_curvature"] = c.max_curvature;
  j["curvature_bound"] = c.curvature_bound;
  j["plateau_ok"] = c.plateau_ok;
  j["range_ok"] = c.range_ok;
  j["tail_ok"] = c.tail_ok;
  j["passed"] = c.passed();
  std::cout << j.dump(2) << "\n";
  if (!c.passed()) return fail(mz::kExitInvariant, "profile certificate failed");
  return mz::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncation of sequences with derivative constraints"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (overrides MZ_THREADS)")->check(CLI::NonNegativeNumber);

  std::string config, out_dir;
  auto* tr = app.add_subcommand("truncate", "Run a truncation experiment from a JSON config");
  tr->add_option("--config", config, "Config file")->required();
  tr->add_option("--out-dir", out_dir, "Output directory (a config 'output.dir' takes precedence)");

  int dim = 3, grid = 16;
  std::uint64_t seed = 0;
  std::string out, report;
  auto* eu = app.add_subcommand("euler-potential", "Apply the potential and verify the linear system");
  eu->add_option("--dim", dim, "Spatial dimension (3 or 4)")->required();
  eu->add_option("--grid", grid, "Nodes per axis")->required();
  eu->add_option("--seed", seed, "Seed")->required();
  eu->add_option("--out", out, "State field output (FLD1)");
  eu->add_option("--report", report, "JSON report output");

  std::string pair;
  int trials = 100;
  double tol = 1e-10;
  auto* sc = app.add_subcommand("symbol-check", "Pointwise exactness of a symbol pair");
  sc->add_option("--pair", pair, "euler or symgrad")->required()->check(CLI::IsMember({"euler", "symgrad"}));
  sc->add_option("--dim", dim, "Dimension")->required();
  sc->add_option("--trials", trials, "Random frequencies");
  sc->add_option("--tol", tol, "Tolerance");

  double eps = 0.05;
  auto* pc = app.add_subcommand("profile-cert", "Certify the radial mollification profile");
  pc->add_option("--epsilon", eps, "Profile height")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : mz::kExitSchema;
  }
  if (threads > 0) mz::set_worker_override(threads);

  try {
    if (*tr) return cmd_truncate(config, out_dir);
    if (*eu) return cmd_euler(dim, grid, seed, out, report);
    if (*sc) return cmd_symbol(pair, dim, trials, tol);
    if (*pc) return cmd_profile(eps);
  } catch (const mz::DivergenceError& e) {
    return fail(mz::kExitDivergence, e.what());
  } catch (const mz::InvalidArgument& e) {
    return fail(mz::kExitSchema, e.what());
  } catch (const mz::FormatError& e) {
    return fail(mz::kExitSchema, e.what());
  } catch (const std::exception& e) {
    return fail(mz::kExitInvariant, e.what());
  }
  return mz::kExitOk;
}
