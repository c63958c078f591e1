// mvsim command-line driver.
//
//   mvsim run <config> [--out dir]
//   mvsim verify <config> [--refine] [--out dir]
//   mvsim sweep <config> --eps 1e-1,1e-2,1e-3 [--out dir]
//   mvsim converge <config> --levels 3 [--out dir]
//
// Exit codes: 0 ok, 2 configuration, 3 solver, 4 verification, 1 other.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "mvsim/config.hpp"
#include "mvsim/errors.hpp"
#include "mvsim/simulation.hpp"
#include "mvsim/studies.hpp"

using namespace mvsim;

namespace {

constexpr int kConfig = 2;
constexpr int kSolver = 3;
constexpr int kVerify = 4;

RunConfig load(const std::string& path, const std::string& out) {
  RunConfig c = load_config(path);
  if (!out.empty()) c.out_dir = out;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mvsim: 2D magnetoviscoelastic flow simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  bool refine = false;
  std::vector<double> eps_list;
  int levels = 3;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "configuration file (key = value)")->required();
    sub->add_option("--out", out_dir, "output directory (overrides out_dir)");
  };
  CLI::App* run = app.add_subcommand("run", "run one simulation");
  add_common(run);
  CLI::App* verify = app.add_subcommand("verify", "LLG form equivalence and transport vs characteristics");
  add_common(verify);
  verify->add_flag("--refine", refine, "repeat on the doubled grid and check the residuals shrink");
  CLI::App* sw = app.add_subcommand("sweep", "penalty sweep over eps");
  add_common(sw);
  sw->add_option("--eps", eps_list, "eps values")->required()->delimiter(',');
  CLI::App* conv = app.add_subcommand("converge", "observed orders of the sub-steppers");
  add_common(conv);
  conv->add_option("--levels", levels, "refinement levels (3 or 4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kConfig;
  }

  try {
    const RunConfig c = load(config_path, out_dir);
    if (run->parsed()) {
      const RunResult r = run_simulation(c);
      std::cout << r.summary << '\n';
      return 0;
    }
    if (verify->parsed()) {
      const StudyReport rep = run_verification(c, refine);
      rep.print(std::cout);
      return rep.pass() ? 0 : kVerify;
    }
    if (sw->parsed()) {
      const SweepResult r = sweep(c, eps_list, &std::cout);
      (void)r;
      return 0;
    }
    if (conv->parsed()) {
      const std::vector<OrderStudy> st = convergence_study(c, levels, &std::cout);
      for (const OrderStudy& s : st)
        if (!s.pass()) return kVerify;
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kVerify;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
