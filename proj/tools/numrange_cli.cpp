// numrange: numerical ranges of complex matrices and diagonal-phase steering
// of unitary numerical ranges towards the origin.

#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

void add_input(CLI::App* cmd, numrange::cli::InputOptions& in) {
  cmd->add_option("--input", in.input, "Matrix file (JSON)")->required();
  cmd->add_flag("--polar-fix", in.polar_fix, "Replace the input by its nearest unitary (polar factor)");
  cmd->add_option("--unitarity-tol", in.unitarity_tol, "Accepted ||U^+U - 1||")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace numrange::cli;

  std::string echo;
  for (int i = 0; i < argc; ++i) echo += (i ? " " : "") + std::string(i == 0 ? "numrange" : argv[i]);

  CLI::App app{"Numerical range computation and unitary steering"};
  app.require_subcommand(1);

  RangeOptions range;
  auto* c_range = app.add_subcommand("range", "Sample W(A); write boundary.csv and range.svg");
  add_input(c_range, range.in);
  c_range->add_option("--out-dir", range.out_dir, "Output directory")->capture_default_str();
  c_range->add_option("--angles", range.angles, "Angle grid size")->capture_default_str();

  SteerOptions steer;
  auto* c_steer = app.add_subcommand("steer", "Plan a one-hot diagonal phase that brings 0 into W(U)");
  add_input(c_steer, steer.in);
  c_steer->add_option("--out-dir", steer.out_dir, "Also write report.json here");
  c_steer->add_option("--horizon", steer.horizon, "Largest t searched")->capture_default_str();
  c_steer->add_option("--tol-t", steer.tol_t, "Bisection width for t*")->capture_default_str();

  TrajectoryOptions traj;
  auto* c_traj = app.add_subcommand("trajectory", "Track the eigenvalues of U V(t); write trajectory.csv");
  add_input(c_traj, traj.in);
  c_traj->add_option("--out-dir", traj.out_dir, "Output directory")->capture_default_str();
  c_traj->add_option("--p", traj.p, "Probability vector, comma separated")->required();
  c_traj->add_option("--direction", traj.direction, "ccw or cw")->capture_default_str();
  c_traj->add_option("--t-end", traj.t_end, "Final time")->capture_default_str();
  c_traj->add_option("--max-step", traj.max_step, "Largest tracking step")->capture_default_str();

  VerifyOptions ver;
  auto* c_verify = app.add_subcommand("verify", "Randomized checks of the eigenvalue-motion postulates");
  c_verify->add_option("--seed", ver.seed, "Random seed")->capture_default_str();
  c_verify->add_option("--trials", ver.trials, "Trials per check")->capture_default_str();
  c_verify->add_option("--dims", ver.dims, "Dimensions, e.g. 2-6 or 2,3,8")->capture_default_str();
  c_verify->add_option("--out-dir", ver.out_dir, "Also write report.json here");

  ExampleOptions ex;
  auto* c_example = app.add_subcommand("example", "Run the embedded 3x3 reference instance end to end");
  c_example->add_option("--out-dir", ex.out_dir, "Output directory")->capture_default_str();
  c_example->add_option("--angles", ex.angles, "Angle grid for figures")->capture_default_str();
  c_example->add_flag("--polar-fix", ex.polar_fix, "Orthonormalize the fixture before use");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }

  if (*c_range) return run_range(range, echo, std::cout, std::cerr);
  if (*c_steer) return run_steer(steer, echo, std::cout, std::cerr);
  if (*c_traj) return run_trajectory(traj, echo, std::cout, std::cerr);
  if (*c_verify) return run_verify(ver, echo, std::cout, std::cerr);
  return run_example(ex, echo, std::cout, std::cerr);
}
