#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>

namespace numrange::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kAssertionFailure = 3,
  kNothingToSteer = 4,
  kTrackingCollision = 5,
};

struct InputOptions {
  std::string input;
  bool polar_fix = false;
  double unitarity_tol = 1e-10;
};

struct RangeOptions {
  InputOptions in;
  std::string out_dir = ".";
  int angles = 720;
};

struct SteerOptions {
  InputOptions in;
  std::string out_dir;
  double horizon = 2 * std::numbers::pi;
  double tol_t = 1e-3;
};

struct TrajectoryOptions {
  InputOptions in;
  std::string out_dir = ".";
  std::string p;
  std::string direction = "ccw";
  double t_end = 1.0;
  double max_step = 0.05;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  int trials = 100;
  std::string dims = "2-6";
  std::string out_dir;
};

struct ExampleOptions {
  std::string out_dir = ".";
  bool polar_fix = false;
  int angles = 720;
};

/// Each command writes its JSON report to `out` (and report.json in the
/// output directory when one is set), diagnostics to `err`, and returns the
/// process exit code. `echo` is the command line recorded in the report.
int run_range(const RangeOptions& o, const std::string& echo, std::ostream& out, std::ostream& err);
int run_steer(const SteerOptions& o, const std::string& echo, std::ostream& out, std::ostream& err);
int run_trajectory(const TrajectoryOptions& o, const std::string& echo, std::ostream& out, std::ostream& err);
int run_verify(const VerifyOptions& o, const std::string& echo, std::ostream& out, std::ostream& err);
int run_example(const ExampleOptions& o, const std::string& echo, std::ostream& out, std::ostream& err);

}  // namespace numrange::cli
