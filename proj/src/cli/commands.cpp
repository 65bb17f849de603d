#include "cli/commands.hpp"

#include "cli/matrix_io.hpp"
#include "cli/plots.hpp"
#include "numrange/fixtures.hpp"
#include "numrange/steering.hpp"
#include "numrange/verify.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

namespace numrange::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json complex_list(const VectorC<double>& v) {
  json a = json::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back({v(k).real(), v(k).imag()});
  return a;
}

json real_list(const VectorR<double>& v) {
  json a = json::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

json real_rows(const MatrixR<double>& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) rows.push_back(real_list(m.row(r).transpose()));
  return rows;
}

json input_block(const MatrixFile& f) {
  return {{"label", f.label}, {"source", f.source}, {"dim", f.matrix.rows()}, {"digest", digest(f.matrix)}};
}

MatrixFile load(const InputOptions& in) {
  if (in.input.empty()) throw ParseError("--input is required");
  MatrixFile f = read_matrix_file(in.input);
  require_square_finite(f.matrix);
  if (in.polar_fix) f.matrix = polar_unitary(f.matrix);
  return f;
}

void emit(const json& report, const std::string& out_dir, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "report.json", text);
  }
}

void emit_timing(double seconds, const std::string& out_dir, std::ostream& err) {
  err << "wall time: " << seconds << " s\n";
  if (!out_dir.empty()) write_text(fs::path(out_dir) / "timing.json", json{{"wall_time_s", seconds}}.dump(2) + "\n");
}

// Runs a command body, mapping library errors onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const InvalidMatrix& e) {
    err << "invalid input: " << e.what() << '\n';
    return kParseError;
  } catch (const NothingToSteer& e) {
    err << e.what() << '\n';
    return kNothingToSteer;
  } catch (const TrackingCollision& e) {
    err << e.what() << '\n';
    return kTrackingCollision;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kParseError;
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

VectorR<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParseError("cannot parse '" + item + "' as a number in --p");
    }
    if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ParseError("cannot parse '" + item + "' as a number in --p");
    }
    values.push_back(x);
  }
  if (values.empty()) throw ParseError("--p is empty");
  return Eigen::Map<VectorR<double>>(values.data(), Index(values.size()));
}

std::vector<Index> parse_dims(const std::string& text) {
  std::vector<Index> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        dims.push_back(std::stol(item));
      } else {
        const long lo = std::stol(item.substr(0, dash)), hi = std::stol(item.substr(dash + 1));
        for (long d = lo; d <= hi; ++d) dims.push_back(d);
      }
    } catch (const std::exception&) {
      throw ParseError("cannot parse --dims '" + text + "'");
    }
  }
  if (dims.empty()) throw ParseError("--dims is empty");
  for (Index d : dims) {
    if (d < 2 || d > 64) throw ParseError("--dims entries must lie in [2, 64]");
  }
  return dims;
}

json plan_json(const SteeringPlan<double>& p) {
  const auto& c = p.choice;
  json j;
  j["eigenvalues"] = complex_list(p.eigen.values);
  j["speed_profile"] = real_rows(p.profile.s);
  j["p"] = real_list(c.generator.p());
  j["direction"] = std::string(to_string(c.generator.direction()));
  j["column"] = c.column;
  j["target_gap"] = {c.target_gap.first, c.target_gap.second};
  j["gap_width"] = c.gap_width;
  j["closing_rate"] = c.closing_rate;
  j["first_order_time"] = c.predicted_time;
  j["ccw_only_column"] = c.ccw_only_column;
  j["selection_readings_agree"] = c.ccw_only_column == c.column && c.generator.direction() == Direction::counterclockwise;
  j["t_star"] = p.t_star ? json(*p.t_star) : json(nullptr);
  j["perturbation_norm"] = p.perturbation_norm ? json(*p.perturbation_norm) : json(nullptr);
  j["verdict"] = std::string(to_string(p.verdict));
  return j;
}

// Writes boundary_<tag>.csv and range_<tag>.svg for the matrix.
json write_figure(const MatrixC<double>& a, int angles, const fs::path& dir, const std::string& tag,
                  const std::string& title) {
  const auto prof = support_profile<double>(a, angles);
  fs::create_directories(dir);
  const std::string csv = tag.empty() ? "boundary.csv" : "boundary_" + tag + ".csv";
  const std::string svg = tag.empty() ? "range.svg" : "range_" + tag + ".svg";
  write_text(dir / csv, boundary_csv(prof));
  write_text(dir / svg, range_svg(prof, display_eigenvalues(a), title));
  return {{"csv", csv}, {"svg", svg}};
}

}  // namespace

int run_range(const RangeOptions& o, const std::string& echo, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    const auto f = load(o.in);
    if (o.angles < 16) throw std::invalid_argument("--angles must be at least 16");
    json report;
    report["command"] = echo;
    report["input"] = input_block(f);
    report["tolerances"] = {{"angles", o.angles}, {"membership_angles", 2048}, {"unitarity", o.in.unitarity_tol}};
    json outputs;
    outputs["files"] = write_figure(f.matrix, o.angles, o.out_dir, "", f.label.empty() ? "W(A)" : "W(" + f.label + ")");
    const auto member = zero_membership<double>(f.matrix, 2048);
    outputs["contains_zero"] = std::string(to_string(member.verdict));
    outputs["min_support"] = member.min_support;
    outputs["distance_to_zero"] = member.verdict == Membership::outside ? -member.min_support : 0.0;
    if (UnitaryMatrix<double>::unitarity_defect(f.matrix) <= o.in.unitarity_tol) {
      const auto es = unitary_eig(UnitaryMatrix<double>(f.matrix, o.in.unitarity_tol));
      json poly = json::array();
      for (auto z : unitary_range_polygon(es).vertices) poly.push_back({z.real(), z.imag()});
      outputs["polygon"] = poly;
      outputs["gap_test"] = std::string(to_string(contains_zero_unitary(es)));
    }
    report["outputs"] = outputs;
    emit(report, o.out_dir, out);
    emit_timing(seconds_since(start), o.out_dir, err);
    return int(kOk);
  });
}

int run_steer(const SteerOptions& o, const std::string& echo, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    const auto f = load(o.in);
    const UnitaryMatrix<double> u(f.matrix, o.in.unitarity_tol);
    const auto p = plan(u, o.horizon, o.tol_t);
    json report;
    report["command"] = echo;
    report["input"] = input_block(f);
    report["tolerances"] = {{"horizon", o.horizon}, {"tol_t", o.tol_t}, {"unitarity", o.in.unitarity_tol},
                            {"membership_angles", 2048}, {"scan_points", kScanPoints}};
    report["outputs"] = {{"plan", plan_json(p)}};
    emit(report, o.out_dir, out);
    emit_timing(seconds_since(start), o.out_dir, err);
    return int(kOk);
  });
}

int run_trajectory(const TrajectoryOptions& o, const std::string& echo, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    const auto f = load(o.in);
    const UnitaryMatrix<double> u(f.matrix, o.in.unitarity_tol);
    if (o.p.empty()) throw ParseError("--p is required");
    const VectorR<double> pv = parse_list(o.p);
    if (pv.size() != u.dim()) throw ParseError("--p has " + std::to_string(pv.size()) + " entries, matrix dim is " +
                                               std::to_string(u.dim()));
    const PerturbationGenerator<double> g(pv, parse_direction(o.direction));
    const auto rec = track_trajectory(u, g, o.t_end, o.max_step);
    fs::create_directories(o.out_dir);
    write_text(fs::path(o.out_dir) / "trajectory.csv", trajectory_csv(rec));

    json report;
    report["command"] = echo;
    report["input"] = input_block(f);
    report["tolerances"] = {{"t_end", o.t_end}, {"max_step", o.max_step}, {"unitarity", o.in.unitarity_tol}};
    report["outputs"] = {{"file", "trajectory.csv"},
                         {"steps", rec.size()},
                         {"initial_speeds", real_list(rec.initial_speeds())},
                         {"first_order_horizon", real_list(first_order_horizon(rec))},
                         {"final_eigenvalues", complex_list(rec.steps.back().values)}};
    emit(report, o.out_dir, out);
    emit_timing(seconds_since(start), o.out_dir, err);
    return int(kOk);
  });
}

int run_verify(const VerifyOptions& o, const std::string& echo, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    if (o.trials < 0) throw std::invalid_argument("--trials must be nonnegative");
    verify::Options opt{o.seed, o.trials, parse_dims(o.dims)};
    if (o.trials == 0) err << "warning: --trials 0, every check passes vacuously\n";
    const auto checks = verify::postulate_suite(opt);
    bool all = true;
    json rows = json::array();
    for (const auto& c : checks) {
      all = all && c.passed();
      rows.push_back({{"name", c.name},
                      {"claim", c.claim},
                      {"trials", c.trials},
                      {"failures", c.failures},
                      {"failed_trials", c.failed},
                      {"worst", c.worst},
                      {"tolerance", c.tolerance},
                      {"pass", c.passed()}});
      err << (c.passed() ? "PASS " : "FAIL ") << c.name << "  trials=" << c.trials << " failures=" << c.failures
          << " worst=" << c.worst << '\n';
    }
    json report;
    report["command"] = echo;
    report["tolerances"] = {{"seed", o.seed}, {"trials", o.trials}, {"dims", opt.dims}};
    report["outputs"] = {{"checks", rows}, {"all_pass", all}};
    emit(report, o.out_dir, out);
    emit_timing(seconds_since(start), o.out_dir, err);
    return all ? int(kOk) : int(kAssertionFailure);
  });
}

int run_example(const ExampleOptions& o, const std::string& echo, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    MatrixFile f{fixtures::reference_matrix(), "U", "embedded reference fixture v" + std::to_string(fixtures::kReferenceVersion)};
    double tol = fixtures::kReferenceUnitarityTol;
    if (o.polar_fix) {
      f.matrix = polar_unitary(f.matrix);
      tol = 1e-10;
    }
    const UnitaryMatrix<double> u(f.matrix, tol);
    const auto p = plan(u, 2 * std::numbers::pi, 1e-3);

    json checks = json::array();
    bool all = true;
    auto check = [&](const std::string& name, bool ok, json value, json expected) {
      all = all && ok;
      checks.push_back({{"name", name}, {"pass", ok}, {"value", value}, {"expected", expected}});
      if (!ok) err << "assertion failed: " << name << '\n';
    };

    // Rows of the computed profile matched to the published rows as a set.
    const MatrixR<double> ref = fixtures::reference_speed_profile();
    MatrixR<double> cost(3, 3);
    for (Index r = 0; r < 3; ++r) {
      for (Index q = 0; q < 3; ++q) cost(r, q) = (p.profile.s.row(r) - ref.row(q)).cwiseAbs().maxCoeff();
    }
    const auto match = min_cost_assignment<double>(cost);
    double worst_row = 0;
    json row_map = json::array();
    for (Index r = 0; r < 3; ++r) {
      worst_row = std::max(worst_row, cost(r, match[std::size_t(r)]));
      row_map.push_back(match[std::size_t(r)]);
    }
    check("speed_profile", worst_row <= 1e-4, worst_row, 1e-4);

    const VectorR<double> want_p = VectorR<double>::Unit(3, fixtures::kReferenceColumn);
    check("p", p.generator().p() == want_p, real_list(p.generator().p()), real_list(want_p));
    check("direction", p.direction() == Direction::clockwise, std::string(to_string(p.direction())), "cw");
    const bool t_ok = p.t_star && *p.t_star >= fixtures::kReferenceTStarLow && *p.t_star <= fixtures::kReferenceTStarHigh;
    check("t_star", t_ok, p.t_star ? json(*p.t_star) : json(nullptr),
          {fixtures::kReferenceTStarLow, fixtures::kReferenceTStarHigh});

    const auto snapshot = perturbed_unitary(u, p.generator(), fixtures::kReferenceSnapshotTime);
    const auto snap_verdict = contains_zero_general<double>(snapshot.matrix(), 2048);
    check("contains_zero_at_1.5", snap_verdict == Membership::inside, std::string(to_string(snap_verdict)), "inside");

    if (p.t_star) {
      const MatrixC<double> gap = MatrixC<double>::Identity(3, 3) - MatrixC<double>(p.generator().phases(*p.t_star).asDiagonal());
      const double direct = schatten_inf(gap);
      const double closed = 2 * std::sin(*p.t_star / 2);
      check("perturbation_norm", std::abs(direct - *p.perturbation_norm) <= 1e-10 &&
                                     std::abs(closed - *p.perturbation_norm) <= 1e-12,
            *p.perturbation_norm, closed);
    }

    json figures;
    figures["U"] = write_figure(u.matrix(), o.angles, o.out_dir, "U", "W(U)");
    figures["UV1.5"] = write_figure(snapshot.matrix(), o.angles, o.out_dir, "UV1.5", "W(UV(1.5)^+)");

    json report;
    report["command"] = echo;
    report["input"] = input_block(f);
    report["tolerances"] = {{"unitarity", tol}, {"horizon", 2 * std::numbers::pi}, {"tol_t", 1e-3},
                            {"membership_angles", 2048}, {"profile_match", 1e-4}};
    report["outputs"] = {{"plan", plan_json(p)},
                         {"profile_row_match", row_map},
                         {"figures", figures},
                         {"checks", checks},
                         {"all_pass", all}};
    emit(report, o.out_dir, out);
    emit_timing(seconds_since(start), o.out_dir, err);
    return all ? int(kOk) : int(kAssertionFailure);
  });
}

}  // namespace numrange::cli
