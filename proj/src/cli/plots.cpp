#include "cli/plots.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace numrange::cli {

namespace {

std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fixed4(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  std::string s = buf;
  return s == "-0.0000" ? "0.0000" : s;
}

}  // namespace

std::string boundary_csv(const SupportProfile<double>& profile) {
  std::ostringstream out;
  out << "theta,h,re_z,im_z\n";
  for (Index k = 0; k < profile.size(); ++k) {
    out << num17(profile.angles(k)) << ',' << num17(profile.support(k)) << ',' << num17(profile.boundary(k).real())
        << ',' << num17(profile.boundary(k).imag()) << '\n';
  }
  return out.str();
}

std::string trajectory_csv(const TrajectoryRecord<double>& rec) {
  std::ostringstream out;
  out << "t,j,re,im,speed\n";
  for (const auto& s : rec.steps) {
    for (Index j = 0; j < s.values.size(); ++j) {
      out << num17(s.t) << ',' << j << ',' << num17(s.values(j).real()) << ',' << num17(s.values(j).imag()) << ','
          << num17(s.speeds(j)) << '\n';
    }
  }
  return out.str();
}

std::vector<std::complex<double>> display_eigenvalues(const MatrixC<double>& a) {
  Eigen::ComplexEigenSolver<MatrixC<double>> solver(a, false);
  std::vector<std::complex<double>> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + a.rows());
  std::sort(ev.begin(), ev.end(), [](auto x, auto y) {
    return principal_argument(x) != principal_argument(y) ? principal_argument(x) < principal_argument(y)
                                                          : std::abs(x) < std::abs(y);
  });
  return ev;
}

std::string range_svg(const SupportProfile<double>& profile, const std::vector<std::complex<double>>& eigenvalues,
                      const std::string& title) {
  double extent = 1.0;
  for (Index k = 0; k < profile.size(); ++k) extent = std::max(extent, std::abs(profile.boundary(k)));
  for (auto z : eigenvalues) extent = std::max(extent, std::abs(z));
  extent *= 1.15;

  constexpr double size = 480;
  const double scale = size / (2 * extent);
  auto px = [&](double x) { return fixed4(size / 2 + x * scale); };
  auto py = [&](double y) { return fixed4(size / 2 - y * scale); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 30
      << "\" viewBox=\"0 0 " << size << ' ' << size + 30 << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << size / 2 << "\" y=\"" << size + 20
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" << title << "</text>\n";
  // axes
  svg << "  <line x1=\"0\" y1=\"" << py(0) << "\" x2=\"" << size << "\" y2=\"" << py(0)
      << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
  svg << "  <line x1=\"" << px(0) << "\" y1=\"0\" x2=\"" << px(0) << "\" y2=\"" << size
      << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
  svg << "  <circle cx=\"" << px(0) << "\" cy=\"" << py(0) << "\" r=\"" << fixed4(scale)
      << "\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";

  svg << "  <polygon points=\"";
  std::complex<double> last(std::nan(""), 0);
  bool first = true;
  for (Index k = 0; k < profile.size(); ++k) {
    const auto z = profile.boundary(k);
    if (std::abs(z - last) * scale < 0.05) continue;
    svg << (first ? "" : " ") << px(z.real()) << ',' << py(z.imag());
    first = false;
    last = z;
  }
  svg << "\" fill=\"#4a90d9\" fill-opacity=\"0.35\" stroke=\"#1f5fa8\" stroke-width=\"1.5\"/>\n";

  for (auto z : eigenvalues) {
    svg << "  <circle cx=\"" << px(z.real()) << "\" cy=\"" << py(z.imag())
        << "\" r=\"4\" fill=\"#d9534f\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  }
  const double cross = 8;
  svg << "  <line x1=\"" << fixed4(size / 2 - cross) << "\" y1=\"" << py(0) << "\" x2=\"" << fixed4(size / 2 + cross)
      << "\" y2=\"" << py(0) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  svg << "  <line x1=\"" << px(0) << "\" y1=\"" << fixed4(size / 2 - cross) << "\" x2=\"" << px(0) << "\" y2=\""
      << fixed4(size / 2 + cross) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace numrange::cli
