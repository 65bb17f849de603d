#pragma once

#include "numrange/perturb.hpp"
#include "numrange/range.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace numrange::cli {

/// theta,h,re_z,im_z with 17 significant digits.
std::string boundary_csv(const SupportProfile<double>& profile);

/// t,j,re,im,speed with one row per (step, path).
std::string trajectory_csv(const TrajectoryRecord<double>& rec);

/// Standalone SVG: unit circle, boundary polygon of W(A), eigenvalue markers
/// and a crosshair at the origin.
std::string range_svg(const SupportProfile<double>& profile, const std::vector<std::complex<double>>& eigenvalues,
                      const std::string& title);

/// Eigenvalues of an arbitrary square matrix sorted by principal argument
/// (display only).
std::vector<std::complex<double>> display_eigenvalues(const MatrixC<double>& a);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace numrange::cli
