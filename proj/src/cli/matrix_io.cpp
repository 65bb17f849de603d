#include "cli/matrix_io.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace numrange::cli {

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

double number_at(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(where + " is not finite");
  return x;
}

}  // namespace

MatrixFile parse_matrix_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports the offset one past the offending byte.
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("malformed JSON matrix file", line, column);
  }
  if (!doc.is_object()) throw ParseError("matrix file must be a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) throw ParseError("'dim' must be a positive integer");
  const long long dim = doc["dim"].get<long long>();
  if (dim < 1 || dim > 4096) throw ParseError("'dim' must be a positive integer");
  if (!doc.contains("entries") || !doc["entries"].is_array()) throw ParseError("'entries' must be an array");
  const auto& entries = doc["entries"];
  if (entries.size() != std::size_t(dim * dim)) {
    throw ParseError("'entries' has " + std::to_string(entries.size()) + " values, expected dim^2 = " +
                     std::to_string(dim * dim));
  }

  MatrixFile out;
  out.matrix.resize(dim, dim);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    const std::string where = "entries[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2) throw ParseError(where + " must be a [re, im] pair");
    out.matrix(Index(k) / dim, Index(k) % dim) = {number_at(e[0], where + "[0]"), number_at(e[1], where + "[1]")};
  }
  if (doc.contains("label") && doc["label"].is_string()) out.label = doc["label"].get<std::string>();
  if (doc.contains("source") && doc["source"].is_string()) out.source = doc["source"].get<std::string>();
  return out;
}

MatrixFile read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open matrix file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_json(buf.str());
}

nlohmann::json to_json(const MatrixFile& file) {
  const auto& m = file.matrix;
  nlohmann::json entries = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  }
  nlohmann::json doc;
  doc["dim"] = m.rows();
  doc["entries"] = std::move(entries);
  if (!file.label.empty()) doc["label"] = file.label;
  if (!file.source.empty()) doc["source"] = file.source;
  return doc;
}

std::string serialize(const MatrixFile& file) { return to_json(file).dump(2) + "\n"; }

void write_matrix_file(const std::filesystem::path& path, const MatrixFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << serialize(file);
}

std::string digest(const MatrixC<double>& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double x) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &x, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      mix(m(r, c).real());
      mix(m(r, c).imag());
    }
  }
  std::ostringstream s;
  s << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

MatrixC<double> polar_unitary(const MatrixC<double>& m) {
  Eigen::JacobiSVD<MatrixC<double>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace numrange::cli
