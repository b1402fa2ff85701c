#pragma once

// JSON encoding of matrices and pairs. Doubles round-trip exactly.
//   matrix: {"n": N, "re": [[...], ...], "im": [[...], ...]}
//   pair:   {"schema": 1, "A": matrix, "B": matrix}

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "frenkel/linalg.hpp"

namespace frenkel {

using Json = nlohmann::json;

class IoError : public Error {
 public:
  using Error::Error;
};

/// JSON has no infinity; +-inf and nan are written as strings.
inline Json json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline Json matrix_to_json(const Matrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array();
    Json ir = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"n", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline Json to_json(const HermitianMatrix& h) { return matrix_to_json(h.matrix()); }

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("re")) throw InvalidArgument("matrix JSON needs n and re");
  const Index n = j.at("n").get<Index>();
  if (n < 1) throw InvalidArgument("matrix JSON: n must be positive");
  const Json& re = j.at("re");
  const Json* im = j.contains("im") ? &j.at("im") : nullptr;
  auto check_rows = [n](const Json& a, const char* name) {
    if (!a.is_array() || static_cast<Index>(a.size()) != n)
      throw InvalidArgument(std::string("matrix JSON: ") + name + " must have n rows");
    for (const auto& row : a)
      if (!row.is_array() || static_cast<Index>(row.size()) != n)
        throw InvalidArgument(std::string("matrix JSON: ") + name + " rows must have n entries");
  };
  check_rows(re, "re");
  if (im) check_rows(*im, "im");
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k)
      m(i, k) = Complex(re[i][k].get<double>(), im ? (*im)[i][k].get<double>() : 0.0);
  return m;
}

/// Rejects inputs whose Hermitian defect exceeds 1e-12 relative.
inline HermitianMatrix hermitian_from_json(const Json& j) {
  HermitianMatrix h(matrix_from_json(j));
  if (h.relative_hermiticity_defect() > 1e-12) throw InvalidArgument("matrix JSON: input is not Hermitian");
  return h;
}

inline Json pair_to_json(const HermitianMatrix& a, const HermitianMatrix& b) {
  return {{"schema", 1}, {"A", to_json(a)}, {"B", to_json(b)}};
}

inline std::pair<HermitianMatrix, HermitianMatrix> pair_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("B")) throw InvalidArgument("pair JSON needs A and B");
  if (j.contains("schema") && j.at("schema") != 1) throw InvalidArgument("pair JSON: unsupported schema");
  HermitianMatrix a = hermitian_from_json(j.at("A"));
  HermitianMatrix b = hermitian_from_json(j.at("B"));
  require_same_dim(a, b, "pair JSON");
  return {std::move(a), std::move(b)};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

inline std::pair<HermitianMatrix, HermitianMatrix> read_pair(const std::string& path) {
  try {
    return pair_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

inline void write_pair(const std::string& path, const HermitianMatrix& a, const HermitianMatrix& b) {
  write_text_file(path, pair_to_json(a, b).dump(1) + "\n");
}

}  // namespace frenkel
