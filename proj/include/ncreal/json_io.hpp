#ifndef NCREAL_JSON_IO_HPP
#define NCREAL_JSON_IO_HPP

#include <ncreal/realization.hpp>

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace ncreal {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rat& x) { return to_string(x); }

inline Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(std::to_string(j.get<long long>()));
  if (j.is_string()) return parse_rat(j.get<std::string>());
  throw InputError("expected a rational as \"p/q\" string or integer, got " + j.dump());
}

/// Matrices are arrays of row arrays.
inline Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Reads a matrix. Expected dimensions, when given, are checked and also
/// supply the shape of empty matrices ([] for 0 x c, [[], ...] for r x 0).
inline Mat mat_from_json(const Json& j, std::optional<std::size_t> rows = {}, std::optional<std::size_t> cols = {}) {
  if (!j.is_array()) throw InputError("expected a matrix (array of rows), got " + j.dump());
  const std::size_t r = j.size();
  std::size_t c = r ? (j[0].is_array() ? j[0].size() : 0) : cols.value_or(0);
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c) throw InputError("matrix rows must be arrays of equal length");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = rat_from_json(j[i][k]);
  }
  if (r == 0 && rows.value_or(0) == 0) return Mat(0, cols.value_or(0));
  if ((rows && *rows != r) || (cols && *cols != c))
    throw InputError("matrix has shape " + m.shape() + ", expected " + std::to_string(rows.value_or(r)) + "x" +
                     std::to_string(cols.value_or(c)));
  return m;
}

inline Json to_json(const MatTuple& x) {
  Json a = Json::array();
  for (const auto& m : x) a.push_back(to_json(m));
  return a;
}

/// A point or centre: array of square matrices of one size.
inline MatTuple tuple_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("expected a nonempty array of matrices");
  std::vector<Mat> mats;
  for (const auto& m : j) mats.push_back(mat_from_json(m));
  try {
    return MatTuple(std::move(mats));
  } catch (const ShapeError& e) {
    throw InputError(e.what());
  }
}

inline Json to_json(const FMRealization& r) {
  Json j;
  j["d"] = r.d;
  j["s"] = r.s;
  j["L"] = r.L;
  j["Y"] = to_json(r.centre());
  j["D"] = to_json(r.D);
  j["C"] = to_json(r.C);
  auto maps = [](const std::vector<BlockLinearMap>& ts) {
    Json a = Json::array();
    for (const auto& t : ts) {
      Json imgs = Json::array();
      for (const auto& m : t.images()) imgs.push_back(to_json(m));
      a.push_back(std::move(imgs));
    }
    return a;
  };
  j["A"] = maps(r.A);
  j["B"] = maps(r.B);
  return j;
}

inline FMRealization realization_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("realization must be a JSON object");
  for (const char* key : {"d", "s", "L", "Y", "D", "C", "A", "B"})
    if (!j.contains(key)) throw InputError(std::string("realization is missing \"") + key + "\"");
  for (const char* key : {"d", "s", "L"})
    if (!j[key].is_number_unsigned()) throw InputError(std::string("\"") + key + "\" must be a nonnegative integer");
  FMRealization r;
  r.d = j["d"].get<std::size_t>();
  r.s = j["s"].get<std::size_t>();
  r.L = j["L"].get<std::size_t>();
  if (r.s == 0) throw InputError("s must be positive");
  if (!j["Y"].is_array() || j["Y"].size() != r.d) throw InputError("\"Y\" must list d matrices");
  for (const auto& y : j["Y"]) r.Y.push_back(mat_from_json(y, r.s, r.s));
  r.D = mat_from_json(j["D"], r.s, r.s);
  r.C = mat_from_json(j["C"], r.s, r.L);
  auto maps = [&](const Json& a, const char* name, std::size_t rows, std::size_t cols) {
    if (!a.is_array() || a.size() != r.d) throw InputError(std::string("\"") + name + "\" must list d maps");
    std::vector<BlockLinearMap> out;
    for (const auto& t : a) {
      if (!t.is_array() || t.size() != r.s * r.s)
        throw InputError(std::string("each map in \"") + name + "\" needs s^2 basis images");
      std::vector<Mat> imgs;
      for (const auto& m : t) imgs.push_back(mat_from_json(m, rows, cols));
      out.emplace_back(r.s, rows, cols, std::move(imgs));
    }
    return out;
  };
  r.A = maps(j["A"], "A", r.L, r.L);
  r.B = maps(j["B"], "B", r.L, r.s);
  r.validate();
  return r;
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(origin + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

}  // namespace ncreal

#endif  // NCREAL_JSON_IO_HPP
