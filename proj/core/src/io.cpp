#include "maxproj/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace maxproj::io {

using nlohmann::json;

namespace {

Field parse_field(const json& j, const std::string& ctx) {
  if (!j.is_string() || (j != "R" && j != "C"))
    fail(Errc::ParseError, ctx + ": field must be \"R\" or \"C\"");
  return j == "R" ? Field::Real : Field::Complex;
}

cplx parse_entry(const json& j, Field field, const std::string& ctx) {
  if (!j.is_array() || j.empty() || j.size() > 2)
    fail(Errc::ParseError, ctx + ": entry must be [re] or [re,im]");
  for (const auto& v : j)
    if (!v.is_number()) fail(Errc::ParseError, ctx + ": entry values must be numbers");
  if (field == Field::Real) {
    if (j.size() != 1) fail(Errc::ParseError, ctx + ": real document with complex entry");
    return cplx(j[0].get<double>(), 0.0);
  }
  if (j.size() != 2) fail(Errc::ParseError, ctx + ": complex document with real entry");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

KVector parse_vector(const json& j, Field field, int n, const std::string& ctx) {
  if (!j.is_array()) fail(Errc::ParseError, ctx + ": vector must be an array");
  if (static_cast<int>(j.size()) != n) fail(Errc::ParseError, ctx + ": vector of wrong dimension");
  std::vector<cplx> entries;
  for (std::size_t k = 0; k < j.size(); ++k)
    entries.push_back(parse_entry(j[k], field, ctx + "[" + std::to_string(k) + "]"));
  return KVector(field, std::move(entries));
}

json entry_json(cplx z, Field field) {
  json e = json::array();
  e.push_back(z.real());
  if (field == Field::Complex) e.push_back(z.imag());
  return e;
}

json vector_json(const KVector& v) {
  json a = json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(entry_json(v[i], v.field));
  return a;
}

json parse_file(const std::string& path) {
  std::string text = read_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::ParseError, path + ": invalid JSON");
  return j;
}

int parse_dim(const json& j, const std::string& ctx) {
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<int>() < 1)
    fail(Errc::ParseError, ctx + ": \"n\" must be a positive integer");
  return j["n"].get<int>();
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::ParseError, "cannot write " + path);
  out << contents;
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

WeightedFrame FrameDoc::as_weighted_frame() const {
  if (weights.empty()) fail(Errc::ParseError, "frame document has no weights");
  WeightedFrame f{field, n, vectors, weights};
  f.validate();
  return f;
}

FrameDoc load_frame(const std::string& path) {
  json j = parse_file(path);
  FrameDoc doc;
  if (!j.contains("field")) fail(Errc::ParseError, path + ": missing \"field\"");
  doc.field = parse_field(j["field"], path);
  doc.n = parse_dim(j, path);
  if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].empty())
    fail(Errc::ParseError, path + ": \"vectors\" must be a nonempty array");
  for (std::size_t k = 0; k < j["vectors"].size(); ++k)
    doc.vectors.push_back(
        parse_vector(j["vectors"][k], doc.field, doc.n, path + ":vectors[" + std::to_string(k) + "]"));
  if (j.contains("weights")) {
    if (!j["weights"].is_array() || j["weights"].size() != j["vectors"].size())
      fail(Errc::ParseError, path + ": \"weights\" must match \"vectors\" in length");
    for (const auto& w : j["weights"]) {
      if (!w.is_number()) fail(Errc::ParseError, path + ": weights must be numbers");
      doc.weights.push_back(w.get<double>());
    }
  }
  return doc;
}

void save_frame(const std::string& path, const FrameDoc& doc) {
  json j;
  j["field"] = doc.field == Field::Real ? "R" : "C";
  j["n"] = doc.n;
  j["vectors"] = json::array();
  for (const KVector& v : doc.vectors) j["vectors"].push_back(vector_json(v));
  if (!doc.weights.empty()) j["weights"] = doc.weights;
  write_file(path, j.dump(2) + "\n");
}

DualBallSpec load_ball(const std::string& path) {
  json j = parse_file(path);
  DualBallSpec ball;
  if (!j.contains("field")) fail(Errc::ParseError, path + ": missing \"field\"");
  ball.field = parse_field(j["field"], path);
  ball.n = parse_dim(j, path);
  if (!j.contains("functionals") || !j["functionals"].is_array() || j["functionals"].empty())
    fail(Errc::ParseError, path + ": \"functionals\" must be a nonempty array");
  for (std::size_t k = 0; k < j["functionals"].size(); ++k)
    ball.functionals.push_back(parse_vector(j["functionals"][k], ball.field, ball.n,
                                            path + ":functionals[" + std::to_string(k) + "]"));
  ball.validate();
  return ball;
}

void save_ball(const std::string& path, const DualBallSpec& ball) {
  json j;
  j["field"] = ball.field == Field::Real ? "R" : "C";
  j["n"] = ball.n;
  j["functionals"] = json::array();
  for (const KVector& f : ball.functionals) j["functionals"].push_back(vector_json(f));
  write_file(path, j.dump(2) + "\n");
}

KMatrix load_matrix(const std::string& path) {
  json j = parse_file(path);
  if (!j.contains("field")) fail(Errc::ParseError, path + ": missing \"field\"");
  Field field = parse_field(j["field"], path);
  if (!j.contains("rows") || !j.contains("cols") || !j["rows"].is_number_integer() ||
      !j["cols"].is_number_integer())
    fail(Errc::ParseError, path + ": matrix needs integer \"rows\" and \"cols\"");
  const int rows = j["rows"].get<int>(), cols = j["cols"].get<int>();
  if (rows < 1 || cols < 1) fail(Errc::ParseError, path + ": matrix dimensions must be positive");
  if (!j.contains("entries") || !j["entries"].is_array() ||
      static_cast<int>(j["entries"].size()) != rows * cols)
    fail(Errc::ParseError, path + ": \"entries\" must hold rows*cols row-major entries");
  KMatrix m(field, rows, cols);
  for (int i = 0; i < rows * cols; ++i)
    m.data[static_cast<std::size_t>(i)] =
        parse_entry(j["entries"][static_cast<std::size_t>(i)], field, path + ":entries");
  return m;
}

void save_matrix(const std::string& path, const KMatrix& m) {
  json j;
  j["field"] = m.field == Field::Real ? "R" : "C";
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["entries"] = json::array();
  for (const cplx& z : m.data) j["entries"].push_back(entry_json(z, m.field));
  write_file(path, j.dump(2) + "\n");
}

KVector load_point(const std::string& path) {
  json j = parse_file(path);
  if (!j.contains("field")) fail(Errc::ParseError, path + ": missing \"field\"");
  Field field = parse_field(j["field"], path);
  int n = parse_dim(j, path);
  if (!j.contains("vector")) fail(Errc::ParseError, path + ": missing \"vector\"");
  return parse_vector(j["vector"], field, n, path + ":vector");
}

void save_point(const std::string& path, const KVector& v) {
  json j;
  j["field"] = v.field == Field::Real ? "R" : "C";
  j["n"] = v.dim();
  j["vector"] = vector_json(v);
  write_file(path, j.dump(2) + "\n");
}

}  // namespace maxproj::io
