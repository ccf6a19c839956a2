#pragma once

#include <optional>
#include <string>

#include "maxproj/geometry.hpp"

namespace maxproj::io {

/// Shared frame document: {"field": "R"|"C", "n": int, "vectors": [[[re],..]
/// or [[re,im],..], ...], "weights": [t_1,...] optional}. Real entries are
/// single-element arrays.
struct FrameDoc {
  Field field = Field::Real;
  int n = 0;
  std::vector<KVector> vectors;
  std::vector<double> weights;  // empty when absent

  WeightedFrame as_weighted_frame() const;  // requires weights
};

FrameDoc load_frame(const std::string& path);
void save_frame(const std::string& path, const FrameDoc& doc);

DualBallSpec load_ball(const std::string& path);
void save_ball(const std::string& path, const DualBallSpec& ball);

/// {"field", "rows", "cols", "entries": [row-major entries]}
KMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const KMatrix& m);

/// {"field", "n", "vector": [entries]}
KVector load_point(const std::string& path);
void save_point(const std::string& path, const KVector& v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// FNV-1a digest of a file's bytes, for report provenance.
std::string digest_hex(const std::string& bytes);

}  // namespace maxproj::io
