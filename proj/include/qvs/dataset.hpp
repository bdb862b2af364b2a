#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qvs/geometry.hpp"

namespace qvs {

// In-memory image of a dataset file: feature columns x0..x{d-1} plus an
// optional binary label column and an optional real value column.
struct Dataset {
  std::vector<Point> points;
  std::optional<std::vector<int>> labels;
  std::optional<std::vector<double>> values;

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return points.empty() ? 0 : points[0].dim(); }
};

// Strict CSV reader; malformed input raises std::invalid_argument with a
// 1-based line number.
Dataset load_dataset_csv(const std::string& path);

// Writes the header row plus one %.17g-formatted row per point, so a reload
// reproduces the exact in-memory values.
void write_dataset_csv(const std::string& path, const Dataset& dataset);

// %.17g (round-trip precision), shared by every CSV writer.
std::string format_double(double v);

}  // namespace qvs
