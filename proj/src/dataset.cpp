#include "qvs/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qvs {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

[[noreturn]] void fail_at(std::size_t line_no, const std::string& message) {
  throw std::invalid_argument("dataset line " + std::to_string(line_no) + ": " + message);
}

double parse_field(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) fail_at(line_no, "cannot parse '" + field + "' as a number");
  if (!std::isfinite(v)) fail_at(line_no, "non-finite value '" + field + "'");
  return v;
}

}  // namespace

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("dataset: cannot open '" + path + "'");

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset: '" + path + "' is empty");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_csv_line(line);
  std::size_t dim = 0;
  while (dim < header.size() && header[dim] == "x" + std::to_string(dim)) ++dim;
  if (dim == 0) fail_at(1, "header must start with feature columns x0, x1, ...");
  std::size_t col = dim;
  bool has_label = false, has_value = false;
  if (col < header.size() && header[col] == "label") {
    has_label = true;
    ++col;
  }
  if (col < header.size() && header[col] == "value") {
    has_value = true;
    ++col;
  }
  if (col != header.size()) fail_at(1, "unexpected column '" + header[col] + "'");

  Dataset ds;
  if (has_label) ds.labels.emplace();
  if (has_value) ds.values.emplace();

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      fail_at(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    Point p{std::vector<double>(dim)};
    for (std::size_t i = 0; i < dim; ++i) p[i] = parse_field(fields[i], line_no);
    ds.points.push_back(std::move(p));
    std::size_t f = dim;
    if (has_label) {
      const double y = parse_field(fields[f++], line_no);
      if (y != 0.0 && y != 1.0) fail_at(line_no, "label must be 0 or 1");
      ds.labels->push_back(static_cast<int>(y));
    }
    if (has_value) ds.values->push_back(parse_field(fields[f++], line_no));
  }
  if (ds.points.empty()) throw std::invalid_argument("dataset: '" + path + "' has no data rows");
  return ds;
}

void write_dataset_csv(const std::string& path, const Dataset& dataset) {
  if (dataset.points.empty()) throw std::invalid_argument("dataset: nothing to write");
  const std::size_t dim = dataset.dim();
  for (const Point& p : dataset.points) {
    if (p.dim() != dim) throw std::invalid_argument("dataset: points have mixed dimensions");
  }
  if (dataset.labels && dataset.labels->size() != dataset.size()) {
    throw std::invalid_argument("dataset: label column length mismatch");
  }
  if (dataset.values && dataset.values->size() != dataset.size()) {
    throw std::invalid_argument("dataset: value column length mismatch");
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("dataset: cannot write '" + path + "'");
  for (std::size_t i = 0; i < dim; ++i) out << (i ? "," : "") << "x" << i;
  if (dataset.labels) out << ",label";
  if (dataset.values) out << ",value";
  out << "\n";
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const Point& p = dataset.points[r];
    for (std::size_t i = 0; i < dim; ++i) out << (i ? "," : "") << format_double(p[i]);
    if (dataset.labels) out << "," << (*dataset.labels)[r];
    if (dataset.values) out << "," << format_double((*dataset.values)[r]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("dataset: write failed for '" + path + "'");
}

}  // namespace qvs
