#include "qvs/vendi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qvs {

namespace {
constexpr double kShannonWindow = 1e-9;   // |q - 1| below this routes to Shannon
constexpr double kRankThreshold = 1e-10;  // normalized eigenvalues above count toward VS_0
}  // namespace

Order Order::finite(double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) {
    throw std::invalid_argument("Order: q must be a finite value >= 0");
  }
  return Order(q, false);
}

Order Order::infinity() { return Order(0.0, true); }

Order Order::parse(std::string_view token) {
  if (token == "inf" || token == "infinity") return infinity();
  try {
    std::size_t used = 0;
    const std::string s(token);
    const double q = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return finite(q);
  } catch (const std::exception&) {
    throw std::invalid_argument("Order: cannot parse q token '" + std::string(token) +
                                "' (expected a number >= 0 or 'inf')");
  }
}

bool Order::is_shannon() const { return !infinite_ && std::abs(q_ - 1.0) <= kShannonWindow; }

double Order::value() const {
  if (infinite_) throw std::logic_error("Order: infinite order has no finite value");
  return q_;
}

std::string Order::str() const {
  if (infinite_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", q_);
  return buf;
}

void ScoredSet::validate() const {
  if (items.size() != scores.size()) {
    throw std::invalid_argument("ScoredSet: items and scores differ in length");
  }
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
      throw std::invalid_argument("ScoredSet: scores must be finite and within [0, 1]");
    }
  }
}

double vendi_score_from_normalized(std::span<const double> normalized, Order order) {
  const std::size_t n = normalized.size();
  if (n == 0) return 0.0;

  if (order.is_zero()) {
    std::size_t count = 0;
    for (double v : normalized) {
      if (v > kRankThreshold) ++count;
    }
    return static_cast<double>(count);
  }
  if (order.is_infinite()) {
    double mx = 0.0;
    for (double v : normalized) mx = std::max(mx, v);
    return 1.0 / mx;
  }
  if (order.is_shannon()) {
    double h = 0.0;
    for (double v : normalized) {
      if (v > 0.0) h -= v * std::log(v);
    }
    return std::exp(h);
  }
  const double q = order.value();
  double power_sum = 0.0;
  for (double v : normalized) {
    if (v > 0.0) power_sum += std::pow(v, q);
  }
  return std::exp(std::log(power_sum) / (1.0 - q));
}

double vendi_score(const KernelMatrix& m, Order order) {
  if (m.size() == 0) return 0.0;
  const Spectrum spec = eigen_symmetric(m);
  return vendi_score_from_normalized(spec.normalized, order);
}

double vendi_score_of_subset(const KernelMatrix& pool, std::span<const std::size_t> indices,
                             Order order) {
  if (indices.empty()) return 0.0;
  return vendi_score(pool.principal_submatrix(indices), order);
}

double quality_weighted_vendi_score(const ScoredSet& set, const KernelSpec& spec, Order order) {
  set.validate();
  if (set.items.empty()) return 0.0;
  double mean = 0.0;
  for (double s : set.scores) mean += s;
  mean /= static_cast<double>(set.scores.size());
  return mean * vendi_score(build_kernel_matrix(spec, set.items), order);
}

std::vector<double> min_max_normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.5);
  if (values.empty()) return out;
  double lo = values[0], hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("min_max_normalize: non-finite value");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) return out;  // degenerate: everything maps to 0.5
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / (hi - lo);
  return out;
}

}  // namespace qvs
