#include "qvs/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qvs/rng.hpp"

namespace qvs {

namespace {

void check_pool_args(std::size_t pool_size, double rate) {
  if (pool_size == 0) throw std::invalid_argument("synthetic: pool_size must be positive");
  if (!(rate > 0.0) || !(rate < 1.0)) {
    throw std::invalid_argument("synthetic: positive rate must lie in (0, 1)");
  }
}

Point gaussian_around(const Point& center, double spread, Rng& rng) {
  Point out = center;
  for (double& c : out.coords) c += spread * rng.normal();
  return out;
}

Point uniform_box(std::size_t dim, double half, Rng& rng) {
  Point out{std::vector<double>(dim)};
  for (double& c : out.coords) c = rng.uniform(-half, half);
  return out;
}

BinaryPoolProblem assemble_binary(std::size_t pool_size, double rate,
                                  const std::vector<Point>& centers, double spread,
                                  std::size_t dim, double box_half, Rng& rng) {
  const std::size_t n_pos = static_cast<std::size_t>(
      std::floor(rate * static_cast<double>(pool_size)));
  if (n_pos == 0) throw std::invalid_argument("synthetic: rate yields zero positives");

  BinaryPoolProblem problem;
  problem.centers = centers;
  problem.points.reserve(pool_size);
  problem.labels.reserve(pool_size);
  for (std::size_t i = 0; i < n_pos; ++i) {
    problem.points.push_back(gaussian_around(centers[i % centers.size()], spread, rng));
    problem.labels.push_back(1);
  }
  for (std::size_t i = n_pos; i < pool_size; ++i) {
    problem.points.push_back(uniform_box(dim, box_half, rng));
    problem.labels.push_back(0);
  }
  // shuffle so pool index carries no label information
  for (std::size_t i = 0; i + 1 < pool_size; ++i) {
    const std::size_t j = i + rng.index(pool_size - i);
    std::swap(problem.points[i], problem.points[j]);
    std::swap(problem.labels[i], problem.labels[j]);
  }
  return problem;
}

}  // namespace

BinaryPoolProblem make_two_cluster_binary(std::size_t pool_size, double positive_rate,
                                          std::uint64_t seed, const TwoClusterParams& params) {
  check_pool_args(pool_size, positive_rate);
  if (params.dim == 0) throw std::invalid_argument("synthetic: dim must be >= 1");
  Rng rng(seed);
  std::vector<Point> centers(2, Point{std::vector<double>(params.dim, 0.0)});
  centers[0][0] = -params.cluster_offset;
  centers[1][0] = params.cluster_offset;
  return assemble_binary(pool_size, positive_rate, centers, params.cluster_spread, params.dim,
                         params.box_half, rng);
}

BinaryPoolProblem make_ring_clusters_binary(std::size_t pool_size, double positive_rate,
                                            std::size_t clusters, std::uint64_t seed,
                                            const RingParams& params) {
  check_pool_args(pool_size, positive_rate);
  if (clusters == 0) throw std::invalid_argument("synthetic: clusters must be >= 1");
  if (params.dim < 2) throw std::invalid_argument("synthetic: ring layout needs dim >= 2");
  Rng rng(seed);
  std::vector<Point> centers;
  for (std::size_t c = 0; c < clusters; ++c) {
    Point center{std::vector<double>(params.dim, 0.0)};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) /
                         static_cast<double>(clusters);
    center[0] = params.ring_radius * std::cos(angle);
    center[1] = params.ring_radius * std::sin(angle);
    centers.push_back(std::move(center));
  }
  return assemble_binary(pool_size, positive_rate, centers, params.cluster_spread, params.dim,
                         params.box_half, rng);
}

double MultiPeakProblem::operator()(const Point& p) const {
  double v = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double d2 = squared_distance(p, centers[i]);
    v += heights[i] * std::exp(-d2 / (2.0 * widths[i] * widths[i]));
  }
  return v;
}

MultiPeakProblem make_multi_peak(std::size_t peak_count, const MultiPeakParams& params) {
  if (peak_count == 0) throw std::invalid_argument("synthetic: peak_count must be >= 1");
  if (params.dim == 0) throw std::invalid_argument("synthetic: dim must be >= 1");
  if (peak_count > 1 && params.dim < 2) {
    throw std::invalid_argument("synthetic: multiple peaks need dim >= 2");
  }
  MultiPeakProblem problem;
  problem.domain = BoxDomain::centered_cube(params.dim, params.box_half);
  for (std::size_t i = 0; i < peak_count; ++i) {
    Point center{std::vector<double>(params.dim, 0.0)};
    if (peak_count > 1) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) /
                           static_cast<double>(peak_count);
      center[0] = params.ring_radius * std::cos(angle);
      center[1] = params.ring_radius * std::sin(angle);
    }
    problem.centers.push_back(std::move(center));
    problem.heights.push_back(params.height);
    problem.widths.push_back(params.width);
  }
  return problem;
}

ValuedPoolProblem make_two_group_pool(std::size_t pool_size, std::uint64_t seed,
                                      const TwoGroupParams& params) {
  if (pool_size == 0) throw std::invalid_argument("synthetic: pool_size must be positive");
  if (params.dim == 0) throw std::invalid_argument("synthetic: dim must be >= 1");
  if (!(params.group_fraction > 0.0) || !(params.group_fraction < 1.0)) {
    throw std::invalid_argument("synthetic: group_fraction must lie in (0, 1)");
  }
  Rng rng(seed);
  ValuedPoolProblem problem;
  problem.centers.assign(2, Point{std::vector<double>(params.dim, 0.0)});
  problem.centers[0][0] = -params.group_offset;
  problem.centers[1][0] = params.group_offset;

  const std::size_t n_group = static_cast<std::size_t>(
      std::floor(params.group_fraction * static_cast<double>(pool_size)));
  for (std::size_t i = 0; i < pool_size; ++i) {
    if (i < n_group) {
      problem.points.push_back(
          gaussian_around(problem.centers[i % 2], params.group_spread, rng));
    } else {
      problem.points.push_back(uniform_box(params.dim, params.box_half, rng));
    }
  }
  for (std::size_t i = 0; i + 1 < pool_size; ++i) {
    const std::size_t j = i + rng.index(pool_size - i);
    std::swap(problem.points[i], problem.points[j]);
  }
  const double w2 = 2.0 * params.value_width * params.value_width;
  problem.values.reserve(pool_size);
  for (const Point& p : problem.points) {
    double v = 0.0;
    for (const Point& c : problem.centers) v += std::exp(-squared_distance(p, c) / w2);
    problem.values.push_back(v);
  }
  return problem;
}

}  // namespace qvs
