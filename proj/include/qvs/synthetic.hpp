#pragma once

#include <cstdint>
#include <vector>

#include "qvs/geometry.hpp"

namespace qvs {

// Desk-scale stand-ins for the search problems the campaigns are evaluated
// on. Every generator is a pure function of its seed.

struct BinaryPoolProblem {
  std::vector<Point> points;
  std::vector<int> labels;
  std::vector<Point> centers;  // positive cluster centers
};

struct TwoClusterParams {
  std::size_t dim = 2;
  double box_half = 5.0;        // negatives uniform in [-box_half, box_half]^dim
  double cluster_offset = 3.0;  // cluster centers at +-offset on axis 0
  double cluster_spread = 0.4;
};

// floor(rate * pool_size) positives split across two Gaussian clusters inside
// a uniform negative background; pool order is shuffled.
BinaryPoolProblem make_two_cluster_binary(std::size_t pool_size, double positive_rate,
                                          std::uint64_t seed, const TwoClusterParams& params = {});

struct RingParams {
  std::size_t dim = 2;  // the ring lives in the first two axes
  double box_half = 5.0;
  double ring_radius = 3.5;
  double cluster_spread = 0.4;
};

// Positives split round-robin across `clusters` Gaussian clusters arranged on
// a circle.
BinaryPoolProblem make_ring_clusters_binary(std::size_t pool_size, double positive_rate,
                                            std::size_t clusters, std::uint64_t seed,
                                            const RingParams& params = {});

// Sum of Gaussian bumps over a box domain.
struct MultiPeakProblem {
  BoxDomain domain;
  std::vector<Point> centers;
  std::vector<double> heights;
  std::vector<double> widths;

  double operator()(const Point& p) const;
};

struct MultiPeakParams {
  std::size_t dim = 2;
  double box_half = 5.0;
  double height = 1.0;
  double width = 0.8;
  double ring_radius = 3.5;  // peaks on a circle; a single peak sits at the origin
};

MultiPeakProblem make_multi_peak(std::size_t peak_count, const MultiPeakParams& params = {});

struct ValuedPoolProblem {
  std::vector<Point> points;
  std::vector<double> values;
  std::vector<Point> centers;  // high-value group centers
};

struct TwoGroupParams {
  std::size_t dim = 2;
  double box_half = 5.0;
  double group_offset = 3.0;
  double group_spread = 0.5;
  double group_fraction = 0.3;  // share of pool points drawn inside the groups
  double value_width = 1.0;     // bump width of the value surface
};

// Pool whose high-value items split into two well-separated groups; values
// are a deterministic two-bump surface evaluated at each point.
ValuedPoolProblem make_two_group_pool(std::size_t pool_size, std::uint64_t seed,
                                      const TwoGroupParams& params = {});

}  // namespace qvs
