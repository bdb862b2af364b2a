#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qvs/geometry.hpp"
#include "qvs/kernels.hpp"
#include "qvs/linalg.hpp"

namespace qvs {

struct LabeledData {
  std::vector<Point> points;
  std::vector<double> labels;

  std::size_t size() const { return points.size(); }
  void validate() const;
  void validate_binary() const;  // labels restricted to {0, 1}
};

struct ClassifierConfig {
  std::size_t k_neighbors = 15;
  double smoothing = 1.0;  // Laplace-style gamma

  void validate() const;
};

// Smoothed k-NN estimate of Pr(y = 1 | query): (positives + g) / (m + 2g)
// over the m = min(k, n) nearest training points under Euclidean distance,
// distance ties resolved by lowest index.
double classify_prob(const LabeledData& data, const ClassifierConfig& cfg, const Point& query);

std::vector<double> classify_prob_batch(const LabeledData& data, const ClassifierConfig& cfg,
                                        std::span<const Point> queries);

struct GPConfig {
  // Fixed RBF lengthscale; leave unset to grid-search (lengthscale_grid when
  // nonempty, otherwise the default data-driven grid).
  std::optional<double> lengthscale;
  double noise_variance = 1e-4;
  double jitter = 1e-8;
  std::vector<double> lengthscale_grid;

  void validate() const;
};

// 8 log-spaced lengthscales spanning 1e-2..1e2 times the median pairwise
// distance of the points.
std::vector<double> default_lengthscale_grid(std::span<const Point> points);

struct PosteriorBatch {
  std::vector<double> means;
  Matrix covariance;  // symmetric, diagonal jittered

  std::size_t size() const { return means.size(); }
  double variance(std::size_t i) const { return covariance(i, i); }
};

// Zero-mean GP on centered labels; the sample mean is added back at
// prediction. Signal variance is the sample variance of the centered labels.
// Covariance is signal * k where k is either an RBF over points or a slice of
// a caller-owned kernel matrix (fit_on_kernel keeps a pointer into it, so the
// matrix must outlive the fitted state).
class GaussianProcess {
 public:
  static GaussianProcess fit(const LabeledData& data, const GPConfig& cfg);
  static GaussianProcess fit_on_kernel(const KernelMatrix& pool,
                                       std::span<const std::size_t> train_indices,
                                       std::span<const double> labels, const GPConfig& cfg);

  PosteriorBatch posterior(std::span<const Point> queries) const;
  PosteriorBatch posterior_at_indices(std::span<const std::size_t> pool_indices) const;

  double lengthscale() const { return lengthscale_; }
  double signal_variance() const { return signal_variance_; }
  double mean_offset() const { return mean_; }
  std::size_t training_size() const { return centered_labels_.size(); }

 private:
  GaussianProcess() = default;
  double train_cov(std::size_t i, std::size_t j) const;  // without signal scaling
  double cross_cov_point(std::size_t i, const Point& q) const;
  PosteriorBatch posterior_impl(std::size_t m,
                                const std::function<double(std::size_t, std::size_t)>& k_train_q,
                                const std::function<double(std::size_t, std::size_t)>& k_qq) const;

  // RBF mode
  std::vector<Point> train_points_;
  double lengthscale_ = 1.0;
  // pool-kernel mode
  const KernelMatrix* pool_ = nullptr;
  std::vector<std::size_t> train_indices_;

  std::vector<double> centered_labels_;
  double mean_ = 0.0;
  double signal_variance_ = 1.0;
  GPConfig cfg_;
  Matrix chol_;                // lower factor of signal*K + noise*I (+ escalated jitter)
  std::vector<double> alpha_;  // (signal*K + noise*I)^{-1} centered_labels
};

// mean + L z with L the lower factor of the (escalating-jitter) covariance and
// z standard normal from the seeded generator. An exactly-zero covariance
// returns the mean unchanged.
std::vector<double> thompson_sample(const PosteriorBatch& post, std::uint64_t seed);

// means + beta * sqrt(diagonal variances); variances below -1e-8 signal a
// numerical fault and throw, small negatives clamp to zero.
std::vector<double> ucb_score(const PosteriorBatch& post, double beta);

}  // namespace qvs
