#include "qvs/surrogates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qvs/rng.hpp"

namespace qvs {

void LabeledData::validate() const {
  if (points.size() != labels.size()) {
    throw std::invalid_argument("LabeledData: points and labels differ in length");
  }
  for (const Point& p : points) require_valid_point(p, "LabeledData");
  for (double y : labels) {
    if (!std::isfinite(y)) throw std::invalid_argument("LabeledData: non-finite label");
  }
}

void LabeledData::validate_binary() const {
  validate();
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) {
      throw std::invalid_argument("LabeledData: binary mode requires labels in {0, 1}");
    }
  }
}

void ClassifierConfig::validate() const {
  if (k_neighbors < 1) throw std::invalid_argument("ClassifierConfig: k_neighbors must be >= 1");
  if (!(smoothing > 0.0)) throw std::invalid_argument("ClassifierConfig: smoothing must be > 0");
}

double classify_prob(const LabeledData& data, const ClassifierConfig& cfg, const Point& query) {
  cfg.validate();
  data.validate_binary();
  if (data.points.empty()) {
    throw std::invalid_argument("classify_prob: empty training data");
  }
  require_valid_point(query, "classify_prob");

  const std::size_t n = data.points.size();
  const std::size_t m = std::min(cfg.k_neighbors, n);
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = {squared_distance(query, data.points[i]), i};
  }
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(m - 1), dist.end());
  double positives = 0.0;
  for (std::size_t i = 0; i < m; ++i) positives += data.labels[dist[i].second];
  const double g = cfg.smoothing;
  return (positives + g) / (static_cast<double>(m) + 2.0 * g);
}

std::vector<double> classify_prob_batch(const LabeledData& data, const ClassifierConfig& cfg,
                                        std::span<const Point> queries) {
  std::vector<double> out;
  out.reserve(queries.size());
  for (const Point& q : queries) out.push_back(classify_prob(data, cfg, q));
  return out;
}

void GPConfig::validate() const {
  if (lengthscale && (!(*lengthscale > 0.0) || !std::isfinite(*lengthscale))) {
    throw std::invalid_argument("GPConfig: lengthscale must be positive and finite");
  }
  if (!(noise_variance > 0.0) || !(jitter > 0.0)) {
    throw std::invalid_argument("GPConfig: noise_variance and jitter must be positive");
  }
  for (double l : lengthscale_grid) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("GPConfig: grid lengthscales must be positive and finite");
    }
  }
}

std::vector<double> default_lengthscale_grid(std::span<const Point> points) {
  std::vector<double> dists;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      dists.push_back(distance(points[i], points[j]));
    }
  }
  double median = 1.0;
  if (!dists.empty()) {
    std::sort(dists.begin(), dists.end());
    median = dists[dists.size() / 2];
    if (!(median > 0.0)) median = 1.0;
  }
  std::vector<double> grid(8);
  for (std::size_t i = 0; i < 8; ++i) {
    // log-spaced over [1e-2, 1e2] x median
    const double expo = -2.0 + 4.0 * static_cast<double>(i) / 7.0;
    grid[i] = median * std::pow(10.0, expo);
  }
  return grid;
}

namespace {

constexpr double kMaxJitter = 1e-4;

// Factor base + (noise + jitter) I, escalating jitter tenfold up to 1e-4.
// `base` carries the signal-scaled kernel; returns the lower factor.
Matrix factor_with_escalation(const Matrix& base, double noise, double first_jitter,
                              const char* where) {
  std::vector<double> jitters{0.0};
  for (double j = first_jitter; j <= kMaxJitter * (1.0 + 1e-9); j *= 10.0) jitters.push_back(j);
  for (double jitter : jitters) {
    Matrix attempt = base;
    for (std::size_t i = 0; i < attempt.rows(); ++i) attempt(i, i) += noise + jitter;
    if (cholesky_in_place(attempt)) return attempt;
  }
  throw std::runtime_error(std::string(where) +
                           ": covariance factorization failed even with jitter escalated to 1e-4");
}

double rbf(const Point& a, const Point& b, double lengthscale) {
  return std::exp(-squared_distance(a, b) / (2.0 * lengthscale * lengthscale));
}

}  // namespace

double GaussianProcess::train_cov(std::size_t i, std::size_t j) const {
  if (pool_ != nullptr) return (*pool_)(train_indices_[i], train_indices_[j]);
  return rbf(train_points_[i], train_points_[j], lengthscale_);
}

double GaussianProcess::cross_cov_point(std::size_t i, const Point& q) const {
  return rbf(train_points_[i], q, lengthscale_);
}

GaussianProcess GaussianProcess::fit(const LabeledData& data, const GPConfig& cfg) {
  cfg.validate();
  data.validate();

  GaussianProcess gp;
  gp.cfg_ = cfg;
  gp.train_points_ = data.points;

  const std::size_t n = data.size();
  std::vector<double> grid;
  if (!cfg.lengthscale_grid.empty()) {
    grid = cfg.lengthscale_grid;
  } else if (cfg.lengthscale) {
    grid = {*cfg.lengthscale};
  } else {
    grid = default_lengthscale_grid(data.points);
  }

  if (n == 0) {
    gp.mean_ = 0.0;
    gp.signal_variance_ = 1.0;
    gp.lengthscale_ = grid[grid.size() / 2];
    return gp;
  }

  double mean = 0.0;
  for (double y : data.labels) mean += y;
  mean /= static_cast<double>(n);
  gp.mean_ = mean;
  gp.centered_labels_.resize(n);
  for (std::size_t i = 0; i < n; ++i) gp.centered_labels_[i] = data.labels[i] - mean;

  if (n >= 2) {
    double ss = 0.0;
    for (double y : gp.centered_labels_) ss += y * y;
    gp.signal_variance_ = ss / static_cast<double>(n - 1);
  } else {
    gp.signal_variance_ = 1.0;  // sample variance undefined; keep prior scale
  }

  double best_lml = -std::numeric_limits<double>::infinity();
  for (double candidate : grid) {
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      k(i, i) = gp.signal_variance_;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = gp.signal_variance_ * rbf(data.points[i], data.points[j], candidate);
        k(i, j) = v;
        k(j, i) = v;
      }
    }
    Matrix chol = factor_with_escalation(k, cfg.noise_variance, cfg.jitter, "gp_fit");
    std::vector<double> alpha = gp.centered_labels_;
    solve_lower(chol, alpha);
    double quad = 0.0;  // y^T M^{-1} y via the half-solved vector
    for (double v : alpha) quad += v * v;
    solve_lower_transpose(chol, alpha);
    double logdet_half = 0.0;
    for (std::size_t i = 0; i < n; ++i) logdet_half += std::log(chol(i, i));
    const double lml = -0.5 * quad - logdet_half -
                       0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    if (lml > best_lml) {
      best_lml = lml;
      gp.lengthscale_ = candidate;
      gp.chol_ = std::move(chol);
      gp.alpha_ = std::move(alpha);
    }
  }
  return gp;
}

GaussianProcess GaussianProcess::fit_on_kernel(const KernelMatrix& pool,
                                               std::span<const std::size_t> train_indices,
                                               std::span<const double> labels,
                                               const GPConfig& cfg) {
  cfg.validate();
  if (train_indices.size() != labels.size()) {
    throw std::invalid_argument("gp_fit: indices and labels differ in length");
  }
  for (std::size_t idx : train_indices) {
    if (idx >= pool.size()) throw std::invalid_argument("gp_fit: train index out of range");
  }

  GaussianProcess gp;
  gp.cfg_ = cfg;
  gp.pool_ = &pool;
  gp.train_indices_.assign(train_indices.begin(), train_indices.end());

  const std::size_t n = train_indices.size();
  if (n == 0) {
    gp.mean_ = 0.0;
    gp.signal_variance_ = 1.0;
    return gp;
  }

  double mean = 0.0;
  for (double y : labels) mean += y;
  mean /= static_cast<double>(n);
  gp.mean_ = mean;
  gp.centered_labels_.resize(n);
  for (std::size_t i = 0; i < n; ++i) gp.centered_labels_[i] = labels[i] - mean;

  if (n >= 2) {
    double ss = 0.0;
    for (double y : gp.centered_labels_) ss += y * y;
    gp.signal_variance_ = ss / static_cast<double>(n - 1);
  } else {
    gp.signal_variance_ = 1.0;
  }

  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      k(i, j) = gp.signal_variance_ * gp.train_cov(i, j);
    }
  }
  gp.chol_ = factor_with_escalation(k, cfg.noise_variance, cfg.jitter, "gp_fit");
  gp.alpha_ = gp.centered_labels_;
  solve_lower(gp.chol_, gp.alpha_);
  solve_lower_transpose(gp.chol_, gp.alpha_);
  return gp;
}

PosteriorBatch GaussianProcess::posterior_impl(
    std::size_t m, const std::function<double(std::size_t, std::size_t)>& k_train_q,
    const std::function<double(std::size_t, std::size_t)>& k_qq) const {
  const std::size_t n = centered_labels_.size();
  PosteriorBatch post;
  post.means.assign(m, mean_);
  post.covariance = Matrix(m, m);

  if (n == 0) {
    // prior: zero-centered mean and the raw (signal-scaled) kernel
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        post.covariance(a, b) = signal_variance_ * k_qq(a, b);
      }
      post.covariance(a, a) += cfg_.jitter;
    }
    return post;
  }

  // cross covariance, signal-scaled: column per query
  Matrix cross(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) cross(i, j) = signal_variance_ * k_train_q(i, j);
  }
  for (std::size_t j = 0; j < m; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += cross(i, j) * alpha_[i];
    post.means[j] += acc;
  }
  // v_j = L^{-1} cross_col_j, computed column-wise
  Matrix v(n, m);
  {
    std::vector<double> col(n);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) col[i] = cross(i, j);
      solve_lower(chol_, col);
      for (std::size_t i = 0; i < n; ++i) v(i, j) = col[i];
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += v(i, a) * v(i, b);
      const double value = signal_variance_ * k_qq(a, b) - dot;
      post.covariance(a, b) = value;
      post.covariance(b, a) = value;  // symmetrized by construction
    }
    post.covariance(a, a) += cfg_.jitter;
  }
  return post;
}

PosteriorBatch GaussianProcess::posterior(std::span<const Point> queries) const {
  if (pool_ != nullptr) {
    throw std::logic_error("gp_posterior: state fitted on a kernel matrix; use indices");
  }
  const auto k_train_q = [&](std::size_t i, std::size_t j) {
    return cross_cov_point(i, queries[j]);
  };
  const auto k_qq = [&](std::size_t a, std::size_t b) {
    return rbf(queries[a], queries[b], lengthscale_);
  };
  return posterior_impl(queries.size(), k_train_q, k_qq);
}

PosteriorBatch GaussianProcess::posterior_at_indices(
    std::span<const std::size_t> pool_indices) const {
  if (pool_ == nullptr) {
    throw std::logic_error("gp_posterior: state fitted on points; use point queries");
  }
  for (std::size_t idx : pool_indices) {
    if (idx >= pool_->size()) throw std::invalid_argument("gp_posterior: index out of range");
  }
  const auto k_train_q = [&](std::size_t i, std::size_t j) {
    return (*pool_)(train_indices_[i], pool_indices[j]);
  };
  const auto k_qq = [&](std::size_t a, std::size_t b) {
    return (*pool_)(pool_indices[a], pool_indices[b]);
  };
  return posterior_impl(pool_indices.size(), k_train_q, k_qq);
}

std::vector<double> thompson_sample(const PosteriorBatch& post, std::uint64_t seed) {
  const std::size_t m = post.size();
  if (post.covariance.rows() != m || post.covariance.cols() != m) {
    throw std::invalid_argument("thompson_sample: covariance shape mismatch");
  }
  bool all_zero = true;
  for (std::size_t i = 0; i < m && all_zero; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (post.covariance(i, j) != 0.0) {
        all_zero = false;
        break;
      }
    }
  }
  if (all_zero) return post.means;  // deterministic posterior

  const Matrix chol = factor_with_escalation(post.covariance, 0.0, 1e-8, "thompson_sample");
  Rng rng(seed);
  std::vector<double> z(m);
  for (double& v : z) v = rng.normal();
  std::vector<double> out(post.means);
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += chol(i, j) * z[j];
    out[i] += acc;
  }
  return out;
}

std::vector<double> ucb_score(const PosteriorBatch& post, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("ucb_score: beta must be >= 0");
  std::vector<double> out(post.size());
  for (std::size_t i = 0; i < post.size(); ++i) {
    double var = post.variance(i);
    if (var < -1e-8) {
      throw std::runtime_error("ucb_score: negative posterior variance " + std::to_string(var));
    }
    if (var < 0.0) var = 0.0;
    out[i] = post.means[i] + beta * std::sqrt(var);
  }
  return out;
}

}  // namespace qvs
