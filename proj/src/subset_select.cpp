#include "qvs/subset_select.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "qvs/eigen.hpp"
#include "qvs/rng.hpp"

namespace qvs {

void ContinuousOptConfig::validate() const {
  if (restarts == 0 || max_iters == 0) {
    throw std::invalid_argument("ContinuousOptConfig: restarts and max_iters must be positive");
  }
  if (!(step_tolerance > 0.0) || !(fd_step > 0.0)) {
    throw std::invalid_argument("ContinuousOptConfig: tolerances must be positive");
  }
}

namespace {

// qVS of the subset given its kernel submatrix in `work` (destroyed) and the
// sum of its quality scores.
double qvs_of_work(std::vector<double>& work, std::size_t m, double score_sum, Order order) {
  jacobi_eigenvalues(work.data(), m, nullptr);
  std::vector<double> diag(m);
  for (std::size_t i = 0; i < m; ++i) diag[i] = work[i * m + i];
  const std::vector<double> normalized = normalize_eigenvalues(diag);
  const double vs = vendi_score_from_normalized(normalized, order);
  return (score_sum / static_cast<double>(m)) * vs;
}

}  // namespace

std::vector<std::size_t> greedy_select_on_kernel(const KernelMatrix& pool_kernel,
                                                 std::span<const double> scores, Order order,
                                                 std::size_t batch,
                                                 std::span<const std::size_t> fixed,
                                                 std::span<const std::size_t> candidates) {
  const std::size_t n = pool_kernel.size();
  if (scores.size() != n) {
    throw std::invalid_argument("greedy_select: scores length does not match pool size");
  }
  if (batch > candidates.size()) {
    throw std::invalid_argument("greedy_select: batch_size exceeds available candidates");
  }
  for (std::size_t idx : fixed) {
    if (idx >= n) throw std::invalid_argument("greedy_select: fixed index out of range");
  }
  for (std::size_t idx : candidates) {
    if (idx >= n) throw std::invalid_argument("greedy_select: candidate index out of range");
  }

  std::vector<std::size_t> selected(fixed.begin(), fixed.end());
  std::vector<std::size_t> remaining(candidates.begin(), candidates.end());
  std::vector<std::size_t> chosen;
  chosen.reserve(batch);

  double base_score_sum = 0.0;
  for (std::size_t idx : fixed) base_score_sum += scores[idx];

  // base holds K[selected, selected]; grown by one row/col per step
  const std::size_t cap = selected.size() + batch;
  std::vector<double> base(cap * cap, 0.0);
  const std::size_t m0 = selected.size();
  for (std::size_t a = 0; a < m0; ++a) {
    for (std::size_t b = 0; b < m0; ++b) base[a * cap + b] = pool_kernel(selected[a], selected[b]);
  }

  std::vector<double> work;
  for (std::size_t step = 0; step < batch; ++step) {
    const std::size_t m = selected.size();
    work.resize((m + 1) * (m + 1));

    double best_value = -std::numeric_limits<double>::infinity();
    std::size_t best_pos = remaining.size();
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
      const std::size_t cand = remaining[pos];
      for (std::size_t a = 0; a < m; ++a) {
        std::memcpy(work.data() + a * (m + 1), base.data() + a * cap, m * sizeof(double));
        const double cross = pool_kernel(selected[a], cand);
        work[a * (m + 1) + m] = cross;
        work[m * (m + 1) + a] = cross;
      }
      work[m * (m + 1) + m] = 1.0;
      const double value = qvs_of_work(work, m + 1, base_score_sum + scores[cand], order);
      if (value > best_value ||
          (value == best_value && best_pos < remaining.size() && cand < remaining[best_pos])) {
        best_value = value;
        best_pos = pos;
      }
    }

    const std::size_t picked = remaining[best_pos];
    for (std::size_t a = 0; a < m; ++a) {
      const double cross = pool_kernel(selected[a], picked);
      base[a * cap + m] = cross;
      base[m * cap + a] = cross;
    }
    base[m * cap + m] = 1.0;
    selected.push_back(picked);
    chosen.push_back(picked);
    base_score_sum += scores[picked];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  return chosen;
}

std::vector<std::size_t> greedy_select(const ScoredSet& pool, const KernelSpec& spec, Order order,
                                       const GreedyConfig& cfg,
                                       std::span<const std::size_t> fixed) {
  pool.validate();
  if (pool.items.empty()) {
    throw std::invalid_argument("greedy_select: empty pool");
  }
  std::vector<bool> is_fixed(pool.size(), false);
  for (std::size_t idx : fixed) {
    if (idx >= pool.size()) throw std::invalid_argument("greedy_select: fixed index out of range");
    is_fixed[idx] = true;
  }
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!is_fixed[i]) candidates.push_back(i);
  }
  const KernelMatrix kernel = build_kernel_matrix(spec, pool.items);
  return greedy_select_on_kernel(kernel, pool.scores, order, cfg.batch_size, fixed, candidates);
}

double greedy_gain(const ScoredSet& pool, const KernelSpec& spec, Order order,
                   std::span<const std::size_t> current, std::size_t candidate) {
  pool.validate();
  if (candidate >= pool.size()) {
    throw std::invalid_argument("greedy_gain: candidate index out of range");
  }
  for (std::size_t idx : current) {
    if (idx == candidate) throw std::invalid_argument("greedy_gain: candidate already in current");
    if (idx >= pool.size()) throw std::invalid_argument("greedy_gain: current index out of range");
  }
  const auto qvs_of = [&](std::span<const std::size_t> indices) {
    if (indices.empty()) return 0.0;
    ScoredSet subset;
    for (std::size_t idx : indices) {
      subset.items.push_back(pool.items[idx]);
      subset.scores.push_back(pool.scores[idx]);
    }
    return quality_weighted_vendi_score(subset, spec, order);
  };
  std::vector<std::size_t> augmented(current.begin(), current.end());
  augmented.push_back(candidate);
  return qvs_of(augmented) - qvs_of(current);
}

double batch_qvs(const KernelSpec& spec, const std::function<double(const Point&)>& score_fn,
                 std::span<const Point> batch, Order order) {
  if (batch.empty()) return 0.0;
  ScoredSet set;
  set.items.assign(batch.begin(), batch.end());
  set.scores.reserve(batch.size());
  for (const Point& p : batch) {
    const double s = score_fn(p);
    if (!std::isfinite(s)) {
      throw std::runtime_error("continuous_maximize: score function returned a non-finite value");
    }
    set.scores.push_back(std::clamp(s, 0.0, 1.0));
  }
  return quality_weighted_vendi_score(set, spec, order);
}

namespace {

struct FlatBatch {
  std::size_t batch;
  std::size_t dim;

  std::vector<Point> to_points(std::span<const double> x) const {
    std::vector<Point> pts(batch);
    for (std::size_t b = 0; b < batch; ++b) {
      pts[b].coords.assign(x.begin() + static_cast<std::ptrdiff_t>(b * dim),
                           x.begin() + static_cast<std::ptrdiff_t>((b + 1) * dim));
    }
    return pts;
  }
};

}  // namespace

std::vector<Point> continuous_maximize(const KernelSpec& spec,
                                       const std::function<double(const Point&)>& score_fn,
                                       const BoxDomain& domain, std::size_t batch_size,
                                       Order order, const ContinuousOptConfig& cfg) {
  domain.validate();
  cfg.validate();
  spec.validate();
  if (batch_size == 0) {
    throw std::invalid_argument("continuous_maximize: batch_size must be >= 1");
  }

  const std::size_t dim = domain.dim();
  const std::size_t nvar = batch_size * dim;
  const FlatBatch flat{batch_size, dim};

  const auto objective = [&](std::span<const double> x) {
    const std::vector<Point> pts = flat.to_points(x);
    return batch_qvs(spec, score_fn, pts, order);
  };
  const auto project = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < nvar; ++i) {
      const double lo = domain.lower[i % dim];
      const double hi = domain.upper[i % dim];
      x[i] = std::clamp(x[i], lo, hi);
    }
  };

  constexpr double kArmijo = 1e-4;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<double> best_x;

  for (std::size_t restart = 0; restart < cfg.restarts; ++restart) {
    Rng rng(cfg.seed, restart + 1);
    std::vector<double> x(nvar);
    for (std::size_t i = 0; i < nvar; ++i) {
      x[i] = rng.uniform(domain.lower[i % dim], domain.upper[i % dim]);
    }
    double fx = objective(x);

    std::vector<double> grad(nvar), probe(nvar), trial(nvar);
    double step = 1.0;
    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
      // central finite differences
      probe = x;
      double grad_norm_sq = 0.0;
      for (std::size_t i = 0; i < nvar; ++i) {
        const double xi = x[i];
        probe[i] = xi + cfg.fd_step;
        const double fp = objective(probe);
        probe[i] = xi - cfg.fd_step;
        const double fm = objective(probe);
        probe[i] = xi;
        grad[i] = (fp - fm) / (2.0 * cfg.fd_step);
        grad_norm_sq += grad[i] * grad[i];
      }
      if (grad_norm_sq == 0.0) break;

      step = std::min(1.0, step * 2.0);
      bool accepted = false;
      double ft = fx;
      while (step > 1e-14) {
        for (std::size_t i = 0; i < nvar; ++i) trial[i] = x[i] + step * grad[i];
        project(trial);
        ft = objective(trial);
        if (ft >= fx + kArmijo * step * grad_norm_sq) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;

      double move = 0.0;
      for (std::size_t i = 0; i < nvar; ++i) move = std::max(move, std::abs(trial[i] - x[i]));
      x = trial;
      fx = ft;
      if (move < cfg.step_tolerance) break;
    }

    if (fx > best_value) {  // ties keep the earlier restart
      best_value = fx;
      best_x = x;
    }
  }

  return flat.to_points(best_x);
}

}  // namespace qvs
