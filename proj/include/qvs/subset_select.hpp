#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qvs/kernels.hpp"
#include "qvs/vendi.hpp"

namespace qvs {

enum class TieBreak { LowestIndex };

struct GreedyConfig {
  std::size_t batch_size = 1;
  TieBreak tie_break = TieBreak::LowestIndex;
};

struct ContinuousOptConfig {
  std::size_t restarts = 10;
  std::size_t max_iters = 500;
  double step_tolerance = 1e-7;
  double fd_step = 1e-5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Marginal gain of adding pool item `candidate` to the items at `current`:
// qVS(current + candidate) - qVS(current).
double greedy_gain(const ScoredSet& pool, const KernelSpec& spec, Order order,
                   std::span<const std::size_t> current, std::size_t candidate);

// Sequential greedy batch over a discrete pool. Items at `fixed` are already
// committed (e.g. known positives); each step adds the candidate maximizing
// the qVS of fixed + chosen + candidate. Ties break to the lowest index.
// Returns batch_size indices in selection order.
std::vector<std::size_t> greedy_select(const ScoredSet& pool, const KernelSpec& spec, Order order,
                                       const GreedyConfig& cfg,
                                       std::span<const std::size_t> fixed = {});

// Same loop over a prebuilt pool kernel with an explicit candidate set, so
// campaign iterations avoid rebuilding kernels. `scores` is indexed by pool
// position.
std::vector<std::size_t> greedy_select_on_kernel(const KernelMatrix& pool_kernel,
                                                 std::span<const double> scores, Order order,
                                                 std::size_t batch,
                                                 std::span<const std::size_t> fixed,
                                                 std::span<const std::size_t> candidates);

// qVS of a point batch under a score function: the objective the continuous
// maximizer climbs. Exposed for tests and brute-force comparisons.
double batch_qvs(const KernelSpec& spec, const std::function<double(const Point&)>& score_fn,
                 std::span<const Point> batch, Order order);

// Multi-start projected gradient ascent over the box: the whole batch
// (batch_size x dim coordinates) is one optimization variable, gradients come
// from central finite differences, and the best restart wins (ties by restart
// index). Deterministic given cfg.seed.
std::vector<Point> continuous_maximize(const KernelSpec& spec,
                                       const std::function<double(const Point&)>& score_fn,
                                       const BoxDomain& domain, std::size_t batch_size,
                                       Order order, const ContinuousOptConfig& cfg);

}  // namespace qvs
