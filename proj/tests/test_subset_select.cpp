#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "qvs/rng.hpp"
#include "qvs/subset_select.hpp"

using namespace qvs;

namespace {

// Brute-force oracle: best qVS over all subsets of the given size.
double brute_force_best_qvs(const ScoredSet& pool, const KernelSpec& spec, Order order,
                            std::size_t size) {
  const std::size_t n = pool.size();
  std::vector<std::size_t> subset(size);
  double best = -1.0;
  const std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t start,
                                                                    std::size_t depth) {
    if (depth == size) {
      ScoredSet s;
      for (std::size_t idx : subset) {
        s.items.push_back(pool.items[idx]);
        s.scores.push_back(pool.scores[idx]);
      }
      best = std::max(best, quality_weighted_vendi_score(s, spec, order));
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      subset[depth] = i;
      recurse(i + 1, depth + 1);
    }
  };
  recurse(0, 0);
  return best;
}

ScoredSet toy_three_pool() {
  // kernel [[1, .9, 0], [.9, 1, 0], [0, 0, 1]] under a unit-lengthscale RBF
  const double d_near = std::sqrt(-2.0 * std::log(0.9));
  ScoredSet pool;
  pool.items = {{0.0, 0.0}, {d_near, 0.0}, {1000.0, 0.0}};
  pool.scores = {1.0, 1.0, 1.0};
  return pool;
}

ScoredSet random_pool(std::size_t n, Rng& rng) {
  ScoredSet pool;
  pool.items.resize(n);
  pool.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    pool.items[i] = Point{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    pool.scores[i] = rng.uniform(0.05, 1.0);
  }
  return pool;
}

}  // namespace

TEST_CASE("greedy_select on the three-item toy pool") {
  const ScoredSet pool = toy_three_pool();
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  GreedyConfig cfg;
  cfg.batch_size = 2;
  const std::vector<std::size_t> picked = greedy_select(pool, spec, Order::shannon(), cfg);
  REQUIRE(picked.size() == 2);
  CHECK(picked[0] == 0);  // singleton tie broken to the lowest index
  CHECK(picked[1] == 2);

  ScoredSet chosen;
  for (std::size_t idx : picked) {
    chosen.items.push_back(pool.items[idx]);
    chosen.scores.push_back(pool.scores[idx]);
  }
  CHECK(quality_weighted_vendi_score(chosen, spec, Order::shannon()) ==
        doctest::Approx(2.0).epsilon(1e-6));
  // the near pair is distinctly worse
  ScoredSet near{{pool.items[0], pool.items[1]}, {1.0, 1.0}};
  CHECK(quality_weighted_vendi_score(near, spec, Order::shannon()) ==
        doctest::Approx(1.2195906179141716).epsilon(1e-6));
}

TEST_CASE("greedy_select exhausts the pool when batch_size equals it") {
  Rng rng(2);
  const ScoredSet pool = random_pool(5, rng);
  GreedyConfig cfg;
  cfg.batch_size = 5;
  const auto picked = greedy_select(pool, KernelSpec::gaussian(1.0), Order::shannon(), cfg);
  std::vector<std::size_t> sorted(picked);
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("greedy_select on identical points ranks by score") {
  ScoredSet pool;
  pool.items.assign(4, Point{1.0, 1.0});
  pool.scores = {0.3, 0.9, 0.9, 0.1};
  GreedyConfig cfg;
  cfg.batch_size = 1;
  const auto picked = greedy_select(pool, KernelSpec::gaussian(1.0), Order::shannon(), cfg);
  CHECK(picked == std::vector<std::size_t>{1});  // max score, lowest index on the tie
}

TEST_CASE("greedy_select validates batch size") {
  Rng rng(3);
  const ScoredSet pool = random_pool(3, rng);
  GreedyConfig cfg;
  cfg.batch_size = 4;
  CHECK_THROWS_AS(greedy_select(pool, KernelSpec::gaussian(1.0), Order::shannon(), cfg),
                  std::invalid_argument);
}

TEST_CASE("greedy_gain closed forms") {
  const ScoredSet pool = toy_three_pool();
  const KernelSpec spec = KernelSpec::gaussian(1.0);

  const std::vector<std::size_t> empty;
  CHECK(greedy_gain(pool, spec, Order::shannon(), empty, 1) == doctest::Approx(1.0));

  const std::vector<std::size_t> zero{0};
  CHECK(greedy_gain(pool, spec, Order::shannon(), zero, 2) == doctest::Approx(1.0).epsilon(1e-6));

  // duplicate of a committed item: no gain at q = 1
  ScoredSet dup_pool;
  dup_pool.items = {{0.0, 0.0}, {0.0, 0.0}};
  dup_pool.scores = {0.7, 0.7};
  CHECK(greedy_gain(dup_pool, spec, Order::shannon(), zero, 1) <= 1e-12);

  CHECK_THROWS_AS(greedy_gain(pool, spec, Order::shannon(), zero, 0), std::invalid_argument);
}

TEST_CASE("greedy reaches at least 90% of brute force on small pools") {
  Rng rng(41);
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  int instances = 0, good = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng.index(7);        // up to 10
    const std::size_t batch = 1 + rng.index(3);    // up to 3
    const ScoredSet pool = random_pool(n, rng);

    GreedyConfig cfg;
    cfg.batch_size = batch;
    const auto picked = greedy_select(pool, spec, Order::shannon(), cfg);
    ScoredSet chosen;
    for (std::size_t idx : picked) {
      chosen.items.push_back(pool.items[idx]);
      chosen.scores.push_back(pool.scores[idx]);
    }
    const double achieved = quality_weighted_vendi_score(chosen, spec, Order::shannon());
    const double best = brute_force_best_qvs(pool, spec, Order::shannon(), batch);
    ++instances;
    if (achieved >= 0.9 * best - 1e-12) ++good;
  }
  CHECK(good >= static_cast<int>(0.95 * instances));
}

TEST_CASE("greedy is exactly optimal under orthogonal kernels") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 4 + rng.index(5);
    ScoredSet pool;
    for (std::size_t i = 0; i < n; ++i) {
      // mutually far apart: kernel is the identity
      pool.items.push_back(Point{static_cast<double>(i) * 100.0, 0.0});
      pool.scores.push_back(rng.uniform(0.05, 1.0));
    }
    const std::size_t batch = 1 + rng.index(3);
    GreedyConfig cfg;
    cfg.batch_size = batch;
    const auto picked = greedy_select(pool, KernelSpec::gaussian(1.0), Order::shannon(), cfg);
    ScoredSet chosen;
    for (std::size_t idx : picked) {
      chosen.items.push_back(pool.items[idx]);
      chosen.scores.push_back(pool.scores[idx]);
    }
    const double achieved =
        quality_weighted_vendi_score(chosen, KernelSpec::gaussian(1.0), Order::shannon());
    const double best =
        brute_force_best_qvs(pool, KernelSpec::gaussian(1.0), Order::shannon(), batch);
    CHECK(achieved == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("continuous_maximize finds the score peak with one point") {
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  const auto score = [](const Point& p) { return std::exp(-squared_distance(p, Point{0.0, 0.0}) / 2.0); };
  const BoxDomain domain = BoxDomain::centered_cube(2, 1.0);
  ContinuousOptConfig cfg;
  cfg.seed = 5;
  const auto batch = continuous_maximize(spec, score, domain, 1, Order::shannon(), cfg);
  REQUIRE(batch.size() == 1);
  CHECK(std::abs(batch[0][0]) < 1e-3);
  CHECK(std::abs(batch[0][1]) < 1e-3);
}

TEST_CASE("continuous_maximize separates a VS-only pair in one dimension") {
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  const auto score = [](const Point&) { return 1.0; };
  const BoxDomain domain = BoxDomain::centered_cube(1, 1.0);
  ContinuousOptConfig cfg;
  cfg.seed = 6;
  const auto batch = continuous_maximize(spec, score, domain, 2, Order::shannon(), cfg);
  REQUIRE(batch.size() == 2);
  CHECK(std::abs(batch[0][0] - batch[1][0]) > 1.5);
  for (const Point& p : batch) CHECK(domain.contains(p, 1e-12));
}

TEST_CASE("continuous_maximize is deterministic and feasible") {
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  const auto score = [](const Point& p) {
    return std::exp(-squared_distance(p, Point{0.3, -0.2}) / 2.0);
  };
  const BoxDomain domain = BoxDomain::centered_cube(2, 1.0);
  ContinuousOptConfig cfg;
  cfg.seed = 123;
  cfg.restarts = 4;
  cfg.max_iters = 120;
  const auto a = continuous_maximize(spec, score, domain, 3, Order::shannon(), cfg);
  const auto b = continuous_maximize(spec, score, domain, 3, Order::shannon(), cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].coords == b[i].coords);  // bit-for-bit
    CHECK(domain.contains(a[i], 1e-12));
  }
}

TEST_CASE("finite-difference step size barely moves the optimum") {
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  const auto score = [](const Point& p) {
    return std::exp(-squared_distance(p, Point{0.0, 0.0}) / 2.0);
  };
  const BoxDomain domain = BoxDomain::centered_cube(2, 1.0);
  ContinuousOptConfig cfg;
  cfg.seed = 9;
  cfg.restarts = 3;
  const auto a = continuous_maximize(spec, score, domain, 2, Order::shannon(), cfg);
  ContinuousOptConfig doubled = cfg;
  doubled.fd_step *= 2.0;
  const auto b = continuous_maximize(spec, score, domain, 2, Order::shannon(), doubled);
  const double qa = batch_qvs(spec, score, a, Order::shannon());
  const double qb = batch_qvs(spec, score, b, Order::shannon());
  CHECK(std::abs(qa - qb) < 1e-4);
}

TEST_CASE("continuous_maximize rejects a non-finite score") {
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  const auto score = [](const Point&) { return std::nan(""); };
  const BoxDomain domain = BoxDomain::centered_cube(1, 1.0);
  ContinuousOptConfig cfg;
  cfg.restarts = 1;
  cfg.max_iters = 2;
  CHECK_THROWS_AS(continuous_maximize(spec, score, domain, 1, Order::shannon(), cfg),
                  std::runtime_error);
}
