#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "qvs/campaigns.hpp"
#include "qvs/evaluation.hpp"
#include "qvs/rng.hpp"
#include "qvs/synthetic.hpp"

using namespace qvs;

namespace {

std::vector<std::size_t> query_indices(const CampaignLog& log) {
  std::vector<std::size_t> out;
  for (const QueryRecord& q : log.queries) out.push_back(static_cast<std::size_t>(q.item));
  return out;
}

CampaignConfig base_config(Policy policy, std::size_t budget, std::size_t batch, double q,
                           std::uint64_t seed) {
  CampaignConfig cfg;
  cfg.policy = policy;
  cfg.budget = budget;
  cfg.batch_size = batch;
  cfg.q = Order::finite(q);
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("onestep_as_choice closed forms") {
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  ClassifierConfig ccfg;
  ccfg.k_neighbors = 2;

  SUBCASE("choice maximizes p(x) times the VS increment") {
    const std::vector<Point> pool{{0.0, 0.0}, {10.0, 0.0}, {5.0, 5.0}};
    LabeledData observed;
    observed.points = {Point{0.1, 0.1}, Point{0.2, -0.1}, Point{10.1, 0.1}, Point{9.9, -0.2}};
    observed.labels = {1.0, 1.0, 0.0, 1.0};
    const std::vector<std::size_t> candidates{0, 1, 2};

    std::vector<Point> positives;
    for (std::size_t i = 0; i < observed.size(); ++i) {
      if (observed.labels[i] == 1.0) positives.push_back(observed.points[i]);
    }
    const double vs_base = vendi_score(build_kernel_matrix(spec, positives), Order::shannon());
    double best_gain = -1.0;
    std::size_t best = 0;
    for (std::size_t idx : candidates) {
      std::vector<Point> augmented(positives);
      augmented.push_back(pool[idx]);
      const double gain =
          classify_prob(observed, ccfg, pool[idx]) *
          (vendi_score(build_kernel_matrix(spec, augmented), Order::shannon()) - vs_base);
      if (gain > best_gain) {
        best_gain = gain;
        best = idx;
      }
    }
    CHECK(onestep_as_choice(pool, candidates, observed, Order::shannon(), ccfg, spec) == best);
  }

  SUBCASE("novel candidate beats a duplicate of an existing positive") {
    const std::vector<Point> pool{{0.0, 0.0}, {20.0, 0.0}};
    LabeledData observed;
    observed.points = {Point{0.0, 0.0}, Point{0.3, 0.0}, Point{20.2, 0.1}};
    observed.labels = {1.0, 1.0, 1.0};  // probabilities equal wherever the classifier looks
    const std::vector<std::size_t> candidates{0, 1};
    // candidate 0 duplicates an existing positive; candidate 1 is ~orthogonal to it
    CHECK(onestep_as_choice(pool, candidates, observed, Order::shannon(), ccfg, spec) == 1);
  }

  SUBCASE("zero probabilities return the lowest index") {
    ClassifierConfig strict;
    strict.k_neighbors = 4;
    strict.smoothing = 1e-12;  // effectively raw frequencies
    const std::vector<Point> pool{{0.0}, {1.0}, {2.0}};
    LabeledData observed;
    observed.points = {Point{0.5}, Point{1.5}, Point{2.5}, Point{3.5}};
    observed.labels = {0.0, 0.0, 0.0, 0.0};
    const std::vector<std::size_t> candidates{0, 1, 2};
    CHECK(onestep_as_choice(pool, candidates, observed, Order::shannon(), strict, spec) == 0);
  }

  SUBCASE("empty candidates throw") {
    LabeledData observed;
    observed.points = {Point{0.0}};
    observed.labels = {1.0};
    CHECK_THROWS_AS(
        onestep_as_choice(std::vector<Point>{Point{0.0}}, std::vector<std::size_t>{}, observed,
                          Order::shannon(), ccfg, spec),
        std::invalid_argument);
  }
}

TEST_CASE("qvs-as with q=0 reduces to probability-greedy selection") {
  const BinaryPoolProblem problem = make_two_cluster_binary(20, 0.3, 3);
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  ClassifierConfig ccfg;
  ccfg.k_neighbors = 3;
  const std::vector<std::size_t> initial{0, 1, 2};

  const CampaignLog qvs0 = run_active_search(
      problem.points, problem.labels, base_config(Policy::QvsAs, 12, 3, 0.0, 5), ccfg, spec,
      initial);
  const CampaignLog blind = run_active_search(
      problem.points, problem.labels, base_config(Policy::DiversityBlindAs, 12, 3, 0.0, 5), ccfg,
      spec, initial);
  CHECK(query_indices(qvs0) == query_indices(blind));
}

TEST_CASE("active-search campaign invariants") {
  const BinaryPoolProblem problem = make_two_cluster_binary(40, 0.25, 11);
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  ClassifierConfig ccfg;
  const std::vector<std::size_t> initial{4, 9};

  for (Policy policy : {Policy::QvsAs, Policy::DiversityBlindAs, Policy::Random}) {
    const CampaignConfig cfg = base_config(policy, 17, 4, 1.0, 21);
    const CampaignLog log =
        run_active_search(problem.points, problem.labels, cfg, ccfg, spec, initial);

    CHECK(log.total_queries() == 17);  // budget exactness with a truncated final batch
    std::set<std::size_t> unique;
    for (const QueryRecord& q : log.queries) {
      unique.insert(static_cast<std::size_t>(q.item));
      CHECK(q.observation == static_cast<double>(problem.labels[q.item]));
    }
    CHECK(unique.size() == 17);  // no repeat queries

    // initial section is iteration 0 in order
    for (std::size_t i = 0; i < initial.size(); ++i) {
      CHECK(log.queries[i].iteration == 0);
      CHECK(static_cast<std::size_t>(log.queries[i].item) == initial[i]);
    }
  }
}

TEST_CASE("random pool policy is seed-deterministic") {
  const BinaryPoolProblem problem = make_two_cluster_binary(30, 0.2, 7);
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  ClassifierConfig ccfg;
  const CampaignConfig cfg = base_config(Policy::Random, 10, 3, 1.0, 99);
  const std::vector<std::size_t> initial{1};
  const CampaignLog a = run_active_search(problem.points, problem.labels, cfg, ccfg, spec, initial);
  const CampaignLog b = run_active_search(problem.points, problem.labels, cfg, ccfg, spec, initial);
  CHECK(query_indices(a) == query_indices(b));
}

TEST_CASE("onestep-as runs sequentially and respects its batch constraint") {
  const BinaryPoolProblem problem = make_two_cluster_binary(15, 0.3, 13);
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  ClassifierConfig ccfg;
  ccfg.k_neighbors = 3;

  CampaignConfig bad = base_config(Policy::OnestepAs, 6, 2, 1.0, 1);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  const CampaignConfig cfg = base_config(Policy::OnestepAs, 6, 1, 1.0, 1);
  const std::vector<std::size_t> initial{0, 3};
  const CampaignLog log =
      run_active_search(problem.points, problem.labels, cfg, ccfg, spec, initial);
  CHECK(log.total_queries() == 6);
}

TEST_CASE("two-cluster mini search: diversity-aware policy reaches both clusters") {
  const BinaryPoolProblem problem = make_two_cluster_binary(200, 0.15, 17);
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  ClassifierConfig ccfg;

  int qvs_both = 0, blind_both = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(seed, 0);
    const std::vector<std::size_t> initial = rng.sample_without_replacement(200, 5);
    for (Policy policy : {Policy::QvsAs, Policy::DiversityBlindAs}) {
      const CampaignLog log = run_active_search(
          problem.points, problem.labels, base_config(policy, 30, 5, 1.0, seed), ccfg, spec,
          initial);
      bool left = false, right = false;
      for (const QueryRecord& q : log.queries) {
        if (q.observation == 1.0) {
          (q.point[0] < 0 ? left : right) = true;
        }
      }
      if (left && right) (policy == Policy::QvsAs ? qvs_both : blind_both) += 1;
    }
  }
  CHECK(qvs_both >= 2);          // qvs-as consistently covers both
  CHECK(qvs_both >= blind_both); // and never less often than the blind policy
}

TEST_CASE("discrete bayesopt: q=0 with beta reduces to its UCB counterpart") {
  const ValuedPoolProblem problem = make_two_group_pool(50, 23);
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  GPConfig gp_cfg;
  const std::vector<std::size_t> initial{0, 1, 2};

  CampaignConfig qvs_cfg = base_config(Policy::QvsBayesoptDiscrete, 15, 3, 0.0, 31);
  CampaignConfig ucb_cfg = base_config(Policy::Ucb, 15, 3, 0.0, 31);
  const CampaignLog a =
      run_discrete_bayesopt(problem.points, problem.values, qvs_cfg, gp_cfg, spec, initial);
  const CampaignLog b =
      run_discrete_bayesopt(problem.points, problem.values, ucb_cfg, gp_cfg, spec, initial);
  CHECK(query_indices(a) == query_indices(b));

  SUBCASE("beta = 0 greedy-by-mean variant agrees too") {
    qvs_cfg.beta = 0.0;
    ucb_cfg.beta = 0.0;
    const CampaignLog c =
        run_discrete_bayesopt(problem.points, problem.values, qvs_cfg, gp_cfg, spec, initial);
    const CampaignLog d =
        run_discrete_bayesopt(problem.points, problem.values, ucb_cfg, gp_cfg, spec, initial);
    CHECK(query_indices(c) == query_indices(d));
  }
}

TEST_CASE("discrete bayesopt first choice with empty data is the lowest index") {
  // symmetric pool: prior UCB is constant, so the tie-break decides
  std::vector<Point> pool;
  for (int i = 0; i < 6; ++i) pool.push_back(Point{static_cast<double>(i) * 50.0});
  const std::vector<double> values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  CampaignConfig cfg = base_config(Policy::QvsBayesoptDiscrete, 1, 1, 1.0, 3);
  const CampaignLog log = run_discrete_bayesopt(pool, values, cfg, GPConfig{},
                                                KernelSpec::gaussian(1.0), {});
  REQUIRE(log.total_queries() == 1);
  CHECK(log.queries[0].item == 0);
}

TEST_CASE("discrete bayesopt explores both value groups under q=1") {
  const ValuedPoolProblem problem = make_two_group_pool(80, 29);
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  GPConfig gp_cfg;

  Rng rng(1, 0);
  const std::vector<std::size_t> initial = rng.sample_without_replacement(80, 4);
  const CampaignLog qvs_log = run_discrete_bayesopt(
      problem.points, problem.values, base_config(Policy::QvsBayesoptDiscrete, 20, 4, 1.0, 2),
      gp_cfg, spec, initial);

  bool left = false, right = false;
  for (const QueryRecord& q : qvs_log.queries) {
    if (q.observation > 0.5) (q.point[0] < 0 ? left : right) = true;
  }
  CHECK(left);
  CHECK(right);
}

TEST_CASE("continuous bayesopt invariants and reductions") {
  const MultiPeakProblem problem = make_multi_peak(3);
  const KernelSpec spec = KernelSpec::gaussian(1.5);
  GPConfig gp_cfg;

  std::vector<Point> initial;
  Rng rng(5, 0);
  for (int i = 0; i < 4; ++i) {
    initial.push_back(Point{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)});
  }

  SUBCASE("qvs-tr with q=0 matches turbo exactly under a shared seed") {
    CampaignConfig qvs_cfg = base_config(Policy::QvsBayesoptTr, 18, 3, 0.0, 77);
    qvs_cfg.trust_regions = 2;
    CampaignConfig turbo_cfg = qvs_cfg;
    turbo_cfg.policy = Policy::Turbo;

    const CampaignLog a =
        run_continuous_bayesopt(problem, problem.domain, qvs_cfg, gp_cfg, spec, initial);
    const CampaignLog b =
        run_continuous_bayesopt(problem, problem.domain, turbo_cfg, gp_cfg, spec, initial);
    REQUIRE(a.total_queries() == b.total_queries());
    for (std::size_t i = 0; i < a.total_queries(); ++i) {
      CHECK(a.queries[i].point.coords == b.queries[i].point.coords);
    }
  }

  SUBCASE("robot with tau=0 matches turbo exactly under a shared seed") {
    CampaignConfig robot_cfg = base_config(Policy::Robot, 18, 3, 1.0, 78);
    robot_cfg.trust_regions = 3;
    robot_cfg.tau = 0.0;
    CampaignConfig turbo_cfg = robot_cfg;
    turbo_cfg.policy = Policy::Turbo;

    const CampaignLog a =
        run_continuous_bayesopt(problem, problem.domain, robot_cfg, gp_cfg, spec, initial);
    const CampaignLog b =
        run_continuous_bayesopt(problem, problem.domain, turbo_cfg, gp_cfg, spec, initial);
    REQUIRE(a.total_queries() == b.total_queries());
    for (std::size_t i = 0; i < a.total_queries(); ++i) {
      CHECK(a.queries[i].point.coords == b.queries[i].point.coords);
    }
  }

  SUBCASE("robot with a huge tau leaves ranks 2..M stuck at the initial best") {
    CampaignConfig robot_cfg = base_config(Policy::Robot, 20, 3, 1.0, 79);
    robot_cfg.trust_regions = 3;
    robot_cfg.tau = 100.0;  // larger than the domain diameter
    const CampaignLog log =
        run_continuous_bayesopt(problem, problem.domain, robot_cfg, gp_cfg, spec, initial);
    CHECK(log.total_queries() == 20);
    // only rank 1 can accept, so all solutions collapse onto at most two points
    // (rank 1's incumbent plus the shared initial best)
    std::set<std::vector<double>> distinct;
    for (const Solution& s : log.solutions) distinct.insert(s.point.coords);
    CHECK(distinct.size() <= 2);
  }

  SUBCASE("budget exactness, feasibility and the monotone incumbent") {
    CampaignConfig cfg = base_config(Policy::QvsBayesoptTr, 17, 4, 1.0, 80);
    cfg.trust_regions = 2;
    const CampaignLog log =
        run_continuous_bayesopt(problem, problem.domain, cfg, gp_cfg, spec, initial);
    CHECK(log.total_queries() == 17);
    for (const QueryRecord& q : log.queries) CHECK(problem.domain.contains(q.point, 1e-9));
    const std::vector<double> incumbents = running_best(log);
    CHECK(std::is_sorted(incumbents.begin(), incumbents.end()));
    CHECK(log.solutions.size() == 2);
  }

  SUBCASE("random continuous policy is deterministic") {
    const CampaignConfig cfg = base_config(Policy::Random, 9, 3, 1.0, 81);
    const CampaignLog a =
        run_continuous_bayesopt(problem, problem.domain, cfg, gp_cfg, spec, initial);
    const CampaignLog b =
        run_continuous_bayesopt(problem, problem.domain, cfg, gp_cfg, spec, initial);
    REQUIRE(a.total_queries() == b.total_queries());
    for (std::size_t i = 0; i < a.total_queries(); ++i) {
      CHECK(a.queries[i].point.coords == b.queries[i].point.coords);
    }
  }
}

TEST_CASE("trust-region sides stay within bounds") {
  // a flat objective forces failures, shrinks and eventually restarts
  const auto flat = [](const Point&) { return 0.0; };
  const BoxDomain domain = BoxDomain::centered_cube(2, 1.0);
  CampaignConfig cfg = base_config(Policy::Turbo, 40, 2, 0.0, 5);
  cfg.trust_regions = 1;
  cfg.tr.fail_threshold = 1;  // shrink every iteration
  GPConfig gp_cfg;

  const std::vector<Point> initial{Point{0.0, 0.0}, Point{0.5, 0.5}};
  const CampaignLog log = run_continuous_bayesopt(flat, domain, cfg, gp_cfg,
                                                  KernelSpec::gaussian(1.0), initial);
  CHECK(log.total_queries() == 40);
  // the note carries the region side; it must stay in [l_min, l_max] between restarts
  for (const QueryRecord& q : log.queries) {
    if (q.note.rfind("tr0:L=", 0) != 0) continue;
    const double side = std::stod(q.note.substr(6));
    CHECK(side >= cfg.tr.l_min - 1e-12);
    CHECK(side <= cfg.tr.l_max + 1e-12);
  }
}

TEST_CASE("campaign config validation") {
  CampaignConfig cfg;
  cfg.budget = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.budget = 5;
  cfg.batch_size = 9;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.batch_size = 2;
  CHECK_NOTHROW(cfg.validate());

  const BinaryPoolProblem problem = make_two_cluster_binary(10, 0.3, 1);
  ClassifierConfig ccfg;
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  CampaignConfig over = base_config(Policy::Random, 11, 2, 1.0, 1);
  CHECK_THROWS_AS(run_active_search(problem.points, problem.labels, over, ccfg, spec, {}),
                  std::invalid_argument);
  CampaignConfig wrong_mode = base_config(Policy::Ucb, 5, 1, 1.0, 1);
  CHECK_THROWS_AS(run_active_search(problem.points, problem.labels, wrong_mode, ccfg, spec, {}),
                  std::invalid_argument);
}
