#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qvs/geometry.hpp"
#include "qvs/kernels.hpp"
#include "qvs/surrogates.hpp"
#include "qvs/vendi.hpp"

namespace qvs {

enum class Policy {
  QvsAs,
  OnestepAs,
  Random,
  DiversityBlindAs,
  QvsBayesoptTr,
  Turbo,
  Robot,
  QvsBayesoptDiscrete,
  Ucb,
};

Policy parse_policy(std::string_view name);
std::string to_string(Policy policy);

bool policy_is_active_search(Policy policy);
bool policy_is_continuous(Policy policy);
bool policy_is_discrete_bayesopt(Policy policy);

// Adaptation constants for trust-region campaigns. Side lengths live in the
// unit-normalized domain.
struct TrustRegionParams {
  double l_init = 0.8;
  double l_min = 0.0078125;  // 2^-7
  double l_max = 1.6;
  int succ_threshold = 3;
  int fail_threshold = 5;
  std::size_t candidates_per_dim = 50;
  std::size_t max_candidates = 1000;
};

struct CampaignConfig {
  std::size_t budget = 0;      // total oracle queries, initial data included
  std::size_t batch_size = 1;  // queries per iteration
  Order q = Order::shannon();
  std::uint64_t seed = 0;
  Policy policy = Policy::Random;
  double tau = 0.0;                // robot distance threshold
  std::size_t trust_regions = 1;   // M
  double beta = 2.0;               // ucb exploration weight
  TrustRegionParams tr;

  void validate() const;
};

// One trust region / rank-ordered solution. Coordinates are unit-normalized.
struct TrustRegion {
  std::vector<double> center;
  double side = 0.8;
  int successes = 0;
  int failures = 0;
  double incumbent_value = 0.0;
  std::vector<double> incumbent_point;
};

struct QueryRecord {
  std::size_t iteration = 0;  // 0 marks initial data
  std::ptrdiff_t item = -1;   // pool index, -1 for continuous queries
  Point point;
  double observation = 0.0;
  std::string note;  // policy internals snapshot, not exported to CSV
};

struct Solution {
  Point point;
  double value = 0.0;
};

// Append-only record of one campaign: every oracle query in order, plus the
// reported solution set for the continuous BayesOpt policies.
struct CampaignLog {
  bool binary_labels = false;
  std::vector<QueryRecord> queries;
  std::vector<Solution> solutions;

  std::size_t total_queries() const { return queries.size(); }
};

// One-step Bayes-optimal sequential choice: the candidate maximizing
// p(x) * (VS_q(positives + x) - VS_q(positives)), ties by lowest index.
// `candidates` index into `pool`.
std::size_t onestep_as_choice(std::span<const Point> pool,
                              std::span<const std::size_t> candidates,
                              const LabeledData& observed, Order q,
                              const ClassifierConfig& classifier_cfg, const KernelSpec& spec);

// Active search over a binary-labeled pool. Policies: qvs-as, onestep-as,
// diversity-blind-as, random. `initial` items are queried first (iteration 0)
// and count toward the budget.
CampaignLog run_active_search(std::span<const Point> pool, std::span<const int> labels,
                              const CampaignConfig& cfg, const ClassifierConfig& classifier_cfg,
                              const KernelSpec& spec, std::span<const std::size_t> initial);

// BayesOpt over a real-valued pool whose kernel matrix doubles as the GP
// covariance. Policies: qvs-bayesopt-discrete, ucb, random.
CampaignLog run_discrete_bayesopt(std::span<const Point> pool, std::span<const double> values,
                                  const CampaignConfig& cfg, const GPConfig& gp_cfg,
                                  const KernelSpec& spec, std::span<const std::size_t> initial);

// Trust-region BayesOpt over a continuous box. Policies: qvs-bayesopt-tr,
// turbo, robot, random.
CampaignLog run_continuous_bayesopt(const std::function<double(const Point&)>& objective,
                                    const BoxDomain& domain, const CampaignConfig& cfg,
                                    const GPConfig& gp_cfg, const KernelSpec& spec,
                                    std::span<const Point> initial);

}  // namespace qvs
