#pragma once

#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "qvs/campaigns.hpp"
#include "qvs/kernels.hpp"
#include "qvs/vendi.hpp"

namespace qvs {

std::vector<Point> positive_points(const CampaignLog& log);

// VS_q of the discovered positives; 0 when none were found. At the report's
// default order this is the effective discovery count.
double eval_vs_of_positives(const CampaignLog& log, const KernelSpec& spec, Order order);

// Largest Euclidean distance between any pair of positives (0 below 2).
double eval_max_pairwise_distance(const CampaignLog& log);

// Log-determinant of the positives' kernel matrix via its spectrum; returns
// -infinity when any eigenvalue falls to 1e-12 or below (rank deficiency).
double eval_kernel_logdet(const CampaignLog& log, const KernelSpec& spec);

// VS_q of queried points whose observed value met the threshold; 0 when none.
double eval_threshold_discoveries(const CampaignLog& log, double threshold,
                                  const KernelSpec& spec, Order order);

double best_observed_value(const CampaignLog& log);

// Running best observation, one entry per query (nondecreasing).
std::vector<double> running_best(const CampaignLog& log);

// Running VS of positives, one entry per query.
std::vector<double> running_vs_of_positives(const CampaignLog& log, const KernelSpec& spec,
                                            Order order);

// Distinct peaks claimed by the solutions: each solution with value >=
// min_value is assigned to its nearest center.
std::size_t peaks_covered(std::span<const Solution> solutions, std::span<const Point> centers,
                          double min_value);

// One campaign's metric values keyed by (metric name, eval-q token); the
// q token is empty for order-independent metrics.
struct RunMetrics {
  std::string policy;
  std::string policy_q;
  std::size_t repeat = 0;
  std::vector<std::tuple<std::string, std::string, double>> values;
};

struct AggregatedCell {
  std::string policy;
  std::string policy_q;
  std::string eval_q;
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t repeats = 0;
  bool best = false;  // column-best across (policy, policy_q), ties flagged jointly
};

struct MetricsReport {
  std::vector<AggregatedCell> cells;
};

// Mean and standard error per (policy, policy_q, metric, eval_q) over
// repeats, with per-(metric, eval_q) best flags. Standard error is the sample
// standard deviation over sqrt(repeats), 0 for a single run.
MetricsReport aggregate(std::span<const RunMetrics> runs);

}  // namespace qvs
