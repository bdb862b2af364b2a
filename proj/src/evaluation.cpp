#include "qvs/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "qvs/eigen.hpp"

namespace qvs {

std::vector<Point> positive_points(const CampaignLog& log) {
  std::vector<Point> out;
  for (const QueryRecord& q : log.queries) {
    if (q.observation == 1.0) out.push_back(q.point);
  }
  return out;
}

double eval_vs_of_positives(const CampaignLog& log, const KernelSpec& spec, Order order) {
  const std::vector<Point> positives = positive_points(log);
  if (positives.empty()) return 0.0;
  return vendi_score(build_kernel_matrix(spec, positives), order);
}

double eval_max_pairwise_distance(const CampaignLog& log) {
  const std::vector<Point> positives = positive_points(log);
  if (positives.size() < 2) return 0.0;
  double mx = 0.0;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    for (std::size_t j = i + 1; j < positives.size(); ++j) {
      mx = std::max(mx, distance(positives[i], positives[j]));
    }
  }
  return mx;
}

double eval_kernel_logdet(const CampaignLog& log, const KernelSpec& spec) {
  const std::vector<Point> positives = positive_points(log);
  if (positives.empty()) {
    throw std::invalid_argument("eval_kernel_logdet: needs at least one positive");
  }
  const Spectrum spectrum = eigen_symmetric(build_kernel_matrix(spec, positives));
  double logdet = 0.0;
  for (double lambda : spectrum.eigenvalues) {
    if (lambda <= 1e-12) return -std::numeric_limits<double>::infinity();
    logdet += std::log(lambda);
  }
  return logdet;
}

double eval_threshold_discoveries(const CampaignLog& log, double threshold,
                                  const KernelSpec& spec, Order order) {
  std::vector<Point> qualifying;
  for (const QueryRecord& q : log.queries) {
    if (q.observation >= threshold) qualifying.push_back(q.point);
  }
  if (qualifying.empty()) return 0.0;
  return vendi_score(build_kernel_matrix(spec, qualifying), order);
}

double best_observed_value(const CampaignLog& log) {
  double best = -std::numeric_limits<double>::infinity();
  for (const QueryRecord& q : log.queries) best = std::max(best, q.observation);
  return best;
}

std::vector<double> running_best(const CampaignLog& log) {
  std::vector<double> out;
  out.reserve(log.queries.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const QueryRecord& q : log.queries) {
    best = std::max(best, q.observation);
    out.push_back(best);
  }
  return out;
}

std::vector<double> running_vs_of_positives(const CampaignLog& log, const KernelSpec& spec,
                                            Order order) {
  std::vector<double> out;
  out.reserve(log.queries.size());
  std::vector<Point> positives;
  for (const QueryRecord& q : log.queries) {
    if (q.observation == 1.0) positives.push_back(q.point);
    out.push_back(positives.empty()
                      ? 0.0
                      : vendi_score(build_kernel_matrix(spec, positives), order));
  }
  return out;
}

std::size_t peaks_covered(std::span<const Solution> solutions, std::span<const Point> centers,
                          double min_value) {
  if (centers.empty()) return 0;
  std::vector<bool> hit(centers.size(), false);
  for (const Solution& s : solutions) {
    if (s.value < min_value) continue;
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = distance(s.point, centers[c]);
      if (d < best) {
        best = d;
        nearest = c;
      }
    }
    hit[nearest] = true;
  }
  std::size_t count = 0;
  for (bool h : hit) count += h ? 1 : 0;
  return count;
}

MetricsReport aggregate(std::span<const RunMetrics> runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate: no runs");

  // (policy, policy_q, metric, eval_q) -> samples, in first-seen order
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<double>> samples;
  for (const RunMetrics& run : runs) {
    for (const auto& [metric, eval_q, value] : run.values) {
      Key key{run.policy, run.policy_q, metric, eval_q};
      auto it = samples.find(key);
      if (it == samples.end()) {
        order.push_back(key);
        samples.emplace(std::move(key), std::vector<double>{value});
      } else {
        it->second.push_back(value);
      }
    }
  }

  MetricsReport report;
  for (const Key& key : order) {
    const std::vector<double>& xs = samples.at(key);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double se = 0.0;
    if (xs.size() >= 2) {
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      se = std::sqrt(ss / static_cast<double>(xs.size() - 1)) /
           std::sqrt(static_cast<double>(xs.size()));
    }
    AggregatedCell cell;
    cell.policy = std::get<0>(key);
    cell.policy_q = std::get<1>(key);
    cell.metric = std::get<2>(key);
    cell.eval_q = std::get<3>(key);
    cell.mean = mean;
    cell.stderr_ = se;
    cell.repeats = xs.size();
    report.cells.push_back(std::move(cell));
  }

  // column best per (metric, eval_q); exact ties flagged jointly
  std::map<std::pair<std::string, std::string>, double> column_best;
  for (const AggregatedCell& cell : report.cells) {
    const auto col = std::make_pair(cell.metric, cell.eval_q);
    auto it = column_best.find(col);
    if (it == column_best.end() || cell.mean > it->second) column_best[col] = cell.mean;
  }
  for (AggregatedCell& cell : report.cells) {
    cell.best = (cell.mean == column_best.at({cell.metric, cell.eval_q}));
  }
  return report;
}

}  // namespace qvs
