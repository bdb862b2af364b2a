#include "qvs/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include "qvs/campaigns.hpp"
#include "qvs/dataset.hpp"
#include "qvs/evaluation.hpp"
#include "qvs/rng.hpp"
#include "qvs/subset_select.hpp"
#include "qvs/synthetic.hpp"

namespace qvs {

namespace {

namespace fs = std::filesystem;

enum class ProblemMode { BinaryPool, ValuedPool, Continuous };

struct ProblemInstance {
  ProblemMode mode = ProblemMode::BinaryPool;
  std::vector<Point> pool;
  std::vector<int> labels;
  std::vector<double> values;
  BoxDomain domain;
  std::function<double(const Point&)> objective;
  std::vector<Point> centers;
  double peak_height = 1.0;
};

bool wants_as(const RunConfig& cfg) {
  return std::any_of(cfg.policies.begin(), cfg.policies.end(), [](Policy p) {
    return p == Policy::QvsAs || p == Policy::OnestepAs || p == Policy::DiversityBlindAs;
  });
}
bool wants_discrete(const RunConfig& cfg) {
  return std::any_of(cfg.policies.begin(), cfg.policies.end(), [](Policy p) {
    return p == Policy::QvsBayesoptDiscrete || p == Policy::Ucb;
  });
}
bool wants_continuous(const RunConfig& cfg) {
  return std::any_of(cfg.policies.begin(), cfg.policies.end(), [](Policy p) {
    return p == Policy::QvsBayesoptTr || p == Policy::Turbo || p == Policy::Robot;
  });
}

ProblemInstance build_problem(const RunConfig& cfg) {
  const int mode_requests =
      (wants_as(cfg) ? 1 : 0) + (wants_discrete(cfg) ? 1 : 0) + (wants_continuous(cfg) ? 1 : 0);
  if (mode_requests > 1) {
    throw ConfigError("config: policies mix active-search, discrete and continuous modes");
  }

  ProblemInstance inst;
  if (cfg.problem_type == "dataset") {
    const Dataset ds = load_dataset_csv(cfg.dataset_path);
    if (wants_continuous(cfg)) {
      throw ConfigError("config: continuous policies need a synthetic continuous problem");
    }
    if (wants_as(cfg) || (!wants_discrete(cfg) && ds.labels)) {
      if (!ds.labels) throw ConfigError("config: dataset lacks the label column needed for AS");
      inst.mode = ProblemMode::BinaryPool;
      inst.pool = ds.points;
      inst.labels = *ds.labels;
    } else {
      if (!ds.values) {
        throw ConfigError("config: dataset lacks the value column needed for BayesOpt");
      }
      inst.mode = ProblemMode::ValuedPool;
      inst.pool = ds.points;
      inst.values = *ds.values;
    }
  } else if (cfg.problem_type == "two-cluster-binary" ||
             cfg.problem_type == "ring-of-clusters-binary") {
    if (wants_discrete(cfg) || wants_continuous(cfg)) {
      throw ConfigError("config: binary pool problems support only AS policies (plus random)");
    }
    BinaryPoolProblem problem;
    if (cfg.problem_type == "two-cluster-binary") {
      TwoClusterParams params;
      params.dim = cfg.dim;
      params.box_half = cfg.box_half;
      params.cluster_offset = cfg.cluster_offset;
      params.cluster_spread = cfg.cluster_spread;
      problem = make_two_cluster_binary(cfg.pool_size, cfg.positive_rate, cfg.problem_seed, params);
    } else {
      RingParams params;
      params.dim = cfg.dim;
      params.box_half = cfg.box_half;
      params.ring_radius = cfg.ring_radius;
      params.cluster_spread = cfg.cluster_spread;
      problem = make_ring_clusters_binary(cfg.pool_size, cfg.positive_rate, cfg.clusters,
                                          cfg.problem_seed, params);
    }
    inst.mode = ProblemMode::BinaryPool;
    inst.pool = std::move(problem.points);
    inst.labels = std::move(problem.labels);
    inst.centers = std::move(problem.centers);
  } else if (cfg.problem_type == "two-group-discrete-pool") {
    if (wants_as(cfg) || wants_continuous(cfg)) {
      throw ConfigError("config: discrete pool problems support only BayesOpt pool policies");
    }
    TwoGroupParams params;
    params.dim = cfg.dim;
    params.box_half = cfg.box_half;
    params.group_offset = cfg.group_offset;
    params.group_spread = cfg.group_spread;
    params.group_fraction = cfg.group_fraction;
    params.value_width = cfg.value_width;
    ValuedPoolProblem problem = make_two_group_pool(cfg.pool_size, cfg.problem_seed, params);
    inst.mode = ProblemMode::ValuedPool;
    inst.pool = std::move(problem.points);
    inst.values = std::move(problem.values);
    inst.centers = std::move(problem.centers);
  } else if (cfg.problem_type == "multi-peak-continuous") {
    if (wants_as(cfg) || wants_discrete(cfg)) {
      throw ConfigError("config: the continuous problem supports only trust-region policies");
    }
    MultiPeakParams params;
    params.dim = cfg.dim;
    params.box_half = cfg.box_half;
    params.height = cfg.peak_height;
    params.width = cfg.peak_width;
    params.ring_radius = cfg.peak_radius;
    MultiPeakProblem problem = make_multi_peak(cfg.peak_count, params);
    inst.mode = ProblemMode::Continuous;
    inst.domain = problem.domain;
    inst.centers = problem.centers;
    inst.peak_height = cfg.peak_height;
    inst.objective = problem;  // copies the bump list
  } else {
    throw ConfigError("config: unknown problem.type '" + cfg.problem_type + "'");
  }

  if (inst.mode != ProblemMode::Continuous && cfg.budget > inst.pool.size()) {
    throw ConfigError("config: budget exceeds the pool size");
  }
  return inst;
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

std::string item_token(const QueryRecord& record) {
  if (record.item >= 0) return std::to_string(record.item);
  std::string token;
  for (std::size_t i = 0; i < record.point.dim(); ++i) {
    if (i) token += ';';
    token += format_double(record.point[i]);
  }
  return token;
}

void write_log_csv(const fs::path& path, const CampaignLog& log, std::size_t repeat,
                   const std::string& policy, const std::string& q) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write log file " + path.string());
  out << "iter,repeat,policy,q,item,observation\n";
  for (const QueryRecord& record : log.queries) {
    out << record.iteration << ',' << repeat << ',' << policy << ',' << q << ','
        << item_token(record) << ',' << format_double(record.observation) << "\n";
  }
  for (const Solution& s : log.solutions) {  // reported solution set, iter = -1
    std::string token;
    for (std::size_t i = 0; i < s.point.dim(); ++i) {
      if (i) token += ';';
      token += format_double(s.point[i]);
    }
    out << "-1," << repeat << ',' << policy << ',' << q << ',' << token << ','
        << format_double(s.value) << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

RunMetrics compute_metrics(const CampaignLog& log, const ProblemInstance& inst,
                           const RunConfig& cfg, const std::string& policy, const std::string& q,
                           std::size_t repeat) {
  RunMetrics m;
  m.policy = policy;
  m.policy_q = q;
  m.repeat = repeat;
  std::vector<Order> eval_orders = cfg.eval_q;
  if (eval_orders.empty()) eval_orders.push_back(cfg.report_q);

  if (inst.mode == ProblemMode::BinaryPool) {
    for (const Order& order : eval_orders) {
      m.values.emplace_back("vs_positives", order.str(),
                            eval_vs_of_positives(log, cfg.kernel, order));
    }
    m.values.emplace_back("effective_discoveries", "",
                          eval_vs_of_positives(log, cfg.kernel, cfg.report_q));
    m.values.emplace_back("max_pairwise_distance", "", eval_max_pairwise_distance(log));
    const bool any_positive = !positive_points(log).empty();
    const double logdet = any_positive ? eval_kernel_logdet(log, cfg.kernel)
                                       : -std::numeric_limits<double>::infinity();
    m.values.emplace_back("kernel_logdet", "", logdet);
    m.values.emplace_back("kernel_det", "", std::isinf(logdet) ? 0.0 : std::exp(logdet));
  } else if (inst.mode == ProblemMode::ValuedPool) {
    m.values.emplace_back("best_value", "", best_observed_value(log));
    for (const Order& order : eval_orders) {
      m.values.emplace_back("threshold_vs", order.str(),
                            eval_threshold_discoveries(log, cfg.good_threshold, cfg.kernel, order));
    }
  } else {
    m.values.emplace_back("best_value", "", best_observed_value(log));
    for (const Order& order : eval_orders) {
      m.values.emplace_back("threshold_vs", order.str(),
                            eval_threshold_discoveries(log, cfg.good_threshold, cfg.kernel, order));
    }
    if (!inst.centers.empty()) {
      const double min_value = 0.5 * inst.peak_height;
      m.values.emplace_back(
          "peaks_covered", "",
          static_cast<double>(peaks_covered(log.solutions, inst.centers, min_value)));
    }
  }
  return m;
}

void write_metrics_csv(const fs::path& path, const MetricsReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics file " + path.string());
  out << "policy,q_policy,q_eval,metric,mean,stderr,best_flag\n";
  for (const AggregatedCell& cell : report.cells) {
    out << cell.policy << ',' << cell.policy_q << ',' << cell.eval_q << ',' << cell.metric << ','
        << format_double(cell.mean) << ',' << format_double(cell.stderr_) << ','
        << (cell.best ? 1 : 0) << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

struct TaskOutput {
  CampaignLog log;
  RunMetrics metrics;
  std::vector<double> trajectory;
  std::string trajectory_metric;
};

int execute_config(const std::string& config_path, const GlobalOptions& opts,
                   bool with_trajectories) {
  RunConfig cfg = load_run_config(config_path, opts.overrides);
  if (opts.seed) cfg.base_seed = *opts.seed;
  if (opts.output_dir) cfg.output_dir = *opts.output_dir;
  if (opts.jobs) cfg.jobs = *opts.jobs;
  validate_run_config(cfg);

  const ProblemInstance inst = build_problem(cfg);

  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir / "logs");

  // initial data per repeat, shared across every policy and q
  std::vector<std::vector<std::size_t>> initial_indices(cfg.repeats);
  std::vector<std::vector<Point>> initial_points(cfg.repeats);
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    Rng rng(cfg.base_seed + r, 0);
    if (inst.mode == ProblemMode::Continuous) {
      for (std::size_t i = 0; i < cfg.initial_size; ++i) {
        Point p{std::vector<double>(inst.domain.dim())};
        for (std::size_t d = 0; d < inst.domain.dim(); ++d) {
          p[d] = rng.uniform(inst.domain.lower[d], inst.domain.upper[d]);
        }
        initial_points[r].push_back(std::move(p));
      }
    } else {
      initial_indices[r] = rng.sample_without_replacement(inst.pool.size(), cfg.initial_size);
    }
  }

  struct Task {
    std::size_t policy_idx;
    std::size_t q_idx;
    std::size_t repeat;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
    for (std::size_t qi = 0; qi < cfg.q_values.size(); ++qi) {
      for (std::size_t r = 0; r < cfg.repeats; ++r) tasks.push_back({p, qi, r});
    }
  }

  std::vector<TaskOutput> outputs(tasks.size());
  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t t) {
    const Task& task = tasks[t];
    const Policy policy = cfg.policies[task.policy_idx];
    const Order q = cfg.q_values[task.q_idx];

    CampaignConfig ccfg;
    ccfg.budget = cfg.budget;
    ccfg.batch_size = cfg.batch_size;
    ccfg.q = q;
    ccfg.seed = cfg.base_seed + task.repeat;
    ccfg.policy = policy;
    ccfg.tau = cfg.tau;
    ccfg.trust_regions = cfg.trust_regions;
    ccfg.beta = cfg.beta;

    TaskOutput& out = outputs[t];
    if (inst.mode == ProblemMode::BinaryPool) {
      out.log = run_active_search(inst.pool, inst.labels, ccfg, cfg.classifier, cfg.kernel,
                                  initial_indices[task.repeat]);
      out.trajectory = running_vs_of_positives(out.log, cfg.kernel, cfg.report_q);
      out.trajectory_metric = "vs_positives";
    } else if (inst.mode == ProblemMode::ValuedPool) {
      out.log = run_discrete_bayesopt(inst.pool, inst.values, ccfg, cfg.gp, cfg.kernel,
                                      initial_indices[task.repeat]);
      out.trajectory = running_best(out.log);
      out.trajectory_metric = "incumbent";
    } else {
      out.log = run_continuous_bayesopt(inst.objective, inst.domain, ccfg, cfg.gp, cfg.kernel,
                                        initial_points[task.repeat]);
      out.trajectory = running_best(out.log);
      out.trajectory_metric = "incumbent";
    }
    out.metrics = compute_metrics(out.log, inst, cfg, to_string(policy), q.str(), task.repeat);
  });

  // single-writer output pass, in task order
  std::vector<RunMetrics> all_metrics;
  all_metrics.reserve(outputs.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const Task& task = tasks[t];
    const std::string policy = to_string(cfg.policies[task.policy_idx]);
    const std::string q = cfg.q_values[task.q_idx].str();
    const fs::path log_path =
        out_dir / "logs" / (policy + "_q" + q + "_r" + std::to_string(task.repeat) + ".csv");
    write_log_csv(log_path, outputs[t].log, task.repeat, policy, q);
    all_metrics.push_back(outputs[t].metrics);
  }
  const MetricsReport report = aggregate(all_metrics);
  write_metrics_csv(out_dir / "metrics.csv", report);

  if (with_trajectories) {
    std::ofstream out(out_dir / "trajectories.csv");
    if (!out) throw std::runtime_error("cannot write trajectories.csv");
    out << "policy,q,repeat,iter,metric,value\n";
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      const Task& task = tasks[t];
      const std::string policy = to_string(cfg.policies[task.policy_idx]);
      const std::string q = cfg.q_values[task.q_idx].str();
      for (std::size_t i = 0; i < outputs[t].trajectory.size(); ++i) {
        out << policy << ',' << q << ',' << task.repeat << ',' << (i + 1) << ','
            << outputs[t].trajectory_metric << ',' << format_double(outputs[t].trajectory[i])
            << "\n";
      }
    }
    if (!out) throw std::runtime_error("write failed for trajectories.csv");
  }

  std::cout << "wrote " << tasks.size() << " campaign logs under " << (out_dir / "logs").string()
            << "\n";
  std::cout << "metrics: " << (out_dir / "metrics.csv").string() << "\n";
  if (with_trajectories) {
    std::cout << "trajectories: " << (out_dir / "trajectories.csv").string() << "\n";
  }
  for (const AggregatedCell& cell : report.cells) {
    if (!cell.eval_q.empty() && cell.eval_q != cfg.report_q.str()) continue;
    const std::string eval_tag = cell.eval_q.empty() ? "" : ("@q=" + cell.eval_q);
    std::printf("  %-22s q=%-4s %-24s %s: %.6g (se %.3g)%s\n", cell.policy.c_str(),
                cell.policy_q.c_str(), cell.metric.c_str(), eval_tag.c_str(), cell.mean,
                cell.stderr_, cell.best ? "  [best]" : "");
  }
  return 0;
}

}  // namespace

int cmd_score(const std::string& dataset_path, const KernelSpec& spec,
              const std::vector<Order>& orders, const std::optional<std::string>& csv_out) {
  spec.validate();
  if (orders.empty()) throw ConfigError("score: at least one q value is required");
  const Dataset ds = load_dataset_csv(dataset_path);
  const KernelMatrix kernel = build_kernel_matrix(spec, ds.points);
  const Spectrum spectrum = eigen_symmetric(kernel);

  double mean_score = 0.0;
  if (ds.values) {
    const std::vector<double> scores = min_max_normalize(*ds.values);
    for (double s : scores) mean_score += s;
    mean_score /= static_cast<double>(scores.size());
  }

  std::ofstream csv;
  if (csv_out) {
    csv.open(*csv_out);
    if (!csv) throw std::runtime_error("score: cannot write '" + *csv_out + "'");
    csv << (ds.values ? "q,vs,qvs\n" : "q,vs\n");
  }
  std::printf("%-8s %-14s%s\n", "q", "vs", ds.values ? " qvs" : "");
  for (const Order& order : orders) {
    const double vs = vendi_score_from_normalized(spectrum.normalized, order);
    if (ds.values) {
      std::printf("%-8s %-14.8g %.8g\n", order.str().c_str(), vs, mean_score * vs);
      if (csv_out) {
        csv << order.str() << ',' << format_double(vs) << ',' << format_double(mean_score * vs)
            << "\n";
      }
    } else {
      std::printf("%-8s %.8g\n", order.str().c_str(), vs);
      if (csv_out) csv << order.str() << ',' << format_double(vs) << "\n";
    }
  }
  return 0;
}

int cmd_select(const std::string& dataset_path, const KernelSpec& spec, std::size_t batch,
               Order order) {
  spec.validate();
  const Dataset ds = load_dataset_csv(dataset_path);
  if (batch == 0 || batch > ds.size()) {
    throw ConfigError("select: batch must be in [1, rows]");
  }
  ScoredSet pool;
  pool.items = ds.points;
  pool.scores = ds.values ? min_max_normalize(*ds.values)
                          : std::vector<double>(ds.size(), 1.0);
  GreedyConfig gcfg;
  gcfg.batch_size = batch;
  const std::vector<std::size_t> chosen = greedy_select(pool, spec, order, gcfg);

  ScoredSet subset;
  for (std::size_t idx : chosen) {
    subset.items.push_back(pool.items[idx]);
    subset.scores.push_back(pool.scores[idx]);
  }
  const double achieved = quality_weighted_vendi_score(subset, spec, order);
  std::printf("selected:");
  for (std::size_t idx : chosen) std::printf(" %zu", idx);
  std::printf("\nqvs: %.8g\n", achieved);
  return 0;
}

int cmd_run(const std::string& config_path, const GlobalOptions& opts) {
  return execute_config(config_path, opts, false);
}

int cmd_bench(const std::string& config_path, const GlobalOptions& opts) {
  return execute_config(config_path, opts, true);
}

int cmd_gen(const GenOptions& opts) {
  if (opts.out_path.empty()) throw ConfigError("gen: --out is required");
  Dataset ds;
  if (opts.name == "two-cluster-binary") {
    const BinaryPoolProblem problem =
        make_two_cluster_binary(opts.pool_size, opts.positive_rate, opts.seed);
    ds.points = problem.points;
    ds.labels = problem.labels;
  } else if (opts.name == "ring-of-clusters-binary") {
    const BinaryPoolProblem problem =
        make_ring_clusters_binary(opts.pool_size, opts.positive_rate, opts.clusters, opts.seed);
    ds.points = problem.points;
    ds.labels = problem.labels;
  } else if (opts.name == "two-group-discrete-pool") {
    const ValuedPoolProblem problem = make_two_group_pool(opts.pool_size, opts.seed);
    ds.points = problem.points;
    ds.values = problem.values;
  } else if (opts.name == "multi-peak-continuous") {
    // regular grid sample of the bump surface, plot-ready
    const MultiPeakProblem problem = make_multi_peak(opts.peaks);
    if (opts.grid_resolution < 2) throw ConfigError("gen: grid resolution must be >= 2");
    ds.values.emplace();
    const std::size_t res = opts.grid_resolution;
    for (std::size_t i = 0; i < res; ++i) {
      for (std::size_t j = 0; j < res; ++j) {
        Point p{{problem.domain.lower[0] + (problem.domain.upper[0] - problem.domain.lower[0]) *
                                               static_cast<double>(i) /
                                               static_cast<double>(res - 1),
                 problem.domain.lower[1] + (problem.domain.upper[1] - problem.domain.lower[1]) *
                                               static_cast<double>(j) /
                                               static_cast<double>(res - 1)}};
        ds.values->push_back(problem(p));
        ds.points.push_back(std::move(p));
      }
    }
  } else {
    throw ConfigError("gen: unknown generator '" + opts.name + "'");
  }
  write_dataset_csv(opts.out_path, ds);
  std::cout << "wrote " << ds.size() << " rows to " << opts.out_path << "\n";
  return 0;
}

}  // namespace qvs
