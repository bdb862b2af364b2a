#include "qvs/campaigns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "qvs/rng.hpp"
#include "qvs/subset_select.hpp"

namespace qvs {

Policy parse_policy(std::string_view name) {
  if (name == "qvs-as") return Policy::QvsAs;
  if (name == "onestep-as") return Policy::OnestepAs;
  if (name == "random") return Policy::Random;
  if (name == "diversity-blind-as") return Policy::DiversityBlindAs;
  if (name == "qvs-bayesopt-tr") return Policy::QvsBayesoptTr;
  if (name == "turbo") return Policy::Turbo;
  if (name == "robot") return Policy::Robot;
  if (name == "qvs-bayesopt-discrete") return Policy::QvsBayesoptDiscrete;
  if (name == "ucb") return Policy::Ucb;
  throw std::invalid_argument("unknown policy: " + std::string(name));
}

std::string to_string(Policy policy) {
  switch (policy) {
    case Policy::QvsAs: return "qvs-as";
    case Policy::OnestepAs: return "onestep-as";
    case Policy::Random: return "random";
    case Policy::DiversityBlindAs: return "diversity-blind-as";
    case Policy::QvsBayesoptTr: return "qvs-bayesopt-tr";
    case Policy::Turbo: return "turbo";
    case Policy::Robot: return "robot";
    case Policy::QvsBayesoptDiscrete: return "qvs-bayesopt-discrete";
    case Policy::Ucb: return "ucb";
  }
  return "?";
}

bool policy_is_active_search(Policy policy) {
  return policy == Policy::QvsAs || policy == Policy::OnestepAs ||
         policy == Policy::DiversityBlindAs || policy == Policy::Random;
}

bool policy_is_continuous(Policy policy) {
  return policy == Policy::QvsBayesoptTr || policy == Policy::Turbo || policy == Policy::Robot ||
         policy == Policy::Random;
}

bool policy_is_discrete_bayesopt(Policy policy) {
  return policy == Policy::QvsBayesoptDiscrete || policy == Policy::Ucb ||
         policy == Policy::Random;
}

void CampaignConfig::validate() const {
  if (budget == 0) throw std::invalid_argument("CampaignConfig: budget must be positive");
  if (batch_size == 0 || batch_size > budget) {
    throw std::invalid_argument("CampaignConfig: batch_size must be in [1, budget]");
  }
  if (trust_regions == 0) {
    throw std::invalid_argument("CampaignConfig: trust_regions must be >= 1");
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("CampaignConfig: tau must be finite and >= 0");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("CampaignConfig: beta must be finite and >= 0");
  }
  if (!(tr.l_min > 0.0) || !(tr.l_init >= tr.l_min) || !(tr.l_max >= tr.l_init)) {
    throw std::invalid_argument("CampaignConfig: trust-region sides need l_min <= l_init <= l_max");
  }
  if (tr.succ_threshold < 1 || tr.fail_threshold < 1 || tr.candidates_per_dim == 0 ||
      tr.max_candidates == 0) {
    throw std::invalid_argument("CampaignConfig: trust-region counters must be positive");
  }
  if (policy == Policy::OnestepAs && batch_size != 1) {
    throw std::invalid_argument("CampaignConfig: onestep-as is sequential (batch_size 1)");
  }
}

namespace {

void check_initial_indices(std::span<const std::size_t> initial, std::size_t pool_size,
                           std::size_t budget) {
  if (initial.size() > budget) {
    throw std::invalid_argument("campaign: initial data exceeds budget");
  }
  std::vector<bool> seen(pool_size, false);
  for (std::size_t idx : initial) {
    if (idx >= pool_size) throw std::invalid_argument("campaign: initial index out of range");
    if (seen[idx]) throw std::invalid_argument("campaign: duplicate initial index");
    seen[idx] = true;
  }
}

// Top-n positions by (value desc, pool index asc).
std::vector<std::size_t> top_n_by_value(std::span<const std::size_t> candidates,
                                        std::span<const double> values, std::size_t n) {
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return candidates[a] < candidates[b];
  });
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(candidates[order[i]]);
  return out;
}

std::string as_note(std::size_t positives) { return "npos=" + std::to_string(positives); }

}  // namespace

std::size_t onestep_as_choice(std::span<const Point> pool,
                              std::span<const std::size_t> candidates,
                              const LabeledData& observed, Order q,
                              const ClassifierConfig& classifier_cfg, const KernelSpec& spec) {
  if (candidates.empty()) {
    throw std::invalid_argument("onestep_as_choice: empty candidate set");
  }
  observed.validate_binary();

  std::vector<Point> positives;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed.labels[i] == 1.0) positives.push_back(observed.points[i]);
  }
  const double vs_base =
      positives.empty() ? 0.0 : vendi_score(build_kernel_matrix(spec, positives), q);

  double best_gain = -std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  bool have_best = false;
  std::vector<Point> augmented(positives);
  augmented.emplace_back();
  for (std::size_t idx : candidates) {
    if (idx >= pool.size()) throw std::invalid_argument("onestep_as_choice: index out of range");
    const double p = classify_prob(observed, classifier_cfg, pool[idx]);
    augmented.back() = pool[idx];
    const double vs_aug = vendi_score(build_kernel_matrix(spec, augmented), q);
    const double gain = p * (vs_aug - vs_base);
    if (!have_best || gain > best_gain || (gain == best_gain && idx < best_idx)) {
      best_gain = gain;
      best_idx = idx;
      have_best = true;
    }
  }
  return best_idx;
}

CampaignLog run_active_search(std::span<const Point> pool, std::span<const int> labels,
                              const CampaignConfig& cfg, const ClassifierConfig& classifier_cfg,
                              const KernelSpec& spec, std::span<const std::size_t> initial) {
  cfg.validate();
  classifier_cfg.validate();
  spec.validate();
  if (!policy_is_active_search(cfg.policy)) {
    throw std::invalid_argument("run_active_search: policy " + to_string(cfg.policy) +
                                " is not an active-search policy");
  }
  if (pool.empty() || pool.size() != labels.size()) {
    throw std::invalid_argument("run_active_search: pool and labels must be nonempty and match");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("run_active_search: labels must be 0/1");
  }
  if (cfg.budget > pool.size()) {
    throw std::invalid_argument("run_active_search: budget exceeds pool size");
  }
  check_initial_indices(initial, pool.size(), cfg.budget);

  const bool needs_kernel = cfg.policy == Policy::QvsAs;
  KernelMatrix kernel;
  if (needs_kernel) kernel = build_kernel_matrix(spec, pool);

  CampaignLog log;
  log.binary_labels = true;

  std::vector<bool> queried(pool.size(), false);
  LabeledData observed;
  std::vector<std::size_t> observed_indices;
  std::size_t positive_count = 0;

  const auto record = [&](std::size_t iteration, std::size_t idx) {
    queried[idx] = true;
    const double y = static_cast<double>(labels[idx]);
    observed.points.push_back(pool[idx]);
    observed.labels.push_back(y);
    observed_indices.push_back(idx);
    if (y == 1.0) ++positive_count;
    log.queries.push_back(
        {iteration, static_cast<std::ptrdiff_t>(idx), pool[idx], y, as_note(positive_count)});
  };

  for (std::size_t idx : initial) record(0, idx);

  Rng rng(cfg.seed, 1);
  std::size_t iteration = 1;
  while (log.total_queries() < cfg.budget) {
    const std::size_t want =
        std::min(cfg.batch_size, cfg.budget - log.total_queries());
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!queried[i]) candidates.push_back(i);
    }
    const std::size_t n = std::min(want, candidates.size());
    if (n == 0) break;

    std::vector<std::size_t> batch;
    switch (cfg.policy) {
      case Policy::Random: {
        const auto picks = rng.sample_without_replacement(candidates.size(), n);
        batch.reserve(n);
        for (std::size_t p : picks) batch.push_back(candidates[p]);
        break;
      }
      case Policy::DiversityBlindAs: {
        std::vector<Point> cand_points;
        cand_points.reserve(candidates.size());
        for (std::size_t idx : candidates) cand_points.push_back(pool[idx]);
        const std::vector<double> probs =
            classify_prob_batch(observed, classifier_cfg, cand_points);
        batch = top_n_by_value(candidates, probs, n);
        break;
      }
      case Policy::QvsAs: {
        std::vector<Point> cand_points;
        cand_points.reserve(candidates.size());
        for (std::size_t idx : candidates) cand_points.push_back(pool[idx]);
        const std::vector<double> probs =
            classify_prob_batch(observed, classifier_cfg, cand_points);
        std::vector<double> scores(pool.size(), 0.0);
        for (std::size_t i = 0; i < candidates.size(); ++i) scores[candidates[i]] = probs[i];
        std::vector<std::size_t> fixed;  // known positives carry probability 1
        for (std::size_t i = 0; i < observed_indices.size(); ++i) {
          if (observed.labels[i] == 1.0) {
            fixed.push_back(observed_indices[i]);
            scores[observed_indices[i]] = 1.0;
          }
        }
        batch = greedy_select_on_kernel(kernel, scores, cfg.q, n, fixed, candidates);
        break;
      }
      case Policy::OnestepAs: {
        batch.push_back(
            onestep_as_choice(pool, candidates, observed, cfg.q, classifier_cfg, spec));
        break;
      }
      default:
        throw std::logic_error("run_active_search: unreachable policy");
    }

    for (std::size_t idx : batch) record(iteration, idx);
    ++iteration;
  }
  return log;
}

CampaignLog run_discrete_bayesopt(std::span<const Point> pool, std::span<const double> values,
                                  const CampaignConfig& cfg, const GPConfig& gp_cfg,
                                  const KernelSpec& spec, std::span<const std::size_t> initial) {
  cfg.validate();
  gp_cfg.validate();
  spec.validate();
  if (!policy_is_discrete_bayesopt(cfg.policy)) {
    throw std::invalid_argument("run_discrete_bayesopt: policy " + to_string(cfg.policy) +
                                " is not a discrete BayesOpt policy");
  }
  if (pool.empty() || pool.size() != values.size()) {
    throw std::invalid_argument("run_discrete_bayesopt: pool and values must match");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("run_discrete_bayesopt: non-finite value");
  }
  if (cfg.budget > pool.size()) {
    throw std::invalid_argument("run_discrete_bayesopt: budget exceeds pool size");
  }
  check_initial_indices(initial, pool.size(), cfg.budget);

  const KernelMatrix kernel = build_kernel_matrix(spec, pool);
  std::vector<std::size_t> all_indices(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) all_indices[i] = i;

  CampaignLog log;
  std::vector<bool> queried(pool.size(), false);
  std::vector<std::size_t> observed_indices;
  std::vector<double> observed_values;
  double incumbent = -std::numeric_limits<double>::infinity();

  const auto record = [&](std::size_t iteration, std::size_t idx) {
    queried[idx] = true;
    observed_indices.push_back(idx);
    observed_values.push_back(values[idx]);
    incumbent = std::max(incumbent, values[idx]);
    char note[48];
    std::snprintf(note, sizeof(note), "best=%.6g", incumbent);
    log.queries.push_back(
        {iteration, static_cast<std::ptrdiff_t>(idx), pool[idx], values[idx], note});
  };

  for (std::size_t idx : initial) record(0, idx);

  Rng rng(cfg.seed, 1);
  std::size_t iteration = 1;
  while (log.total_queries() < cfg.budget) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!queried[i]) candidates.push_back(i);
    }
    const std::size_t n =
        std::min({cfg.batch_size, cfg.budget - log.total_queries(), candidates.size()});
    if (n == 0) break;

    std::vector<std::size_t> batch;
    if (cfg.policy == Policy::Random) {
      const auto picks = rng.sample_without_replacement(candidates.size(), n);
      for (std::size_t p : picks) batch.push_back(candidates[p]);
    } else {
      const GaussianProcess gp =
          GaussianProcess::fit_on_kernel(kernel, observed_indices, observed_values, gp_cfg);
      const PosteriorBatch post = gp.posterior_at_indices(all_indices);
      const std::vector<double> ucb = ucb_score(post, cfg.beta);
      if (cfg.policy == Policy::Ucb) {
        std::vector<double> cand_ucb(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) cand_ucb[i] = ucb[candidates[i]];
        batch = top_n_by_value(candidates, cand_ucb, n);
      } else {
        // quality scores for the whole pool, observed items included
        const std::vector<double> scores = min_max_normalize(ucb);
        batch = greedy_select_on_kernel(kernel, scores, cfg.q, n, observed_indices, candidates);
      }
    }

    for (std::size_t idx : batch) record(iteration, idx);
    ++iteration;
  }
  return log;
}

namespace {

struct UnitScaler {
  const BoxDomain* domain;

  std::vector<double> to_unit(const Point& p) const {
    std::vector<double> u(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) {
      u[i] = (p[i] - domain->lower[i]) / (domain->upper[i] - domain->lower[i]);
    }
    return u;
  }
  Point to_domain(std::span<const double> u) const {
    Point p{std::vector<double>(u.size())};
    for (std::size_t i = 0; i < u.size(); ++i) {
      p[i] = domain->lower[i] + u[i] * (domain->upper[i] - domain->lower[i]);
    }
    return p;
  }
};

std::string tr_note(const std::vector<TrustRegion>& regions) {
  std::string note;
  for (std::size_t m = 0; m < regions.size(); ++m) {
    if (m > 0) note += '|';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "tr%zu:L=%.4g,s=%d,f=%d", m, regions[m].side,
                  regions[m].successes, regions[m].failures);
    note += buf;
  }
  return note;
}

}  // namespace

CampaignLog run_continuous_bayesopt(const std::function<double(const Point&)>& objective,
                                    const BoxDomain& domain, const CampaignConfig& cfg,
                                    const GPConfig& gp_cfg, const KernelSpec& spec,
                                    std::span<const Point> initial) {
  cfg.validate();
  gp_cfg.validate();
  spec.validate();
  domain.validate();
  if (!policy_is_continuous(cfg.policy)) {
    throw std::invalid_argument("run_continuous_bayesopt: policy " + to_string(cfg.policy) +
                                " is not a continuous BayesOpt policy");
  }
  if (initial.size() > cfg.budget) {
    throw std::invalid_argument("run_continuous_bayesopt: initial data exceeds budget");
  }

  const std::size_t dim = domain.dim();
  const UnitScaler scaler{&domain};
  const std::size_t per_region =
      std::min(cfg.tr.candidates_per_dim * dim, cfg.tr.max_candidates);

  CampaignLog log;
  std::vector<Point> queried_points;         // original coordinates
  std::vector<std::vector<double>> unit_points;  // normalized copies for the GP
  std::vector<double> observed_values;
  double incumbent = -std::numeric_limits<double>::infinity();

  const auto evaluate = [&](std::size_t iteration, const Point& p, const std::string& note) {
    if (!domain.contains(p, 1e-12)) {
      throw std::invalid_argument("run_continuous_bayesopt: query outside the domain");
    }
    const double v = objective(p);
    if (!std::isfinite(v)) {
      throw std::runtime_error("run_continuous_bayesopt: objective returned a non-finite value");
    }
    queried_points.push_back(p);
    unit_points.push_back(scaler.to_unit(p));
    observed_values.push_back(v);
    incumbent = std::max(incumbent, v);
    log.queries.push_back({iteration, -1, p, v, note});
    return v;
  };

  for (const Point& p : initial) evaluate(0, p, "initial");

  Rng rng(cfg.seed, 1);

  // Trust regions start at random centers; incumbents seed from initial data.
  std::vector<TrustRegion> regions(cfg.trust_regions);
  double init_best = -std::numeric_limits<double>::infinity();
  std::vector<double> init_best_point;
  for (std::size_t i = 0; i < observed_values.size(); ++i) {
    if (observed_values[i] > init_best) {
      init_best = observed_values[i];
      init_best_point = unit_points[i];
    }
  }
  for (TrustRegion& region : regions) {
    region.center.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) region.center[d] = rng.uniform01();
    region.side = cfg.tr.l_init;
    region.incumbent_value = init_best;
    region.incumbent_point = init_best_point;
  }

  std::size_t iteration = 1;
  while (log.total_queries() < cfg.budget) {
    const std::size_t want = std::min(cfg.batch_size, cfg.budget - log.total_queries());

    if (cfg.policy == Policy::Random) {
      for (std::size_t j = 0; j < want; ++j) {
        Point p{std::vector<double>(dim)};
        for (std::size_t d = 0; d < dim; ++d) p[d] = rng.uniform(domain.lower[d], domain.upper[d]);
        evaluate(iteration, p, "random");
      }
      ++iteration;
      continue;
    }

    LabeledData train;
    train.points.reserve(unit_points.size());
    for (const auto& u : unit_points) train.points.push_back(Point(u));
    train.labels = observed_values;
    const GaussianProcess gp = GaussianProcess::fit(train, gp_cfg);

    // candidates, region by region in rank order
    std::vector<Point> unit_candidates;
    std::vector<std::size_t> owner;
    for (std::size_t m = 0; m < regions.size(); ++m) {
      const TrustRegion& region = regions[m];
      std::vector<double> lo(dim), hi(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        lo[d] = std::max(0.0, region.center[d] - region.side * 0.5);
        hi[d] = std::min(1.0, region.center[d] + region.side * 0.5);
      }
      for (std::size_t j = 0; j < per_region; ++j) {
        Point u{std::vector<double>(dim)};
        for (std::size_t d = 0; d < dim; ++d) u[d] = rng.uniform(lo[d], hi[d]);
        if (cfg.policy == Policy::Robot && cfg.tau > 0.0) {
          // rank-ordered feasibility: stay tau away from higher-ranked incumbents
          bool feasible = true;
          const Point original = scaler.to_domain(u.coords);
          for (std::size_t r = 0; r < m && feasible; ++r) {
            if (regions[r].incumbent_point.empty()) continue;
            const Point anchor = scaler.to_domain(regions[r].incumbent_point);
            if (distance(original, anchor) < cfg.tau) feasible = false;
          }
          if (!feasible) continue;
        }
        unit_candidates.push_back(std::move(u));
        owner.push_back(m);
      }
    }
    const std::uint64_t thompson_seed = rng.next_u64();
    if (unit_candidates.empty()) {
      // rank-1 candidates are never filtered, so this cannot happen
      throw std::logic_error("run_continuous_bayesopt: no candidates generated");
    }

    const PosteriorBatch post = gp.posterior(unit_candidates);
    const std::vector<double> sample = thompson_sample(post, thompson_seed);

    const std::size_t n = std::min(want, unit_candidates.size());
    std::vector<std::size_t> picked;  // positions into unit_candidates
    if (cfg.policy == Policy::QvsBayesoptTr) {
      std::vector<Point> original(unit_candidates.size());
      for (std::size_t i = 0; i < unit_candidates.size(); ++i) {
        original[i] = scaler.to_domain(unit_candidates[i].coords);
      }
      const KernelMatrix cand_kernel = build_kernel_matrix(spec, original);
      const std::vector<double> scores = min_max_normalize(sample);
      std::vector<std::size_t> all(unit_candidates.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      picked = greedy_select_on_kernel(cand_kernel, scores, cfg.q, n, {}, all);
    } else {
      std::vector<std::size_t> positions(unit_candidates.size());
      for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
      picked = top_n_by_value(positions, sample, n);
    }

    // query, then update each region from the batch members it generated
    std::vector<double> batch_best(regions.size(), -std::numeric_limits<double>::infinity());
    std::vector<std::vector<double>> batch_best_point(regions.size());
    const std::string note = tr_note(regions);
    for (std::size_t pos : picked) {
      const Point p = scaler.to_domain(unit_candidates[pos].coords);
      const double v = evaluate(iteration, p, note);
      const std::size_t m = owner[pos];
      if (v > batch_best[m]) {
        batch_best[m] = v;
        batch_best_point[m] = unit_candidates[pos].coords;
      }
    }
    for (std::size_t m = 0; m < regions.size(); ++m) {
      TrustRegion& region = regions[m];
      if (batch_best_point[m].empty()) continue;  // no queries from this region
      if (batch_best[m] > region.incumbent_value) {
        region.incumbent_value = batch_best[m];
        region.incumbent_point = batch_best_point[m];
        region.center = batch_best_point[m];
        ++region.successes;
        region.failures = 0;
      } else {
        ++region.failures;
        region.successes = 0;
      }
      if (region.successes >= cfg.tr.succ_threshold) {
        region.side = std::min(region.side * 2.0, cfg.tr.l_max);
        region.successes = 0;
        region.failures = 0;
      } else if (region.failures >= cfg.tr.fail_threshold) {
        region.side *= 0.5;
        region.successes = 0;
        region.failures = 0;
      }
      if (region.side < cfg.tr.l_min) {
        for (std::size_t d = 0; d < dim; ++d) region.center[d] = rng.uniform01();
        region.side = cfg.tr.l_init;
        region.successes = 0;
        region.failures = 0;
        region.incumbent_value = -std::numeric_limits<double>::infinity();
        region.incumbent_point.clear();
      }
    }
    ++iteration;
  }

  // reported solution set
  const std::size_t m_solutions = std::min<std::size_t>(cfg.trust_regions, queried_points.size());
  if (cfg.policy == Policy::QvsBayesoptTr && m_solutions > 0) {
    const KernelMatrix kernel = build_kernel_matrix(spec, queried_points);
    const std::vector<double> scores = min_max_normalize(observed_values);
    std::vector<std::size_t> all(queried_points.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto chosen = greedy_select_on_kernel(kernel, scores, cfg.q, m_solutions, {}, all);
    for (std::size_t idx : chosen) {
      log.solutions.push_back({queried_points[idx], observed_values[idx]});
    }
  } else if (cfg.policy == Policy::Robot) {
    for (const TrustRegion& region : regions) {
      if (region.incumbent_point.empty()) continue;
      log.solutions.push_back(
          {scaler.to_domain(region.incumbent_point), region.incumbent_value});
    }
  } else if (m_solutions > 0) {  // turbo / random: best observed values
    std::vector<std::size_t> positions(queried_points.size());
    for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
    const auto best = top_n_by_value(positions, observed_values, m_solutions);
    for (std::size_t idx : best) log.solutions.push_back({queried_points[idx], observed_values[idx]});
  }
  return log;
}

}  // namespace qvs
