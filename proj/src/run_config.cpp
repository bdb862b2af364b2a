#include "qvs/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

namespace qvs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError("config: " + message); }

double as_positive(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key + " must be a number");
  const double x = v.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) fail(key + " must be positive and finite");
  return x;
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key + " must be finite");
  return x;
}

std::size_t as_count(const json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    fail(key + " must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key + " must be a string");
  return v.get<std::string>();
}

Order as_order(const json& v, const std::string& key) {
  try {
    if (v.is_string()) return Order::parse(v.get<std::string>());
    if (v.is_number()) return Order::finite(v.get<double>());
  } catch (const std::exception& e) {
    fail(key + ": " + e.what());
  }
  fail(key + " must be a number >= 0 or \"inf\"");
}

void check_keys(const json& section, const std::set<std::string>& known,
                const std::string& name) {
  for (const auto& [key, value] : section.items()) {
    (void)value;
    if (known.find(key) == known.end()) fail("unknown key " + name + "." + key);
  }
}

void parse_problem(const json& section, RunConfig& cfg) {
  check_keys(section,
             {"type", "path", "seed", "pool_size", "positive_rate", "dim", "clusters",
              "cluster_spread", "cluster_offset", "ring_radius", "box_half", "peak_count",
              "peak_height", "peak_width", "peak_radius", "group_fraction", "group_spread",
              "group_offset", "value_width"},
             "problem");
  if (!section.contains("type")) fail("problem.type is required");
  cfg.problem_type = as_string(section.at("type"), "problem.type");
  if (section.contains("path")) cfg.dataset_path = as_string(section.at("path"), "problem.path");
  if (section.contains("seed")) cfg.problem_seed = as_count(section.at("seed"), "problem.seed");
  if (section.contains("pool_size"))
    cfg.pool_size = as_count(section.at("pool_size"), "problem.pool_size");
  if (section.contains("positive_rate"))
    cfg.positive_rate = as_number(section.at("positive_rate"), "problem.positive_rate");
  if (section.contains("dim")) cfg.dim = as_count(section.at("dim"), "problem.dim");
  if (section.contains("clusters"))
    cfg.clusters = as_count(section.at("clusters"), "problem.clusters");
  if (section.contains("cluster_spread"))
    cfg.cluster_spread = as_positive(section.at("cluster_spread"), "problem.cluster_spread");
  if (section.contains("cluster_offset"))
    cfg.cluster_offset = as_positive(section.at("cluster_offset"), "problem.cluster_offset");
  if (section.contains("ring_radius"))
    cfg.ring_radius = as_positive(section.at("ring_radius"), "problem.ring_radius");
  if (section.contains("box_half"))
    cfg.box_half = as_positive(section.at("box_half"), "problem.box_half");
  if (section.contains("peak_count"))
    cfg.peak_count = as_count(section.at("peak_count"), "problem.peak_count");
  if (section.contains("peak_height"))
    cfg.peak_height = as_positive(section.at("peak_height"), "problem.peak_height");
  if (section.contains("peak_width"))
    cfg.peak_width = as_positive(section.at("peak_width"), "problem.peak_width");
  if (section.contains("peak_radius"))
    cfg.peak_radius = as_positive(section.at("peak_radius"), "problem.peak_radius");
  if (section.contains("group_fraction"))
    cfg.group_fraction = as_number(section.at("group_fraction"), "problem.group_fraction");
  if (section.contains("group_spread"))
    cfg.group_spread = as_positive(section.at("group_spread"), "problem.group_spread");
  if (section.contains("group_offset"))
    cfg.group_offset = as_positive(section.at("group_offset"), "problem.group_offset");
  if (section.contains("value_width"))
    cfg.value_width = as_positive(section.at("value_width"), "problem.value_width");
}

void parse_kernel(const json& section, RunConfig& cfg) {
  check_keys(section, {"family", "lengthscale", "max_distance"}, "kernel");
  if (section.contains("family")) {
    try {
      cfg.kernel.family = parse_kernel_family(as_string(section.at("family"), "kernel.family"));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  if (section.contains("lengthscale"))
    cfg.kernel.lengthscale = as_positive(section.at("lengthscale"), "kernel.lengthscale");
  if (section.contains("max_distance"))
    cfg.kernel.max_distance = as_positive(section.at("max_distance"), "kernel.max_distance");
}

void parse_policy(const json& section, RunConfig& cfg) {
  check_keys(section,
             {"policies", "q_values", "batch_size", "budget", "trust_regions", "tau", "beta"},
             "policy");
  if (!section.contains("policies")) fail("policy.policies is required");
  const json& pols = section.at("policies");
  if (!pols.is_array() || pols.empty()) fail("policy.policies must be a nonempty array");
  cfg.policies.clear();
  for (const json& p : pols) {
    try {
      cfg.policies.push_back(qvs::parse_policy(as_string(p, "policy.policies[]")));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  if (section.contains("q_values")) {
    const json& qs = section.at("q_values");
    if (!qs.is_array() || qs.empty()) fail("policy.q_values must be a nonempty array");
    cfg.q_values.clear();
    for (const json& q : qs) cfg.q_values.push_back(as_order(q, "policy.q_values[]"));
  }
  if (section.contains("batch_size"))
    cfg.batch_size = as_count(section.at("batch_size"), "policy.batch_size");
  if (section.contains("budget")) cfg.budget = as_count(section.at("budget"), "policy.budget");
  if (section.contains("trust_regions"))
    cfg.trust_regions = as_count(section.at("trust_regions"), "policy.trust_regions");
  if (section.contains("tau")) cfg.tau = as_number(section.at("tau"), "policy.tau");
  if (section.contains("beta")) cfg.beta = as_number(section.at("beta"), "policy.beta");
}

void parse_surrogate(const json& section, RunConfig& cfg) {
  check_keys(section,
             {"k_neighbors", "smoothing", "gp_lengthscale", "noise_variance", "jitter",
              "lengthscale_grid"},
             "surrogate");
  if (section.contains("k_neighbors"))
    cfg.classifier.k_neighbors = as_count(section.at("k_neighbors"), "surrogate.k_neighbors");
  if (section.contains("smoothing"))
    cfg.classifier.smoothing = as_positive(section.at("smoothing"), "surrogate.smoothing");
  if (section.contains("gp_lengthscale") && !section.at("gp_lengthscale").is_null()) {
    cfg.gp.lengthscale = as_positive(section.at("gp_lengthscale"), "surrogate.gp_lengthscale");
  }
  if (section.contains("noise_variance"))
    cfg.gp.noise_variance = as_positive(section.at("noise_variance"), "surrogate.noise_variance");
  if (section.contains("jitter"))
    cfg.gp.jitter = as_positive(section.at("jitter"), "surrogate.jitter");
  if (section.contains("lengthscale_grid")) {
    const json& grid = section.at("lengthscale_grid");
    if (!grid.is_array()) fail("surrogate.lengthscale_grid must be an array");
    cfg.gp.lengthscale_grid.clear();
    for (const json& l : grid) {
      cfg.gp.lengthscale_grid.push_back(as_positive(l, "surrogate.lengthscale_grid[]"));
    }
  }
}

void parse_execution(const json& section, RunConfig& cfg) {
  check_keys(section,
             {"repeats", "base_seed", "output_dir", "initial_size", "eval_q", "good_threshold",
              "report_q", "jobs"},
             "execution");
  if (section.contains("repeats"))
    cfg.repeats = as_count(section.at("repeats"), "execution.repeats");
  if (section.contains("base_seed"))
    cfg.base_seed = as_count(section.at("base_seed"), "execution.base_seed");
  if (section.contains("output_dir"))
    cfg.output_dir = as_string(section.at("output_dir"), "execution.output_dir");
  if (section.contains("initial_size"))
    cfg.initial_size = as_count(section.at("initial_size"), "execution.initial_size");
  if (section.contains("eval_q")) {
    const json& qs = section.at("eval_q");
    if (!qs.is_array()) fail("execution.eval_q must be an array");
    cfg.eval_q.clear();
    for (const json& q : qs) cfg.eval_q.push_back(as_order(q, "execution.eval_q[]"));
  }
  if (section.contains("good_threshold"))
    cfg.good_threshold = as_number(section.at("good_threshold"), "execution.good_threshold");
  if (section.contains("report_q"))
    cfg.report_q = as_order(section.at("report_q"), "execution.report_q");
  if (section.contains("jobs")) cfg.jobs = as_count(section.at("jobs"), "execution.jobs");
}

void apply_override(json& root, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) fail("--set needs section.key=value, got '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  const std::size_t dot = path.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
    fail("--set path must look like section.key, got '" + path + "'");
  }
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;  // plain string
  }
  root[section][key] = parsed;
}

RunConfig from_json(json root, std::span<const std::string> overrides) {
  for (const std::string& assignment : overrides) apply_override(root, assignment);

  check_keys(root, {"problem", "kernel", "policy", "surrogate", "execution"}, "top level");
  RunConfig cfg;
  if (!root.contains("problem")) fail("missing section: problem");
  if (!root.contains("policy")) fail("missing section: policy");
  parse_problem(root.at("problem"), cfg);
  if (root.contains("kernel")) parse_kernel(root.at("kernel"), cfg);
  parse_policy(root.at("policy"), cfg);
  if (root.contains("surrogate")) parse_surrogate(root.at("surrogate"), cfg);
  if (root.contains("execution")) parse_execution(root.at("execution"), cfg);
  validate_run_config(cfg);
  return cfg;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, std::span<const std::string> overrides) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("top level must be an object of sections");
  return from_json(std::move(root), overrides);
}

RunConfig load_run_config(const std::string& path, std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_run_config(text, overrides);
}

void validate_run_config(const RunConfig& cfg) {
  static const std::set<std::string> known_types{
      "dataset", "two-cluster-binary", "ring-of-clusters-binary", "multi-peak-continuous",
      "two-group-discrete-pool"};
  if (known_types.find(cfg.problem_type) == known_types.end()) {
    fail("unknown problem.type '" + cfg.problem_type + "'");
  }
  if (cfg.problem_type == "dataset" && cfg.dataset_path.empty()) {
    fail("problem.path is required for dataset problems");
  }
  try {
    cfg.kernel.validate();
    cfg.classifier.validate();
    cfg.gp.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (cfg.policies.empty()) fail("policy.policies must be nonempty");
  if (cfg.budget == 0) fail("policy.budget must be positive");
  if (cfg.batch_size == 0 || cfg.batch_size > cfg.budget) {
    fail("policy.batch_size must be in [1, budget]");
  }
  if (cfg.trust_regions == 0) fail("policy.trust_regions must be >= 1");
  if (!(cfg.tau >= 0.0)) fail("policy.tau must be >= 0");
  if (!(cfg.beta >= 0.0)) fail("policy.beta must be >= 0");
  if (cfg.repeats == 0) fail("execution.repeats must be >= 1");
  if (cfg.initial_size > cfg.budget) fail("execution.initial_size cannot exceed the budget");
  if (cfg.jobs == 0) fail("execution.jobs must be >= 1");

  const bool has_as = std::any_of(cfg.policies.begin(), cfg.policies.end(), [](Policy p) {
    return p == Policy::QvsAs || p == Policy::OnestepAs || p == Policy::DiversityBlindAs;
  });
  if (has_as && cfg.initial_size == 0) {
    fail("active-search policies need execution.initial_size >= 1 to fit the classifier");
  }
  for (Policy p : cfg.policies) {
    if (p == Policy::OnestepAs && cfg.batch_size != 1) {
      fail("onestep-as is sequential; set policy.batch_size = 1");
    }
  }
}

}  // namespace qvs
