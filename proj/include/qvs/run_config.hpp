#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qvs/campaigns.hpp"
#include "qvs/kernels.hpp"
#include "qvs/surrogates.hpp"
#include "qvs/vendi.hpp"

namespace qvs {

// Raised for anything wrong with user configuration; maps to exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Declarative description of a whole experiment: one problem, a kernel, a
// policy x q grid, surrogate settings, and execution knobs. Loaded from a
// JSON file with sections problem/kernel/policy/surrogate/execution.
struct RunConfig {
  // problem
  std::string problem_type;  // dataset | two-cluster-binary | ring-of-clusters-binary |
                             // multi-peak-continuous | two-group-discrete-pool
  std::string dataset_path;
  std::uint64_t problem_seed = 0;
  std::size_t pool_size = 500;
  double positive_rate = 0.1;
  std::size_t dim = 2;
  std::size_t clusters = 2;
  double cluster_spread = 0.4;
  double cluster_offset = 3.0;
  double ring_radius = 3.5;
  double box_half = 5.0;
  std::size_t peak_count = 3;
  double peak_height = 1.0;
  double peak_width = 0.8;
  double peak_radius = 3.5;
  double group_fraction = 0.3;
  double group_spread = 0.5;
  double group_offset = 3.0;
  double value_width = 1.0;

  // kernel
  KernelSpec kernel;

  // policy grid
  std::vector<Policy> policies;
  std::vector<Order> q_values{Order::shannon()};
  std::size_t batch_size = 1;
  std::size_t budget = 10;
  std::size_t trust_regions = 1;
  double tau = 0.0;
  double beta = 2.0;

  // surrogate
  ClassifierConfig classifier;
  GPConfig gp;

  // execution
  std::size_t repeats = 1;
  std::uint64_t base_seed = 0;
  std::string output_dir = "out";
  std::size_t initial_size = 5;
  std::vector<Order> eval_q;
  double good_threshold = 0.5;
  Order report_q = Order::shannon();
  std::size_t jobs = 1;
};

// Parse the file, apply --set section.key=value overrides, then validate.
RunConfig load_run_config(const std::string& path, std::span<const std::string> overrides = {});

// Same, from an in-memory JSON string (used by tests).
RunConfig parse_run_config(const std::string& json_text,
                           std::span<const std::string> overrides = {});

void validate_run_config(const RunConfig& cfg);

}  // namespace qvs
