#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qvs/kernels.hpp"
#include "qvs/run_config.hpp"
#include "qvs/vendi.hpp"

namespace qvs {

// Global CLI options layered on top of the config file.
struct GlobalOptions {
  std::optional<std::uint64_t> seed;      // overrides execution.base_seed
  std::optional<std::string> output_dir;  // overrides execution.output_dir
  std::optional<std::size_t> jobs;        // overrides execution.jobs
  std::vector<std::string> overrides;     // --set section.key=value
};

// `score`: VS/qVS table of a dataset, one row per requested order.
int cmd_score(const std::string& dataset_path, const KernelSpec& spec,
              const std::vector<Order>& orders, const std::optional<std::string>& csv_out);

// `select`: greedy batch over the dataset rows, printed in selection order
// with the achieved qVS.
int cmd_select(const std::string& dataset_path, const KernelSpec& spec, std::size_t batch,
               Order order);

// `run`: execute the config's policy x q grid across repeats; writes one log
// CSV per campaign plus metrics.csv.
int cmd_run(const std::string& config_path, const GlobalOptions& opts);

// `bench`: cmd_run plus the per-query trajectory CSV.
int cmd_bench(const std::string& config_path, const GlobalOptions& opts);

struct GenOptions {
  std::string name;  // generator name, as in problem.type
  std::string out_path;
  std::uint64_t seed = 0;
  std::size_t pool_size = 500;
  double positive_rate = 0.1;
  std::size_t clusters = 3;
  std::size_t peaks = 3;
  std::size_t grid_resolution = 41;  // multi-peak sample grid per axis
};

// `gen`: write a synthetic problem as a dataset CSV (continuous problems are
// sampled on a regular grid).
int cmd_gen(const GenOptions& opts);

}  // namespace qvs
