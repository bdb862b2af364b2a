// Command-line front end: score / select / run / bench / gen.
//
// Exit codes: 0 success, 2 configuration or validation error, 3 runtime or
// numerical error.

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qvs/commands.hpp"
#include "qvs/run_config.hpp"
#include "qvs/vendi.hpp"

namespace {

std::vector<qvs::Order> parse_q_list(const std::string& csv) {
  std::vector<qvs::Order> orders;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::string token =
        csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) orders.push_back(qvs::Order::parse(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (orders.empty()) throw qvs::ConfigError("empty q list");
  return orders;
}

qvs::KernelSpec kernel_from_flags(const std::string& family, double lengthscale,
                                  double max_distance) {
  qvs::KernelSpec spec;
  spec.family = qvs::parse_kernel_family(family);
  spec.lengthscale = lengthscale;
  spec.max_distance = max_distance;
  spec.validate();
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quality-weighted Vendi score toolkit: diversity-aware scoring, subset selection, "
               "and experimental-design campaigns"};
  app.require_subcommand(1);

  qvs::GlobalOptions global;
  std::optional<std::uint64_t> seed_flag;
  std::optional<std::string> output_dir_flag;
  std::optional<std::size_t> jobs_flag;
  app.add_option("--seed", seed_flag, "Override execution.base_seed");
  app.add_option("--output-dir", output_dir_flag, "Override execution.output_dir");
  app.add_option("--jobs", jobs_flag, "Parallel repeats (default from config)");
  app.add_option("--set", global.overrides, "Override a config key: section.key=value")
      ->take_all();

  std::string data_path, kernel_family = "gaussian-rbf", q_list = "1", config_path;
  double lengthscale = 1.0, max_distance = 1.0;
  std::string csv_out;
  std::size_t batch = 1;

  CLI::App* score = app.add_subcommand("score", "VS/qVS table for a dataset CSV");
  score->add_option("--data", data_path, "Dataset CSV")->required();
  score->add_option("--kernel", kernel_family, "gaussian-rbf | cosine-similarity | distance-derived");
  score->add_option("--lengthscale", lengthscale, "Gaussian kernel lengthscale");
  score->add_option("--max-distance", max_distance, "Distance-derived kernel scale");
  score->add_option("--q", q_list, "Comma-separated orders, e.g. 0,1,inf");
  score->add_option("--csv", csv_out, "Also write the table to this CSV");

  CLI::App* select = app.add_subcommand("select", "Greedy qVS batch over dataset rows");
  select->add_option("--data", data_path, "Dataset CSV")->required();
  select->add_option("--kernel", kernel_family, "Kernel family");
  select->add_option("--lengthscale", lengthscale, "Gaussian kernel lengthscale");
  select->add_option("--max-distance", max_distance, "Distance-derived kernel scale");
  select->add_option("--batch", batch, "Batch size")->required();
  select->add_option("--q", q_list, "Order q (single value)");

  CLI::App* run = app.add_subcommand("run", "Execute the campaigns described by a config file");
  run->add_option("config", config_path, "JSON config")->required();

  CLI::App* bench = app.add_subcommand("bench", "run plus per-query trajectory output");
  bench->add_option("config", config_path, "JSON config")->required();

  qvs::GenOptions gen_opts;
  CLI::App* gen = app.add_subcommand("gen", "Write a synthetic problem as a dataset CSV");
  gen->add_option("--name", gen_opts.name,
                  "two-cluster-binary | ring-of-clusters-binary | two-group-discrete-pool | "
                  "multi-peak-continuous")
      ->required();
  gen->add_option("--out", gen_opts.out_path, "Output CSV path")->required();
  gen->add_option("--gen-seed", gen_opts.seed, "Generator seed");
  gen->add_option("--pool-size", gen_opts.pool_size, "Pool size");
  gen->add_option("--positive-rate", gen_opts.positive_rate, "Positive rate in (0,1)");
  gen->add_option("--clusters", gen_opts.clusters, "Ring cluster count");
  gen->add_option("--peaks", gen_opts.peaks, "Peak count");
  gen->add_option("--grid-resolution", gen_opts.grid_resolution, "Grid nodes per axis");

  CLI11_PARSE(app, argc, argv);

  global.seed = seed_flag;
  global.output_dir = output_dir_flag;
  global.jobs = jobs_flag;

  try {
    if (score->parsed()) {
      const auto spec = kernel_from_flags(kernel_family, lengthscale, max_distance);
      return qvs::cmd_score(data_path, spec, parse_q_list(q_list),
                            csv_out.empty() ? std::nullopt : std::make_optional(csv_out));
    }
    if (select->parsed()) {
      const auto spec = kernel_from_flags(kernel_family, lengthscale, max_distance);
      const auto orders = parse_q_list(q_list);
      if (orders.size() != 1) throw qvs::ConfigError("select: --q takes a single value");
      return qvs::cmd_select(data_path, spec, batch, orders[0]);
    }
    if (run->parsed()) return qvs::cmd_run(config_path, global);
    if (bench->parsed()) return qvs::cmd_bench(config_path, global);
    if (gen->parsed()) return qvs::cmd_gen(gen_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
