#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "picheck/config.hpp"
#include "picheck/report.hpp"
#include "picheck/runner.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Curve-side and surface-side checks of the 1-Poincare inequality on "
      "discretized metric measure spaces"};
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string only_csv;
  app.add_option("--config", config_path, "experiment config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir,
                 "output directory for report.json, report.tsv and plots");
  app.add_option("--seed", seed, "override the config seed (0 keeps it)");
  app.add_option("--jobs", jobs, "worker threads for independent records");
  app.add_option("--only", only_csv, "comma-separated command filter");
  CLI11_PARSE(app, argc, argv);

  try {
    const picheck::ExperimentConfig cfg = picheck::load_config(config_path);
    picheck::RunOptions opts;
    opts.out_dir = out_dir;
    opts.seed = seed;
    opts.jobs = jobs;
    opts.only = split_csv(only_csv);

    const picheck::report::Json rep = picheck::run_experiment(cfg, opts);

    std::size_t passed = 0, failed = 0, info = 0;
    for (const auto& r : rep.at("records")) {
      const std::string op = r.at("op").get<std::string>();
      const std::string& err = r.at("error").get_ref<const std::string&>();
      const auto idx = r.at("index").get<std::size_t>();
      if (!err.empty()) {
        ++failed;
        std::printf("FAIL %-16s #%zu  error: %s\n", op.c_str(), idx, err.c_str());
      } else if (r.at("pass").is_null()) {
        ++info;
        std::printf("info %-16s #%zu\n", op.c_str(), idx);
      } else if (r.at("pass").get<bool>()) {
        ++passed;
        std::printf("ok   %-16s #%zu\n", op.c_str(), idx);
      } else {
        ++failed;
        std::printf("FAIL %-16s #%zu\n", op.c_str(), idx);
      }
    }
    std::printf("%zu passed, %zu failed, %zu informational\n", passed, failed,
                info);
    return picheck::report::all_pass(rep) ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
