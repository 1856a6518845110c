#pragma once

// Experiment execution: builds the configured space, resolves pole pairs,
// dispatches the requested commands (in parallel when asked), and assembles
// the structured report.  Every module exception is captured into its record;
// the run always completes.

#include <cstdint>
#include <string>
#include <vector>

#include "picheck/config.hpp"
#include "picheck/report.hpp"

namespace picheck {

struct RunOptions {
  std::string out_dir;     // empty: compute only, write nothing
  std::uint64_t seed = 0;  // nonzero overrides the config seed
  int jobs = 0;            // nonzero overrides the config job count
  std::vector<std::string> only;  // empty: run every configured command
};

report::Json run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace picheck
