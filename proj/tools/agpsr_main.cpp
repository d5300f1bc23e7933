// Copyright 2026 The agpsr developers

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <CLI11.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "agpsr/cli/commands.hpp"
#include "agpsr/types.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Approximate generalized parameter-shift rules for arbitrary generators"};
  app.set_version_flag("--version", std::string(agpsr::kVersion));
  app.require_subcommand(1);

  agpsr::cli::Options options;
  std::uint64_t seed_value = 0;

  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"scan", "Derivative scan: exact vs PSR/GPSR/aGPSR over a parameter grid"},
      {"error-curve", "Sample the gap-approximation error function Q_K(delta)"},
      {"scaling", "Gap counts and minimal equation count vs system size"},
      {"variance-opt", "Variance-minimizing shift optimization report"},
      {"vqe", "Seeded VQE runs with per-iteration energies and call counts"},
      {"gaps", "Dump a generator's spectral gap set (and histogram)"},
  };

  for (const auto& [name, description] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", options.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out-dir", options.out_dir, "Output directory (default: .)");
    CLI::Option* seed_opt = sub->add_option("--seed", seed_value, "Override the config seed");
    sub->add_option("--threads", options.threads, "Worker threads for scans and runs")
        ->check(CLI::PositiveNumber);
    sub->callback([&, name = name, seed_opt]() {
      options.command = name;
      if (seed_opt->count() > 0) options.seed = seed_value;
    });
  }

  CLI11_PARSE(app, argc, argv);
  return agpsr::cli::run(options);
}
