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
/**
 * @file
 * CLI command layer. Each subcommand reads one JSON config, emits CSV/JSON
 * artifacts into the output directory, and always writes a run manifest --
 * including on failure, where it carries the error message.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace agpsr::cli {

struct Options {
  std::string command;      // scan | error-curve | scaling | variance-opt | vqe | gaps
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the config's seed field
  int threads = 1;
};

/// Dispatch a subcommand; returns the process exit code. Errors are printed
/// to stderr and recorded in the manifest.
int run(const Options& options);

}  // namespace agpsr::cli
