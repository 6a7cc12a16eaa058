// Copyright 2026 The Zigzag Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZIGZAG_RUNNER_HPP
#define ZIGZAG_RUNNER_HPP

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zigzag/serialize.hpp"

namespace zigzag {

inline constexpr const char* kLibraryVersion = "1.0.0";

/// Catalog entry for one experiment kind.
struct ExperimentInfo {
  std::string kind;
  std::string reproduces;
};

/// Experiment kinds in sorted order.
std::vector<ExperimentInfo> list_experiments();

struct RunOptions {
  std::optional<std::filesystem::path> out;  ///< overrides "output_dir"
  std::optional<std::uint64_t> seed;         ///< overrides "seed"
  int threads = 1;
};

struct RunResult {
  std::filesystem::path directory;
  Json summary;                      ///< also written as summary.json
  std::vector<std::string> files;    ///< output files, relative to directory
};

/// Parses a config file. Throws Error(Io) if unreadable, Error(Schema) on
/// malformed JSON.
Json load_config(const std::filesystem::path& path);

/// Full schema check of a config without running it.
void validate_config(const Json& config);

/// Runs one experiment. Outputs land in <out>/<kind>-<config hash> (with a
/// numeric suffix if taken); nothing is left behind on failure.
RunResult run_experiment(const Json& config, const RunOptions& options = {});
RunResult run_config_file(const std::filesystem::path& path, const RunOptions& options = {});

/// 64-bit FNV-1a of the canonical (key-sorted) dump, as 16 hex digits.
std::string config_hash(const Json& config);

/// Process exit code for an error: 2 bad input, 3 numerical, 4 I/O.
int exit_code(const std::exception& e);

/// {"error": {"kind", "message", "exit_code"}}.
Json error_record(const std::exception& e);

}  // namespace zigzag

#endif  // ZIGZAG_RUNNER_HPP
