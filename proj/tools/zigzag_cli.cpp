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

// Command-line front end: run, list, validate.

#include <CLI11.hpp>
#include <iostream>

#include "zigzag/runner.hpp"

namespace {

int fail(const std::exception& e) {
  std::cerr << zigzag::error_record(e).dump() << '\n';
  return zigzag::exit_code(e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zigzag: spin-chain state transfer experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "config JSON")->required();
  CLI::Option* out_opt = run->add_option("--out", out_dir, "output root directory");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "override the config seed");
  run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  CLI::App* list = app.add_subcommand("list", "print the experiment catalog");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "schema-check a config");
  validate->add_option("config", validate_path, "config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      for (const auto& e : zigzag::list_experiments()) {
        std::cout << e.kind << '\t' << e.reproduces << '\n';
      }
      return 0;
    }
    if (*validate) {
      zigzag::validate_config(zigzag::load_config(validate_path));
      std::cout << zigzag::Json{{"valid", true}}.dump() << '\n';
      return 0;
    }
    zigzag::RunOptions opts;
    if (*out_opt) opts.out = out_dir;
    if (*seed_opt) opts.seed = seed;
    opts.threads = threads;
    const zigzag::RunResult r = zigzag::run_config_file(config_path, opts);
    std::cout << zigzag::Json{{"directory", r.directory.string()}, {"files", r.files}}.dump() << '\n';
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}
