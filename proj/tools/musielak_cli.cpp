// Copyright 2026 The Musielak Galerkin Authors
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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "musielak/cli.hpp"

int main(int argc, char** argv) {
  namespace mc = musielak::cli;
  CLI::App app{"musielak: N-function checks and Galerkin studies"};
  app.require_subcommand(1, 1);

  mc::Options opt;
  std::string out_dir;
  std::uint64_t seed = 0;
  for (const auto& name : mc::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "output directory for CSV artifacts");
    sub->add_option("--seed", seed, "seed for all sampling (overrides cli.seed)");
    sub->add_flag("--quiet", opt.quiet, "suppress the report text");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mc::kConfigError;
  }
  auto* sub = app.get_subcommands().front();
  opt.subcommand = sub->get_name();
  if (sub->count("--out")) opt.out_dir = out_dir;
  if (sub->count("--seed")) opt.seed = seed;
  return mc::run(opt);
}
