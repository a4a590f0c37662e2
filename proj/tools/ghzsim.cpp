/*
 * Copyright 2026 The ghzsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// ghzsim: runs one configured experiment and writes its output file.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ghzsim/config.hpp"
#include "ghzsim/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Simulate the GHZ double-pair experiment"};
  std::string config_path;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<int> points;
  app.add_option("--config", config_path, "Experiment configuration (JSON)")->required();
  app.add_option("--output", output, "Output file, overrides output.path");
  app.add_option("--seed", seed, "Random seed, overrides seed");
  app.add_option("--format", format, "csv or json, overrides output.format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--points", points, "Scan points between start_fs and stop_fs")->check(CLI::Range(1, 100000));
  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = ghzsim::load_config(config_path);
    if (output) cfg.output.path = *output;
    if (seed) {
      cfg.seed = *seed;
      cfg.ghz.params.seed = *seed;
    }
    if (format) cfg.output.format = *ghzsim::parse_output_format(*format);
    if (points) {
      cfg.scan.points = *points;
      cfg.scan.delays_fs.clear();
    }
    std::cout << ghzsim::run(cfg) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "ghzsim: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
