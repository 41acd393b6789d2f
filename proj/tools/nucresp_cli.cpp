// Copyright 2026 The nucresp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nucresp/app/run.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kInternal = 3, kIo = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated response functions of a two-particle lattice model"};
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string mode;
  bool t_connectivity = false;
  app.add_option("-c,--config", config_path, "INI configuration file")->required();
  auto* seed_opt = app.add_option("-s,--seed", seed, "Master seed (overrides run.seed)");
  auto* out_opt = app.add_option("-o,--out", out_dir, "Output directory (overrides run.output)");
  auto* mode_opt = app.add_option("-m,--mode", mode, "correlator, spectrum, budget, counts or euclidean");
  auto* t_opt = app.add_flag("--t-connectivity", t_connectivity,
                             "Route counts onto the T-shaped device (default; --t-connectivity=false for all-to-all)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    auto cfg = nucresp::app::load_config(config_path);
    if (*seed_opt) cfg.seed = seed;
    if (*out_opt) cfg.output_dir = out_dir;
    if (*mode_opt) cfg.mode = nucresp::app::parse_mode(mode);
    if (*t_opt) cfg.t_connectivity = t_connectivity;
    for (const auto& f : nucresp::app::run(cfg)) std::cout << f << '\n';
    return kOk;
  } catch (const nucresp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const nucresp::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const nucresp::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
