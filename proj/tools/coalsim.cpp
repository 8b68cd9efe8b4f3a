// Copyright 2026 The coalsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// coalsim: command line front end for the experiments and the acceptance
// suite.

#include <csignal>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "coalsim/config.hpp"
#include "coalsim/experiments.hpp"
#include "coalsim/jump_kernel.hpp"
#include "coalsim/parallel.hpp"
#include "coalsim/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

extern "C" void on_sigint(int) { coalsim::interrupt_flag().store(true); }

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "Config file (flat dotted keys)");
  app->add_option("--seed", f.seed, "Override the config seed");
  app->add_option("--workers", f.workers, "Override the worker count")->check(CLI::PositiveNumber);
  app->add_option("--out", f.out, "Override output_dir");
}

int run_experiment_command(coalsim::ExperimentKind kind, const CommonFlags& f) {
  coalsim::ExperimentConfig config;
  try {
    if (!f.config.empty()) {
      config = coalsim::load_config(f.config);
    }
    config.experiment = kind;
    if (f.seed) {
      config.seed = *f.seed;
    }
    if (f.workers) {
      config.workers = *f.workers;
    }
    if (f.out) {
      config.output_dir = *f.out;
    }
    coalsim::validate(config);
  } catch (const coalsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  coalsim::ExperimentResult res;
  try {
    res = coalsim::run_experiment(config);
  } catch (const coalsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::size_t fails = 0;
  for (const auto& row : res.rows) {
    if (row.verdict == coalsim::Verdict::kFail) {
      ++fails;
      std::cerr << "fail: " << row.name << " t=" << row.t << " mc=" << row.mc_mean
                << " theory=" << row.theory_value << " ratio=" << row.ratio << "\n";
    }
  }
  std::cout << coalsim::experiment_name(kind) << ": " << res.rows.size() << " rows, " << fails
            << " failed, " << res.wall_seconds << " s" << (res.truncated ? " (truncated)" : "")
            << "; outputs in " << config.output_dir << "\n";
  return fails == 0 ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_sigint);

  CLI::App app{"coalsim: coalescing heavy-tailed random walks"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    coalsim::ExperimentKind kind;
  };
  const Sub subs[] = {
      {"numerics", "Deterministic checks: stable constants, potential identity, j, LLT",
       coalsim::ExperimentKind::kNumerics},
      {"hitting", "Hitting tails: Volterra solver, Monte Carlo and asymptotics",
       coalsim::ExperimentKind::kHitting},
      {"density", "Coalescing density on the torus", coalsim::ExperimentKind::kDensity},
      {"noncollision", "Non-collision probability of N independent walks",
       coalsim::ExperimentKind::kNoncollision},
      {"npoint", "N-point correlations and their factorization",
       coalsim::ExperimentKind::kNpoint},
      {"independence", "Joint position / non-collision independence diagnostic",
       coalsim::ExperimentKind::kIndependence},
  };
  CommonFlags flags;
  std::optional<coalsim::ExperimentKind> chosen;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, flags);
    const auto kind = s.kind;
    cmd->callback([&chosen, kind] { chosen = kind; });
  }

  coalsim::VerifyOptions vopt;
  std::optional<std::string> verify_out;
  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  verify->add_option("--seed", vopt.seed, "Base seed");
  verify->add_option("--workers", vopt.workers, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--out", verify_out, "Directory for verify.json");
  verify->add_option("--gamma-fixture-scale", vopt.gamma_fixture_scale,
                     "Scale the gamma fixture (sensitivity check)");

  double dump_alpha = 0.5;
  std::string dump_family = "constant";
  double dump_param = 1.0;
  std::int64_t dump_radius = 1000;
  std::string dump_config;
  std::optional<std::string> dump_out;
  auto* dump = app.add_subcommand("kernel-dump", "Write x,p for |x| <= radius");
  dump->add_option("--config", dump_config, "Take the model from a config file");
  dump->add_option("--alpha", dump_alpha, "Tail index in (0, 1]");
  dump->add_option("--svf-family", dump_family, "constant, logpower or explogpower");
  dump->add_option("--svf-param", dump_param, "Slowly varying function parameter");
  dump->add_option("--radius", dump_radius, "Largest |x|")->check(CLI::NonNegativeNumber);
  dump->add_option("--out", dump_out, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (chosen) {
      return run_experiment_command(*chosen, flags);
    }
    if (verify->parsed()) {
      const auto results = coalsim::verify_suite(vopt, [](const coalsim::CriterionResult& r) {
        std::cout << coalsim::verdict_line(r) << std::endl;
      });
      bool ok = true;
      for (const auto& r : results) {
        ok = ok && r.pass;
      }
      if (verify_out) {
        std::filesystem::create_directories(*verify_out);
        std::ofstream(std::filesystem::path(*verify_out) / "verify.json")
            << coalsim::verify_json(results);
      }
      return ok ? kExitPass : kExitFail;
    }
    if (dump->parsed()) {
      coalsim::SvfSpec svf;
      try {
        if (!dump_config.empty()) {
          const auto c = coalsim::load_config(dump_config);
          dump_alpha = c.alpha;
          svf = c.svf();
        } else {
          svf = coalsim::make_svf(dump_family, dump_param);
        }
      } catch (const coalsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
      } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
      }
      const auto kernel = coalsim::build_kernel(dump_alpha, svf);
      const auto csv = coalsim::kernel_dump_csv(kernel, dump_radius);
      if (dump_out) {
        std::ofstream(*dump_out, std::ios::binary) << csv;
      } else {
        std::cout << csv;
      }
      return kExitPass;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitFail;
}
