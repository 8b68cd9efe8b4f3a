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

#include "coalsim/experiments.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "coalsim/estimate.hpp"
#include "coalsim/hitting_mc.hpp"
#include "coalsim/llt_checks.hpp"
#include "coalsim/parallel.hpp"
#include "coalsim/particle_system.hpp"
#include "coalsim/potential.hpp"
#include "coalsim/stable_model.hpp"
#include "coalsim/volterra.hpp"
#include "coalsim/walk_ensemble.hpp"
#include "json.hpp"

#ifndef COALSIM_GIT_DESCRIBE
#define COALSIM_GIT_DESCRIBE "unknown"
#endif

namespace coalsim {

std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string git_describe() { return COALSIM_GIT_DESCRIBE; }

std::string kernel_dump_csv(const JumpKernel& kernel, std::int64_t radius) {
  std::string out = "x,p\n";
  for (std::int64_t x = -radius; x <= radius; ++x) {
    out += std::to_string(x) + "," + format_number(kernel.mass(x)) + "\n";
  }
  return out;
}

std::uint64_t torus_size_for(const ExperimentConfig& config, const ScalingFunctions& scaling) {
  if (config.torus_size != 0) {
    return config.torus_size;
  }
  const double m = std::ceil(config.torus_kappa * scaling.b(config.t_max));
  return static_cast<std::uint64_t>(std::clamp(m, 2.0, 2147483647.0));
}

namespace {

struct Context {
  const ExperimentConfig& config;
  JumpKernel kernel;
  StableModel model;
  ScalingFunctions scaling;
  std::vector<double> checkpoints;

  explicit Context(const ExperimentConfig& c)
      : config(c),
        kernel(build_kernel(c.alpha, c.svf())),
        model(build_model(c.alpha, c.svf())),
        scaling(build_scaling(model, kernel, 2.02 * c.t_max)),
        checkpoints(c.checkpoints()) {}

  std::uint64_t samples() const { return config.replicas * config.samples_per_replica; }
  double volterra_step(double horizon) const {
    return config.volterra_step > 0.0 ? config.volterra_step : horizon / 1e4;
  }
};

std::string label(const std::vector<std::int64_t>& offsets) {
  return "[" + format_int_list(offsets) + "]";
}

Verdict within(double a, double b, double se, const VerdictThresholds& v) {
  return std::abs(a - b) <= v.sigma * se + v.allowance ? Verdict::kPass : Verdict::kFail;
}

ComparisonRow flag_row(std::string name, double t, double bad, Verdict verdict) {
  return make_row(std::move(name), t, {bad, 0.0, 1}, 0.0, verdict);
}

struct TorusRun {
  std::uint64_t M = 0;
  std::vector<std::uint64_t> index;
  std::vector<CoalescingReplica> replicas;
  bool truncated = false;
};

TorusRun run_torus(const Context& ctx, const std::vector<std::vector<std::int64_t>>& offsets) {
  TorusRun run;
  run.M = torus_size_for(ctx.config, ctx.scaling);
  std::vector<char> done;
  auto reps = run_indexed<CoalescingReplica>(
      ctx.config.replicas, ctx.config.workers,
      [&](std::uint64_t r) {
        return run_coalescing(ctx.kernel, run.M, ctx.checkpoints, offsets, ctx.config.seed, r);
      },
      &done);
  for (std::uint64_t r = 0; r < reps.size(); ++r) {
    if (done[r]) {
      run.index.push_back(r);
      run.replicas.push_back(std::move(reps[r]));
    } else {
      run.truncated = true;
    }
  }
  return run;
}

std::vector<Estimate> density_estimates(const Context& ctx, const TorusRun& run) {
  std::vector<Estimate> out;
  for (std::size_t k = 0; k < ctx.checkpoints.size(); ++k) {
    Welford w;
    for (const auto& rep : run.replicas) {
      w.add(static_cast<double>(rep.counts[k]) / static_cast<double>(run.M));
    }
    out.push_back(w.estimate());
  }
  return out;
}

void add_density(const Context& ctx, const TorusRun& run, ExperimentResult& res) {
  const auto& c = ctx.config;
  std::string csv = "replica,t,count,M,density\n";
  for (std::size_t i = 0; i < run.replicas.size(); ++i) {
    for (std::size_t k = 0; k < ctx.checkpoints.size(); ++k) {
      const auto n = run.replicas[i].counts[k];
      csv += std::to_string(run.index[i]) + "," + format_number(ctx.checkpoints[k]) + "," +
             std::to_string(n) + "," + std::to_string(run.M) + "," +
             format_number(static_cast<double>(n) / static_cast<double>(run.M)) + "\n";
    }
  }
  res.files["density.csv"] = std::move(csv);

  const auto est = density_estimates(ctx, run);
  for (std::size_t k = 0; k < ctx.checkpoints.size(); ++k) {
    const double t = ctx.checkpoints[k];
    auto row = make_row("density", t, est[k], density_theory(ctx.model, ctx.scaling, t));
    if (k + 1 == ctx.checkpoints.size()) {
      row.verdict = ratio_verdict(row, c.verdict.density_low, c.verdict.density_high);
    }
    res.rows.push_back(row);
    auto sandwich = make_row("density_sandwich", t, est[k], ctx.scaling.l(t) / t);
    sandwich.verdict = ratio_verdict(sandwich, c.verdict.sandwich_low, c.verdict.sandwich_high);
    res.rows.push_back(sandwich);
  }
  std::uint64_t not_monotone = 0, not_conserved = 0, events = 0;
  for (const auto& rep : run.replicas) {
    not_monotone += rep.monotone ? 0 : 1;
    not_conserved += (run.M - rep.counts.back() == rep.coalescences) ? 0 : 1;
    events += rep.events;
  }
  const double t_last = ctx.checkpoints.back();
  res.rows.push_back(flag_row("count_monotone", t_last, static_cast<double>(not_monotone),
                              not_monotone == 0 ? Verdict::kPass : Verdict::kFail));
  res.rows.push_back(flag_row("particle_conservation", t_last, static_cast<double>(not_conserved),
                              not_conserved == 0 ? Verdict::kPass : Verdict::kFail));
  const double kb = c.torus_kappa * ctx.scaling.b(c.t_max);
  res.notes.emplace_back("torus_size", static_cast<double>(run.M));
  res.notes.emplace_back("kappa_b_tmax", kb);
  res.notes.emplace_back("finite_size_risk", static_cast<double>(run.M) < kb ? 1.0 : 0.0);
  res.notes.emplace_back("replicas_completed", static_cast<double>(run.replicas.size()));
  res.notes.emplace_back("events", static_cast<double>(events));
  res.truncated = res.truncated || run.truncated;
}

void run_density_experiment(const Context& ctx, ExperimentResult& res) {
  const auto run = run_torus(ctx, {});
  add_density(ctx, run, res);
}

void run_npoint_experiment(const Context& ctx, ExperimentResult& res) {
  const auto& c = ctx.config;
  const auto& sets = c.npoint_offsets;
  const auto run = run_torus(ctx, sets);
  add_density(ctx, run, res);
  const auto rho1 = density_estimates(ctx, run);

  std::string csv = "replica,t,offsets,hits,translations\n";
  for (std::size_t i = 0; i < run.replicas.size(); ++i) {
    for (std::size_t s = 0; s < sets.size(); ++s) {
      for (std::size_t k = 0; k < ctx.checkpoints.size(); ++k) {
        csv += std::to_string(run.index[i]) + "," + format_number(ctx.checkpoints[k]) + "," +
               format_int_list(sets[s]) + "," + std::to_string(run.replicas[i].hits[s][k]) + "," +
               std::to_string(run.M) + "\n";
      }
    }
  }
  res.files["npoint.csv"] = std::move(csv);

  const double M = static_cast<double>(run.M);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const int N = static_cast<int>(sets[s].size());
    std::vector<Estimate> rhoN;
    std::vector<double> aggregate;
    for (std::size_t k = 0; k < ctx.checkpoints.size(); ++k) {
      std::vector<std::uint64_t> hits;
      for (const auto& rep : run.replicas) {
        hits.push_back(rep.hits[s][k]);
      }
      rhoN.push_back(estimate_npoint(hits, run.M));
      double total = 0;
      for (const auto h : hits) {
        total += static_cast<double>(h);
      }
      aggregate.push_back(total);
    }
    if (N < 2) {
      continue;
    }
    for (std::size_t k = 0; k < ctx.checkpoints.size(); ++k) {
      Welford gap;
      for (const auto& rep : run.replicas) {
        const double r1 = static_cast<double>(rep.counts[k]) / M;
        gap.add(static_cast<double>(rep.hits[s][k]) / M - std::pow(r1, N));
      }
      auto row = make_row("negative_correlation" + label(sets[s]), ctx.checkpoints[k], rhoN[k],
                          std::pow(rho1[k].mean, N));
      row.mc_stderr = gap.estimate().std_error;
      row.verdict = gap.mean() <= c.verdict.sigma * gap.estimate().std_error ? Verdict::kPass
                                                                             : Verdict::kFail;
      res.rows.push_back(row);
    }
    const auto nc = mc_noncollision(ctx.kernel, sets[s], ctx.checkpoints, ctx.samples(), c.seed,
                                    c.workers);
    res.truncated = res.truncated || nc.truncated;
    for (std::size_t k = 0; k < ctx.checkpoints.size(); ++k) {
      res.rows.push_back(make_row("noncollision" + label(sets[s]), ctx.checkpoints[k],
                                  nc.survival[k], std::numeric_limits<double>::quiet_NaN()));
    }
    auto rows = npoint_report(ctx.checkpoints, rho1, nc.survival, rhoN, N, c.verdict.npoint_low,
                              c.verdict.npoint_high);
    std::ptrdiff_t gate = -1;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (aggregate[k] >= 100.0) {
        gate = static_cast<std::ptrdiff_t>(k);
      }
    }
    for (std::size_t k = 0; k < rows.size(); ++k) {
      rows[k].name += label(sets[s]);
      if (static_cast<std::ptrdiff_t>(k) != gate) {
        rows[k].verdict = Verdict::kInfo;
      }
      res.rows.push_back(rows[k]);
    }
    if (gate < 0) {
      res.notes.emplace_back("npoint_insufficient_hits" + label(sets[s]), 1.0);
    }
  }
}

void run_noncollision_experiment(const Context& ctx, ExperimentResult& res) {
  const auto& c = ctx.config;
  const auto nc = mc_noncollision(ctx.kernel, c.walks_start, ctx.checkpoints, ctx.samples(),
                                  c.seed, c.workers);
  res.truncated = res.truncated || nc.truncated;
  std::string csv = "replica,t,survived\n";
  for (std::size_t i = 0; i < nc.tau.size(); ++i) {
    for (const double t : ctx.checkpoints) {
      csv += std::to_string(nc.replica[i]) + "," + format_number(t) + "," +
             (std::isnan(nc.tau[i]) ? std::string("NA") : (nc.tau[i] > t ? "1" : "0")) + "\n";
    }
  }
  res.files["noncollision.csv"] = std::move(csv);
  res.notes.emplace_back("overflow", static_cast<double>(nc.overflow));

  const int N = static_cast<int>(c.walks_start.size());
  if (N == 2) {
    const double horizon = 2.0 * c.t_max;
    const auto grid = solve_j(ctx.kernel, horizon, ctx.volterra_step(horizon));
    const auto gap = c.walks_start[1] - c.walks_start[0];
    for (std::size_t k = 0; k < ctx.checkpoints.size(); ++k) {
      const double t = ctx.checkpoints[k];
      const double det = hitting_tail(ctx.kernel, gap, 2.0 * t, grid);
      auto row = make_row("noncollision_vs_hitting", t, nc.survival[k], det);
      row.verdict = within(nc.survival[k].mean, det, nc.survival[k].std_error, c.verdict);
      res.rows.push_back(row);
    }
  }
  if (ctx.checkpoints.size() >= 4) {
    const auto fit = fit_noncollision_constant(ctx.checkpoints, nc.survival, ctx.scaling, N);
    res.notes.emplace_back("insufficient_survivors", fit.insufficient_survivors ? 1.0 : 0.0);
    if (!fit.insufficient_survivors) {
      const int v = pair_count(N);
      for (std::size_t k = 0; k < ctx.checkpoints.size(); ++k) {
        const double t = ctx.checkpoints[k];
        res.rows.push_back(make_row("noncollision_plateau_fit", t, nc.survival[k],
                                    fit.c_hat / std::pow(ctx.scaling.l(2.0 * t), v)));
      }
      res.rows.push_back(make_row("noncollision_decade_change", c.t_max,
                                  {fit.decade_change, 0.0, 1}, 0.0,
                                  std::abs(fit.decade_change) < c.verdict.plateau_drift
                                      ? Verdict::kPass
                                      : Verdict::kFail));
      res.rows.push_back(make_row("noncollision_drift_per_decade", c.t_max,
                                  {fit.drift, fit.drift_stderr, 1}, 0.0, Verdict::kInfo));
      res.notes.emplace_back("c_hat", fit.c_hat);
      res.notes.emplace_back("c_hat_stderr", fit.c_stderr);
    }
  } else {
    for (std::size_t k = 0; k < ctx.checkpoints.size(); ++k) {
      res.rows.push_back(make_row("noncollision", ctx.checkpoints[k], nc.survival[k],
                                  std::numeric_limits<double>::quiet_NaN()));
    }
  }
}

void run_hitting_experiment(const Context& ctx, ExperimentResult& res) {
  const auto& c = ctx.config;
  const auto grid = solve_j(ctx.kernel, c.t_max, ctx.volterra_step(c.t_max));
  std::string vcsv = "t,j,g0_l_j\n";
  const double g0 = ctx.model.density_at_zero;
  bool j_in_range = grid.residual_ok();
  for (std::size_t i = 0; i < grid.times.size(); ++i) {
    const double t = grid.times[i];
    const double norm = t >= ctx.scaling.t_min() ? g0 * ctx.scaling.l(t) * grid.j_values[i] : 1.0;
    j_in_range = j_in_range && norm > 0.0 && norm <= 1.0;
    vcsv += format_number(t) + "," + format_number(grid.j_values[i]) + "," +
            (t >= ctx.scaling.t_min() ? format_number(norm) : std::string("NA")) + "\n";
  }
  res.files["volterra.csv"] = std::move(vcsv);
  res.rows.push_back(flag_row("j_normalized_in_unit_interval", c.t_max, j_in_range ? 0.0 : 1.0,
                              j_in_range ? Verdict::kPass : Verdict::kFail));
  res.notes.emplace_back("volterra_residual", grid.residual_max);

  std::string csv = "alpha,svf,x,t,deterministic,mc_mean,mc_stderr,theory\n";
  for (const auto x : c.hitting_sites) {
    const double a = potential_kernel(ctx.kernel, x);
    const auto curve =
        mc_hitting_curve(ctx.kernel, x, ctx.checkpoints, ctx.samples(), c.seed, c.workers);
    res.truncated = res.truncated || curve.truncated;
    for (std::size_t k = 0; k < ctx.checkpoints.size(); ++k) {
      const double t = ctx.checkpoints[k];
      const double det = hitting_tail(ctx.kernel, x, t, grid);
      const double theory = hitting_tail_theory(ctx.model, ctx.scaling, a, t);
      const auto& mc = curve.survival[k];
      csv += format_number(c.alpha) + "," + describe(c.svf()) + "," + std::to_string(x) + "," +
             format_number(t) + "," + format_number(det) + "," + format_number(mc.mean) + "," +
             format_number(mc.std_error) + "," + format_number(theory) + "\n";
      auto row = make_row("hitting_mc_vs_volterra[" + std::to_string(x) + "]", t, mc, det);
      row.verdict = within(mc.mean, det, mc.std_error, c.verdict);
      res.rows.push_back(row);
      auto trow =
          make_row("hitting_vs_asymptotic[" + std::to_string(x) + "]", t, {det, 0.0, 1}, theory);
      if (k + 1 == ctx.checkpoints.size()) {
        trow.verdict = ratio_verdict(trow, c.verdict.hitting_low, c.verdict.hitting_high);
      }
      res.rows.push_back(trow);
    }
  }
  res.files["hitting_tail.csv"] = std::move(csv);
}

void run_numerics_experiment(const Context& ctx, ExperimentResult& res) {
  const auto& c = ctx.config;
  const double g_num = stable_density(ctx.model, 0.0);
  const double g_closed = stable_density_at_zero_closed_form(c.alpha, ctx.model.gamma);
  auto g_row = make_row("stable_density_at_zero", 0.0, {g_num, 0.0, 1}, g_closed);
  g_row.verdict = std::abs(g_num / g_closed - 1.0) <= 1e-8 ? Verdict::kPass : Verdict::kFail;
  res.rows.push_back(g_row);

  const double defect = ctx.kernel.normalization_defect();
  res.rows.push_back(flag_row("kernel_normalization_defect", 0.0, defect,
                              defect <= 1e-12 ? Verdict::kPass : Verdict::kFail));

  const auto id = potential_identity(ctx.kernel);
  auto id_row = make_row("potential_identity", 0.0, {id.total, 0.0, 1}, 1.0);
  id_row.verdict = std::abs(id.total - 1.0) <= 1e-3 ? Verdict::kPass : Verdict::kFail;
  res.rows.push_back(id_row);

  const auto grid = solve_j(ctx.kernel, c.t_max, ctx.volterra_step(c.t_max));
  const double g0 = ctx.model.density_at_zero;
  for (const double t : ctx.checkpoints) {
    res.rows.push_back(
        make_row("j_normalized", t, {g0 * ctx.scaling.l(t) * grid.j(t), 0.0, 1}, 1.0));
  }
  if (c.t_max / 10.0 >= ctx.checkpoints.front()) {
    const double near = std::abs(1.0 - g0 * ctx.scaling.l(c.t_max) * grid.j(c.t_max));
    const double far =
        std::abs(1.0 - g0 * ctx.scaling.l(c.t_max / 10.0) * grid.j(c.t_max / 10.0));
    res.rows.push_back(make_row("j_normalized_gap_shrinks", c.t_max, {near, 0.0, 1}, far,
                                near < far ? Verdict::kPass : Verdict::kFail));
  }
  for (const auto x : c.hitting_sites) {
    const double det = hitting_tail(ctx.kernel, x, c.t_max, grid);
    const double theory = hitting_tail_theory(ctx.model, ctx.scaling, ctx.kernel, x, c.t_max);
    auto row = make_row("hitting_vs_asymptotic[" + std::to_string(x) + "]", c.t_max,
                        {det, 0.0, 1}, theory);
    row.verdict = ratio_verdict(row, c.verdict.hitting_low, c.verdict.hitting_high);
    res.rows.push_back(row);
  }
  for (const double t : ctx.checkpoints) {
    const auto llt = llt_sup_error(ctx.kernel, ctx.model, t);
    res.rows.push_back(make_row("llt_sup_error", t, {llt.sup_error, 0.0, 1},
                                std::numeric_limits<double>::quiet_NaN()));
  }
}

void run_independence_experiment(const Context& ctx, ExperimentResult& res) {
  const auto& c = ctx.config;
  if (c.walks_start.size() != 2) {
    throw ConfigError("walks.start", "independence needs exactly two sites");
  }
  const std::array<std::int64_t, 2> x{c.walks_start[0], c.walks_start[1]};
  for (const double t : ctx.checkpoints) {
    const double b = ctx.scaling.b(t);
    const auto main = mc_joint_independence(ctx.kernel, x, t, c.independence_bucket_width, b,
                                            ctx.samples(), c.seed, c.workers, false);
    const auto ctrl = mc_joint_independence(ctx.kernel, x, t, c.independence_bucket_width, b,
                                            ctx.samples(), c.seed, c.workers, true);
    res.rows.push_back(make_row("independence_discrepancy", t,
                                {main.discrepancy, main.std_error, main.survival.n},
                                std::numeric_limits<double>::quiet_NaN()));
    auto row = make_row("independence_control", t,
                        {ctrl.discrepancy, ctrl.std_error, ctrl.survival.n},
                        std::numeric_limits<double>::quiet_NaN());
    row.verdict = ctrl.discrepancy <= c.verdict.sigma * ctrl.std_error ? Verdict::kPass
                                                                        : Verdict::kFail;
    res.rows.push_back(row);
  }
}

}  // namespace

ExperimentResult execute_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult res;
  const Context ctx(config);
  switch (config.experiment) {
    case ExperimentKind::kDensity:
      run_density_experiment(ctx, res);
      break;
    case ExperimentKind::kNpoint:
      run_npoint_experiment(ctx, res);
      break;
    case ExperimentKind::kNoncollision:
      run_noncollision_experiment(ctx, res);
      break;
    case ExperimentKind::kHitting:
      run_hitting_experiment(ctx, res);
      break;
    case ExperimentKind::kNumerics:
      run_numerics_experiment(ctx, res);
      break;
    case ExperimentKind::kIndependence:
      run_independence_experiment(ctx, res);
      break;
  }
  res.truncated = res.truncated || interrupt_flag().load();
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::string summary_json(const ExperimentConfig& config, const ExperimentResult& result) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config_echo(config)) {
    echo[k] = v;
  }
  j["config"] = echo;
  j["git_describe"] = git_describe();
  j["wall_seconds"] = result.wall_seconds;
  j["truncated"] = result.truncated;
  nlohmann::ordered_json notes = nlohmann::ordered_json::object();
  for (const auto& [k, v] : result.notes) {
    notes[k] = v;
  }
  j["notes"] = notes;
  auto num = [](double v) -> nlohmann::ordered_json {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : result.rows) {
    nlohmann::ordered_json row;
    row["name"] = r.name;
    row["t"] = num(r.t);
    row["mc"] = num(r.mc_mean);
    row["mc_stderr"] = num(r.mc_stderr);
    row["theory"] = num(r.theory_value);
    row["ratio"] = num(r.ratio);
    row["ci"] = {num(r.ratio_ci_low), num(r.ratio_ci_high)};
    row["verdict"] = std::string(verdict_name(r.verdict));
    rows.push_back(row);
  }
  j["criteria"] = rows;
  j["passed"] = result.passed();
  return j.dump(2) + "\n";
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  for (const auto& [name, text] : result.files) {
    std::ofstream(dir / name, std::ios::binary) << text;
  }
  std::ofstream(dir / "summary.json", std::ios::binary) << summary_json(config, result);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  auto res = execute_experiment(config);
  write_outputs(config, res);
  return res;
}

}  // namespace coalsim
