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

#include "coalsim/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "coalsim/config.hpp"
#include "coalsim/estimate.hpp"
#include "coalsim/experiments.hpp"
#include "coalsim/hitting_mc.hpp"
#include "coalsim/jump_kernel.hpp"
#include "coalsim/parallel.hpp"
#include "coalsim/particle_system.hpp"
#include "coalsim/potential.hpp"
#include "coalsim/scaling.hpp"
#include "coalsim/stable_model.hpp"
#include "coalsim/transition.hpp"
#include "coalsim/volterra.hpp"
#include "coalsim/walk_ensemble.hpp"
#include "json.hpp"

namespace coalsim {

namespace {

// Tolerances of the acceptance criteria.
constexpr double kStableTol = 1e-8;
constexpr double kIdentityTol = 1e-3;
constexpr double kSigma = 3.0;
constexpr double kAllowance = 1e-3;
constexpr double kHittingLow = 0.7, kHittingHigh = 1.3;
constexpr double kDensityLow = 0.75, kDensityHigh = 1.25;
constexpr double kSandwichLow = 0.1, kSandwichHigh = 10.0;
constexpr double kNpointLow = 0.5, kNpointHigh = 2.0;
constexpr double kPlateauDrift = 0.3;

struct GammaFixture {
  double alpha;
  double gamma;
};

// cos(pi a / 2) Gamma(1 - a), and pi/2 at a = 1.
constexpr GammaFixture kGammaTable[] = {
    {0.5, 1.2533141373155003},
    {0.7, 1.3581438997256192},
    {1.0, 1.5707963267948966},
};

const SvfSpec kUnitSvf = ConstantSvf{1.0};

Verdict pass_if(bool ok) { return ok ? Verdict::kPass : Verdict::kFail; }

Estimate exact(double v) { return {v, 0.0, 1}; }

std::string alpha_tag(double alpha) {
  std::ostringstream os;
  os << "[alpha=" << alpha << "]";
  return os.str();
}

template <class F>
CriterionResult timed(int id, std::string name, F&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
    r.pass = !r.rows.empty() && all_pass(r.rows);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

CriterionResult verify_stable_constants(const VerifyOptions& opt) {
  return timed(1, "stable constants", [&](CriterionResult& r) {
    for (const auto& f : kGammaTable) {
      const auto model = build_model(f.alpha, kUnitSvf);
      const double gamma = f.gamma * opt.gamma_fixture_scale;
      const double expected = stable_density_at_zero_closed_form(f.alpha, gamma);
      const double computed = stable_density(model, 0.0);
      r.rows.push_back(make_row("g_alpha(0)" + alpha_tag(f.alpha), 0.0, exact(computed), expected,
                                pass_if(std::abs(computed / expected - 1.0) <= kStableTol)));
      r.rows.push_back(make_row("gamma" + alpha_tag(f.alpha), 0.0, exact(model.gamma), gamma,
                                pass_if(std::abs(model.gamma / gamma - 1.0) <= 1e-12)));
    }
  });
}

CriterionResult verify_potential_identity(const VerifyOptions&) {
  return timed(2, "potential identity", [&](CriterionResult& r) {
    for (const auto& f : kGammaTable) {
      const auto kernel = build_kernel(f.alpha, kUnitSvf);
      const auto id = potential_identity(kernel);
      r.rows.push_back(make_row("sum p(y) a(y)" + alpha_tag(f.alpha), 0.0, exact(id.total), 1.0,
                                pass_if(std::abs(id.total - 1.0) <= kIdentityTol)));
    }
  });
}

CriterionResult verify_volterra_vs_mc(const VerifyOptions& opt) {
  return timed(3, "volterra vs monte carlo", [&](CriterionResult& r) {
    for (const double alpha : {0.5, 1.0}) {
      const auto kernel = build_kernel(alpha, kUnitSvf);
      const auto grid = solve_j(kernel, 100.0, 0.01);
      const double det = hitting_tail(kernel, 1, 100.0, grid);
      const auto mc = mc_hitting_tail(kernel, 1, 100.0, 1000000, opt.seed, opt.workers);
      const auto& e = mc.estimate;
      r.rows.push_back(
          make_row("P(tau_1 > 100)" + alpha_tag(alpha), 100.0, e, det,
                   pass_if(std::abs(e.mean - det) <= kSigma * e.std_error + kAllowance &&
                           grid.residual_ok())));
    }
  });
}

CriterionResult verify_j_asymptotics(const VerifyOptions&) {
  return timed(4, "j asymptotics", [&](CriterionResult& r) {
    const auto kernel = build_kernel(1.0, kUnitSvf);
    const auto model = build_model(1.0, kUnitSvf);
    const auto scaling = build_scaling(model, kernel, 1010.0);
    const auto grid = solve_j(kernel, 1000.0, 0.1);
    const double g0 = model.density_at_zero;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
      const double t = grid.times[i];
      if (t < scaling.t_min()) {
        continue;
      }
      const double v = g0 * scaling.l(t) * grid.j_values[i];
      bad += (v > 0.0 && v <= 1.0) ? 0 : 1;
    }
    r.rows.push_back(make_row("grid points outside (0, 1]", 1000.0,
                              exact(static_cast<double>(bad)), 0.0,
                              pass_if(bad == 0 && grid.residual_ok())));
    const double v2 = g0 * scaling.l(100.0) * grid.j(100.0);
    const double v3 = g0 * scaling.l(1000.0) * grid.j(1000.0);
    r.rows.push_back(make_row("g l j at 100", 100.0, exact(v2), 1.0));
    r.rows.push_back(make_row("g l j at 1000", 1000.0, exact(v3), 1.0,
                              pass_if(std::abs(1.0 - v3) < std::abs(1.0 - v2))));
  });
}

CriterionResult verify_hitting_asymptotics(const VerifyOptions&) {
  return timed(5, "hitting tail asymptotics", [&](CriterionResult& r) {
    for (const double alpha : {0.5, 1.0}) {
      const auto kernel = build_kernel(alpha, kUnitSvf);
      const auto model = build_model(alpha, kUnitSvf);
      const auto scaling = build_scaling(model, kernel, 1010.0);
      const auto grid = solve_j(kernel, 1000.0, 0.1);
      for (const std::int64_t x : {1, 5}) {
        const double det = hitting_tail(kernel, x, 1000.0, grid);
        const double theory = hitting_tail_theory(model, scaling, kernel, x, 1000.0);
        auto row = make_row("x=" + std::to_string(x) + alpha_tag(alpha), 1000.0, exact(det),
                            theory);
        row.verdict = ratio_verdict(row, kHittingLow, kHittingHigh);
        r.rows.push_back(row);
      }
    }
  });
}

std::vector<CriterionResult> verify_coalescing(const VerifyOptions& opt) {
  constexpr double kAlpha = 0.5;
  constexpr std::uint64_t kM = 1000000;
  constexpr std::uint64_t kReplicas = 200;
  constexpr std::uint64_t kDensityReplicas = 20;
  const std::vector<double> checkpoints{10.0, std::sqrt(10.0) * 10.0, 100.0};
  const std::vector<std::vector<std::int64_t>> sets{{0, 1}, {0, 10}, {0, 100}};

  std::vector<CoalescingReplica> reps;
  std::string setup_error;
  const auto start = std::chrono::steady_clock::now();
  const auto kernel = build_kernel(kAlpha, kUnitSvf);
  const auto model = build_model(kAlpha, kUnitSvf);
  const auto scaling = build_scaling(model, kernel, 202.0);
  try {
    std::vector<char> done;
    reps = run_indexed<CoalescingReplica>(
        kReplicas, opt.workers,
        [&](std::uint64_t i) {
          return run_coalescing(kernel, kM, checkpoints, sets, opt.seed, i);
        },
        &done);
    if (std::count(done.begin(), done.end(), 0) > 0) {
      setup_error = "interrupted";
    }
  } catch (const std::exception& e) {
    setup_error = e.what();
  }
  const double shared =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double M = static_cast<double>(kM);

  auto density_est = [&](std::size_t k, std::uint64_t n) {
    Welford w;
    for (std::uint64_t i = 0; i < n; ++i) {
      w.add(static_cast<double>(reps[i].counts[k]) / M);
    }
    return w.estimate();
  };
  auto guard = [&] {
    if (!setup_error.empty()) {
      throw std::runtime_error(setup_error);
    }
  };

  std::vector<CriterionResult> out;
  out.push_back(timed(6, "density", [&](CriterionResult& r) {
    guard();
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
      const double t = checkpoints[k];
      const auto e = density_est(k, kDensityReplicas);
      auto sandwich = make_row("sandwich l(t)/t", t, e, scaling.l(t) / t);
      sandwich.verdict = ratio_verdict(sandwich, kSandwichLow, kSandwichHigh);
      r.rows.push_back(sandwich);
      auto row = make_row("density vs g l(2t)/t", t, e, density_theory(model, scaling, t));
      if (k + 1 == checkpoints.size()) {
        row.verdict = ratio_verdict(row, kDensityLow, kDensityHigh);
      }
      r.rows.push_back(row);
    }
    std::ostringstream os;
    os << "M=" << kM << ", replicas=" << kDensityReplicas << ", shared run " << shared << " s";
    r.detail = os.str();
  }));
  out.back().seconds += shared;

  out.push_back(timed(8, "negative correlation", [&](CriterionResult& r) {
    guard();
    for (std::size_t s = 0; s < sets.size(); ++s) {
      for (const std::size_t k : {std::size_t{0}, checkpoints.size() - 1}) {
        Welford gap, rho2;
        for (const auto& rep : reps) {
          const double r1 = static_cast<double>(rep.counts[k]) / M;
          const double r2 = static_cast<double>(rep.hits[s][k]) / M;
          gap.add(r2 - r1 * r1);
          rho2.add(r2);
        }
        const auto rho1 = density_est(k, reps.size());
        auto row = make_row("rho2(0," + std::to_string(sets[s][1]) + ")", checkpoints[k],
                            rho2.estimate(), rho1.mean * rho1.mean);
        row.mc_stderr = gap.estimate().std_error;
        row.verdict = pass_if(gap.mean() <= kSigma * gap.estimate().std_error);
        r.rows.push_back(row);
      }
    }
  }));

  out.push_back(timed(9, "n-point factorization", [&](CriterionResult& r) {
    guard();
    const std::vector<std::int64_t> x{0, 1};
    const auto nc = mc_noncollision(kernel, x, checkpoints, 100000, opt.seed, opt.workers);
    std::vector<Estimate> rho1, rho2;
    std::ptrdiff_t gate = -1;
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
      rho1.push_back(density_est(k, reps.size()));
      std::vector<std::uint64_t> hits;
      double total = 0;
      for (const auto& rep : reps) {
        hits.push_back(rep.hits[0][k]);
        total += static_cast<double>(rep.hits[0][k]);
      }
      rho2.push_back(estimate_npoint(hits, kM));
      if (total >= 100.0) {
        gate = static_cast<std::ptrdiff_t>(k);
      }
    }
    auto rows = npoint_report(checkpoints, rho1, nc.survival, rho2, 2, kNpointLow, kNpointHigh);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (static_cast<std::ptrdiff_t>(k) != gate) {
        rows[k].verdict = Verdict::kInfo;
      }
      r.rows.push_back(rows[k]);
    }
    if (gate < 0) {
      r.rows.push_back(make_row("checkpoint with >= 100 hits", 0.0, exact(0.0), 1.0,
                                Verdict::kFail));
    }
  }));
  out.back().seconds += shared;
  return out;
}

CriterionResult verify_noncollision(const VerifyOptions& opt) {
  return timed(7, "non-collision", [&](CriterionResult& r) {
    const std::vector<double> pair_times{10.0, 100.0};
    for (const double alpha : {0.5, 1.0}) {
      const auto kernel = build_kernel(alpha, kUnitSvf);
      const auto grid = solve_j(kernel, 200.0, 0.02);
      const std::vector<std::int64_t> x{0, 1};
      const auto nc = mc_noncollision(kernel, x, pair_times, 100000, opt.seed, opt.workers);
      for (std::size_t k = 0; k < pair_times.size(); ++k) {
        const double det = hitting_tail(kernel, 1, 2.0 * pair_times[k], grid);
        const auto& e = nc.survival[k];
        r.rows.push_back(make_row(
            "N=2 vs hitting_tail(1, 2t)" + alpha_tag(alpha), pair_times[k], e, det,
            pass_if(std::abs(e.mean - det) <= kSigma * e.std_error + kAllowance)));
      }
    }
    const auto kernel = build_kernel(1.0, kUnitSvf);
    const auto model = build_model(1.0, kUnitSvf);
    const auto scaling = build_scaling(model, kernel, 2020.0);
    std::vector<double> times;
    for (int k = 0; k <= 4; ++k) {
      times.push_back(10.0 * std::pow(10.0, 0.5 * k));
    }
    const std::vector<std::int64_t> x{0, 1, 2};
    const auto nc = mc_noncollision(kernel, x, times, 1000000, opt.seed, opt.workers);
    const auto fit = fit_noncollision_constant(times, nc.survival, scaling, 3);
    for (std::size_t k = 0; k < times.size(); ++k) {
      r.rows.push_back(make_row("N=3 p l(2t)^3", times[k],
                                exact(nc.survival[k].mean * std::pow(scaling.l(2 * times[k]), 3)),
                                fit.c_hat));
    }
    r.rows.push_back(make_row("N=3 plateau change over last decade", times.back(),
                              exact(fit.decade_change), 0.0,
                              pass_if(!fit.insufficient_survivors &&
                                      std::abs(fit.decade_change) < kPlateauDrift)));
    r.rows.push_back(make_row("N=3 drift per decade", times.back(),
                              {fit.drift, fit.drift_stderr, 1}, 0.0));
  });
}

CriterionResult verify_determinism(const VerifyOptions& opt) {
  return timed(10, "determinism and invariants", [&](CriterionResult& r) {
    std::vector<ExperimentConfig> configs;
    {
      ExperimentConfig c;
      c.experiment = ExperimentKind::kDensity;
      c.torus_size = 4096;
      c.t_min = 1.0;
      c.t_max = 10.0;
      c.replicas = 12;
      configs.push_back(c);
      c.experiment = ExperimentKind::kNpoint;
      c.npoint_offsets = {{0, 1}, {0, 2, 5}};
      c.samples_per_replica = 200;
      configs.push_back(c);
    }
    {
      ExperimentConfig c;
      c.experiment = ExperimentKind::kNoncollision;
      c.alpha = 1.0;
      c.walks_start = {0, 1, 3};
      c.t_min = 1.0;
      c.t_max = 10.0;
      c.replicas = 3000;
      configs.push_back(c);
    }
    {
      ExperimentConfig c;
      c.experiment = ExperimentKind::kHitting;
      c.hitting_sites = {1};
      c.t_min = 1.0;
      c.t_max = 10.0;
      c.replicas = 10000;
      configs.push_back(c);
    }
    for (auto& c : configs) {
      c.seed = opt.seed;
      std::map<std::string, std::string> reference;
      std::size_t mismatches = 0;
      bool invariants_ok = true;
      for (const unsigned w : {1u, 4u, 8u}) {
        c.workers = w;
        const auto res = execute_experiment(c);
        for (const auto& row : res.rows) {
          if ((row.name == "count_monotone" || row.name == "particle_conservation" ||
               row.name == "j_normalized_in_unit_interval") &&
              row.verdict == Verdict::kFail) {
            invariants_ok = false;
          }
        }
        if (w == 1) {
          reference = res.files;
        } else if (res.files != reference) {
          ++mismatches;
        }
      }
      r.rows.push_back(make_row("byte-identical outputs, workers {1,4,8}: " +
                                    std::string(experiment_name(c.experiment)),
                                0.0, exact(static_cast<double>(mismatches)), 0.0,
                                pass_if(mismatches == 0 && !reference.empty())));
      r.rows.push_back(make_row("run invariants: " + std::string(experiment_name(c.experiment)),
                                0.0, exact(invariants_ok ? 0.0 : 1.0), 0.0,
                                pass_if(invariants_ok)));
    }

    for (const double alpha : {0.5, 1.0}) {
      const auto kernel = build_kernel(alpha, kUnitSvf);
      const double defect = kernel.normalization_defect();
      r.rows.push_back(make_row("normalization defect" + alpha_tag(alpha), 0.0, exact(defect),
                                0.0, pass_if(defect <= 1e-12)));
      std::size_t asym = 0, negative = 0;
      for (std::int64_t x = 1; x <= 1000; ++x) {
        asym += kernel.mass(x) == kernel.mass(-x) ? 0 : 1;
        negative += kernel.mass(x) >= 0.0 ? 0 : 1;
      }
      negative += kernel.mass(0) == 0.0 ? 0 : 1;
      r.rows.push_back(make_row("kernel symmetry and sign" + alpha_tag(alpha), 0.0,
                                exact(static_cast<double>(asym + negative)), 0.0,
                                pass_if(asym + negative == 0)));
      std::size_t bad_p = 0;
      for (const double t : {0.5, 5.0, 50.0}) {
        const double p0 = transition_probability(kernel, {t, 0});
        for (const std::int64_t x : {1, 3, 17}) {
          const double p = transition_probability(kernel, {t, x});
          const double q = transition_probability(kernel, {t, -x});
          bad_p += (p >= 0.0 && p <= p0 && std::abs(p - q) <= 1e-14) ? 0 : 1;
        }
      }
      r.rows.push_back(make_row("transition symmetry and bounds" + alpha_tag(alpha), 0.0,
                                exact(static_cast<double>(bad_p)), 0.0, pass_if(bad_p == 0)));
      const auto grid = solve_j(kernel, 50.0, 0.05);
      std::size_t bad_j = 0;
      for (std::size_t i = 0; i < grid.j_values.size(); ++i) {
        const double v = grid.j_values[i];
        bad_j += (v > 0.0 && v <= 1.0) ? 0 : 1;
        if (i > 0 && v > grid.j_values[i - 1] + 1e-12) {
          ++bad_j;
        }
      }
      double prev = 1.0;
      for (const double t : {0.5, 1.0, 5.0, 10.0, 25.0, 50.0}) {
        const double h = hitting_tail(kernel, 1, t, grid);
        bad_j += (h >= 0.0 && h <= prev + 1e-12) ? 0 : 1;
        prev = h;
      }
      r.rows.push_back(make_row("j and hitting tail monotone in [0, 1]" + alpha_tag(alpha), 0.0,
                                exact(static_cast<double>(bad_j)), 0.0, pass_if(bad_j == 0)));
    }

    Welford a, b, ab, ba;
    for (int i = 0; i < 1000; ++i) {
      const double v = std::sin(0.37 * i) + 0.01 * i;
      (i % 3 == 0 ? a : b).add(v);
    }
    ab = a;
    ab.merge(b);
    ba = b;
    ba.merge(a);
    const Estimate ea{0.3, 0.01, 100}, eb{2.0, 0.05, 100};
    const auto prod = product(ea, eb);
    const double delta = std::sqrt(std::pow(eb.mean * ea.std_error, 2) +
                                   std::pow(ea.mean * eb.std_error, 2));
    const bool merge_ok = std::abs(ab.mean() - ba.mean()) <= 1e-12 &&
                          std::abs(ab.variance() - ba.variance()) <= 1e-12 &&
                          std::abs(prod.std_error - delta) <= 1e-12;
    r.rows.push_back(make_row("merge order and delta method", 0.0, exact(merge_ok ? 0.0 : 1.0),
                              0.0, pass_if(merge_ok)));
  });
}

std::vector<CriterionResult> verify_suite(
    const VerifyOptions& options, const std::function<void(const CriterionResult&)>& progress) {
  std::vector<CriterionResult> out;
  auto add = [&](CriterionResult r) {
    if (progress) {
      progress(r);
    }
    out.push_back(std::move(r));
  };
  add(verify_stable_constants(options));
  add(verify_potential_identity(options));
  add(verify_volterra_vs_mc(options));
  add(verify_j_asymptotics(options));
  add(verify_hitting_asymptotics(options));
  auto shared = verify_coalescing(options);
  add(std::move(shared[0]));
  add(verify_noncollision(options));
  add(std::move(shared[1]));
  add(std::move(shared[2]));
  add(verify_determinism(options));
  return out;
}

std::string verify_json(const std::vector<CriterionResult>& results) {
  auto num = [](double v) -> nlohmann::ordered_json {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["git_describe"] = git_describe();
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& c : results) {
    nlohmann::ordered_json item;
    item["id"] = c.id;
    item["name"] = c.name;
    item["verdict"] = c.pass ? "pass" : "fail";
    item["seconds"] = c.seconds;
    if (!c.detail.empty()) {
      item["detail"] = c.detail;
    }
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : c.rows) {
      rows.push_back({{"name", r.name},
                      {"t", num(r.t)},
                      {"mc", num(r.mc_mean)},
                      {"mc_stderr", num(r.mc_stderr)},
                      {"theory", num(r.theory_value)},
                      {"ratio", num(r.ratio)},
                      {"ci", {num(r.ratio_ci_low), num(r.ratio_ci_high)}},
                      {"verdict", std::string(verdict_name(r.verdict))}});
    }
    item["rows"] = rows;
    list.push_back(item);
    all = all && c.pass;
  }
  j["criteria"] = list;
  j["passed"] = all;
  return j.dump(2) + "\n";
}

std::string verdict_line(const CriterionResult& r) {
  std::ostringstream os;
  os << "criterion " << r.id << " " << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " ("
     << r.seconds << " s";
  if (!r.detail.empty()) {
    os << "; " << r.detail;
  }
  os << ")";
  return os.str();
}

}  // namespace coalsim
