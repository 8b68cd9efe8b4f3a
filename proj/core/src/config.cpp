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

#include "coalsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace coalsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

double to_double(std::string_view v, std::string_view key) {
  const std::string s(v);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(std::string(key), "expected a number, got '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(out)) {
    throw ConfigError(std::string(key), "expected a number, got '" + s + "'");
  }
  return out;
}

std::uint64_t to_uint(std::string_view v, std::string_view key) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    // Accept integral values written in floating form, e.g. 1e6.
    const double d = to_double(v, key);
    if (d < 0 || d != std::floor(d) || d > 1.8e19) {
      throw ConfigError(std::string(key),
                        "expected a nonnegative integer, got '" + std::string(v) + "'");
    }
    return static_cast<std::uint64_t>(d);
  }
  return out;
}

}  // namespace

std::string_view experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kDensity:
      return "density";
    case ExperimentKind::kNpoint:
      return "npoint";
    case ExperimentKind::kNoncollision:
      return "noncollision";
    case ExperimentKind::kHitting:
      return "hitting";
    case ExperimentKind::kNumerics:
      return "numerics";
    case ExperimentKind::kIndependence:
      return "independence";
  }
  return "unknown";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (auto k : {ExperimentKind::kDensity, ExperimentKind::kNpoint, ExperimentKind::kNoncollision,
                 ExperimentKind::kHitting, ExperimentKind::kNumerics,
                 ExperimentKind::kIndependence}) {
    if (experiment_name(k) == name) {
      return k;
    }
  }
  if (name == "numerics-verify") {
    return ExperimentKind::kNumerics;
  }
  throw ConfigError("experiment", "unknown experiment '" + std::string(name) +
                                      "' (density, npoint, noncollision, hitting, numerics, "
                                      "independence)");
}

std::vector<std::int64_t> parse_int_list(std::string_view text, std::string_view key) {
  std::vector<std::int64_t> out;
  std::string_view rest = text;
  while (true) {
    const auto pos = rest.find_first_of(";,");
    const auto item = trim(rest.substr(0, pos));
    if (item.empty()) {
      throw ConfigError(std::string(key), "empty entry in list '" + std::string(text) + "'");
    }
    std::int64_t v = 0;
    const auto* end = item.data() + item.size();
    const auto res = std::from_chars(item.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) {
      throw ConfigError(std::string(key), "expected an integer, got '" + std::string(item) + "'");
    }
    out.push_back(v);
    if (pos == std::string_view::npos) {
      break;
    }
    rest = rest.substr(pos + 1);
  }
  return out;
}

std::string format_int_list(const std::vector<std::int64_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) {
      out += ';';
    }
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<double> ExperimentConfig::checkpoints() const {
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double t = t_min * std::pow(ratio, k);
    if (t > t_max * (1.0 + 1e-9)) {
      break;
    }
    out.push_back(t);
  }
  if (out.empty() || out.back() < t_max * (1.0 - 1e-9)) {
    out.push_back(t_max);
  } else {
    out.back() = t_max;
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  using Setter = std::function<void(std::string_view, const std::string&)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"model.alpha", [&](auto v, auto& k) { c.alpha = to_double(v, k); }},
      {"model.svf.family", [&](auto v, auto&) { c.svf_family = unquote(v); }},
      {"model.svf.param", [&](auto v, auto& k) { c.svf_param = to_double(v, k); }},
      {"experiment", [&](auto v, auto&) { c.experiment = parse_experiment(unquote(v)); }},
      {"torus.kappa", [&](auto v, auto& k) { c.torus_kappa = to_double(v, k); }},
      {"torus.size", [&](auto v, auto& k) { c.torus_size = to_uint(v, k); }},
      {"checkpoints.t_min", [&](auto v, auto& k) { c.t_min = to_double(v, k); }},
      {"checkpoints.t_max", [&](auto v, auto& k) { c.t_max = to_double(v, k); }},
      {"checkpoints.ratio", [&](auto v, auto& k) { c.ratio = to_double(v, k); }},
      {"replicas", [&](auto v, auto& k) { c.replicas = to_uint(v, k); }},
      {"samples_per_replica", [&](auto v, auto& k) { c.samples_per_replica = to_uint(v, k); }},
      {"seed", [&](auto v, auto& k) { c.seed = to_uint(v, k); }},
      {"workers", [&](auto v, auto& k) { c.workers = static_cast<unsigned>(to_uint(v, k)); }},
      {"output_dir", [&](auto v, auto&) { c.output_dir = unquote(v); }},
      {"walks.start", [&](auto v, auto& k) { c.walks_start = parse_int_list(unquote(v), k); }},
      {"npoint.offsets",
       [&](auto v, auto& k) {
         c.npoint_offsets.clear();
         const std::string s = unquote(v);
         std::string_view rest = s;
         while (true) {
           const auto pos = rest.find('|');
           c.npoint_offsets.push_back(parse_int_list(trim(rest.substr(0, pos)), k));
           if (pos == std::string_view::npos) {
             break;
           }
           rest = rest.substr(pos + 1);
         }
       }},
      {"hitting.sites", [&](auto v, auto& k) { c.hitting_sites = parse_int_list(unquote(v), k); }},
      {"volterra.step", [&](auto v, auto& k) { c.volterra_step = to_double(v, k); }},
      {"independence.bucket_width",
       [&](auto v, auto& k) { c.independence_bucket_width = to_double(v, k); }},
      {"verdict.density_low", [&](auto v, auto& k) { c.verdict.density_low = to_double(v, k); }},
      {"verdict.density_high", [&](auto v, auto& k) { c.verdict.density_high = to_double(v, k); }},
      {"verdict.sandwich_low", [&](auto v, auto& k) { c.verdict.sandwich_low = to_double(v, k); }},
      {"verdict.sandwich_high",
       [&](auto v, auto& k) { c.verdict.sandwich_high = to_double(v, k); }},
      {"verdict.hitting_low", [&](auto v, auto& k) { c.verdict.hitting_low = to_double(v, k); }},
      {"verdict.hitting_high", [&](auto v, auto& k) { c.verdict.hitting_high = to_double(v, k); }},
      {"verdict.npoint_low", [&](auto v, auto& k) { c.verdict.npoint_low = to_double(v, k); }},
      {"verdict.npoint_high", [&](auto v, auto& k) { c.verdict.npoint_high = to_double(v, k); }},
      {"verdict.plateau_drift",
       [&](auto v, auto& k) { c.verdict.plateau_drift = to_double(v, k); }},
      {"verdict.sigma", [&](auto v, auto& k) { c.verdict.sigma = to_double(v, k); }},
      {"verdict.allowance", [&](auto v, auto& k) { c.verdict.allowance = to_double(v, k); }},
  };

  std::set<std::string, std::less<>> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError(key, "unknown key");
    }
    if (!seen.insert(key).second) {
      throw ConfigError(key, "given more than once");
    }
    if (value.empty()) {
      throw ConfigError(key, "missing value");
    }
    it->second(value, key);
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("--config", "cannot open '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) {
    throw ConfigError("model.alpha", "must lie in (0, 1]");
  }
  try {
    (void)c.svf();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model.svf", e.what());
  }
  if (!(c.torus_kappa > 0.0)) {
    throw ConfigError("torus.kappa", "must be positive");
  }
  if (c.torus_size == 1 || c.torus_size >= (std::uint64_t{1} << 31)) {
    throw ConfigError("torus.size", "must be 0 (auto) or in [2, 2^31)");
  }
  if (!(c.t_min > 0.0)) {
    throw ConfigError("checkpoints.t_min", "must be positive");
  }
  if (!(c.t_max >= c.t_min)) {
    throw ConfigError("checkpoints.t_max", "must be at least checkpoints.t_min");
  }
  if (!(c.ratio > 1.0)) {
    throw ConfigError("checkpoints.ratio", "must exceed 1");
  }
  if (c.replicas < 1) {
    throw ConfigError("replicas", "must be at least 1");
  }
  if (c.samples_per_replica < 1) {
    throw ConfigError("samples_per_replica", "must be at least 1");
  }
  if (c.workers < 1) {
    throw ConfigError("workers", "must be at least 1");
  }
  if (c.output_dir.empty()) {
    throw ConfigError("output_dir", "must not be empty");
  }
  {
    auto xs = c.walks_start;
    std::sort(xs.begin(), xs.end());
    if (xs.size() < 2 || xs.size() > 5 || std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
      throw ConfigError("walks.start", "needs 2 to 5 distinct sites");
    }
  }
  for (const auto& set : c.npoint_offsets) {
    auto xs = set;
    std::sort(xs.begin(), xs.end());
    if (xs.empty() || xs.size() > 5 || std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
      throw ConfigError("npoint.offsets", "each set needs 1 to 5 distinct offsets");
    }
  }
  for (const auto x : c.hitting_sites) {
    if (x == 0) {
      throw ConfigError("hitting.sites", "sites must be nonzero");
    }
  }
  if (c.volterra_step < 0.0 || (c.volterra_step > 0.0 && c.volterra_step > c.t_max / 100.0)) {
    throw ConfigError("volterra.step", "must be 0 (auto) or at most t_max/100");
  }
  if (!(c.independence_bucket_width > 0.0)) {
    throw ConfigError("independence.bucket_width", "must be positive");
  }
  if (!(c.verdict.sigma > 0.0)) {
    throw ConfigError("verdict.sigma", "must be positive");
  }
}

std::map<std::string, std::string> config_echo(const ExperimentConfig& c) {
  auto num = [](double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  };
  std::string offsets;
  for (std::size_t i = 0; i < c.npoint_offsets.size(); ++i) {
    offsets += (i ? " | " : "") + format_int_list(c.npoint_offsets[i]);
  }
  return {
      {"model.alpha", num(c.alpha)},
      {"model.svf.family", c.svf_family},
      {"model.svf.param", num(c.svf_param)},
      {"experiment", std::string(experiment_name(c.experiment))},
      {"torus.kappa", num(c.torus_kappa)},
      {"torus.size", std::to_string(c.torus_size)},
      {"checkpoints.t_min", num(c.t_min)},
      {"checkpoints.t_max", num(c.t_max)},
      {"checkpoints.ratio", num(c.ratio)},
      {"replicas", std::to_string(c.replicas)},
      {"samples_per_replica", std::to_string(c.samples_per_replica)},
      {"seed", std::to_string(c.seed)},
      {"workers", std::to_string(c.workers)},
      {"output_dir", c.output_dir},
      {"walks.start", format_int_list(c.walks_start)},
      {"npoint.offsets", offsets},
      {"hitting.sites", format_int_list(c.hitting_sites)},
      {"volterra.step", num(c.volterra_step)},
      {"independence.bucket_width", num(c.independence_bucket_width)},
      {"verdict.density_low", num(c.verdict.density_low)},
      {"verdict.density_high", num(c.verdict.density_high)},
      {"verdict.sandwich_low", num(c.verdict.sandwich_low)},
      {"verdict.sandwich_high", num(c.verdict.sandwich_high)},
      {"verdict.hitting_low", num(c.verdict.hitting_low)},
      {"verdict.hitting_high", num(c.verdict.hitting_high)},
      {"verdict.npoint_low", num(c.verdict.npoint_low)},
      {"verdict.npoint_high", num(c.verdict.npoint_high)},
      {"verdict.plateau_drift", num(c.verdict.plateau_drift)},
      {"verdict.sigma", num(c.verdict.sigma)},
      {"verdict.allowance", num(c.verdict.allowance)},
  };
}

}  // namespace coalsim
