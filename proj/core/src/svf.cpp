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

#include "coalsim/svf.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coalsim {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

void validate_svf(const SvfSpec& svf) {
  std::visit(Overloaded{
                 [](const ConstantSvf& s) {
                   if (!(s.c > 0.0) || !std::isfinite(s.c)) {
                     throw std::invalid_argument("svf constant c must be positive");
                   }
                 },
                 [](const LogPowerSvf& s) {
                   if (!(s.a < 1.0) || !std::isfinite(s.a)) {
                     throw std::invalid_argument("svf logpower exponent a must be < 1");
                   }
                 },
                 [](const ExpLogPowerSvf& s) {
                   if (!(s.kappa > 0.0 && s.kappa < 1.0)) {
                     throw std::invalid_argument("svf explogpower kappa must lie in (0, 1)");
                   }
                 },
             },
             svf);
}

double svf_eval(const SvfSpec& svf, double x) {
  return std::visit(Overloaded{
                        [](const ConstantSvf& s) { return s.c; },
                        [x](const LogPowerSvf& s) { return std::pow(std::log(M_E + x), s.a); },
                        [x](const ExpLogPowerSvf& s) {
                          return std::exp(-std::pow(std::log(M_E + x), s.kappa));
                        },
                    },
                    svf);
}

std::complex<double> svf_eval(const SvfSpec& svf, std::complex<double> z) {
  using C = std::complex<double>;
  return std::visit(Overloaded{
                        [](const ConstantSvf& s) { return C(s.c, 0.0); },
                        [z](const LogPowerSvf& s) { return std::pow(std::log(M_E + z), s.a); },
                        [z](const ExpLogPowerSvf& s) {
                          return std::exp(-std::pow(std::log(M_E + z), s.kappa));
                        },
                    },
                    svf);
}

std::string_view svf_family(const SvfSpec& svf) {
  return std::visit(Overloaded{
                        [](const ConstantSvf&) { return std::string_view("constant"); },
                        [](const LogPowerSvf&) { return std::string_view("logpower"); },
                        [](const ExpLogPowerSvf&) { return std::string_view("explogpower"); },
                    },
                    svf);
}

double svf_parameter(const SvfSpec& svf) {
  return std::visit(Overloaded{
                        [](const ConstantSvf& s) { return s.c; },
                        [](const LogPowerSvf& s) { return s.a; },
                        [](const ExpLogPowerSvf& s) { return s.kappa; },
                    },
                    svf);
}

SvfSpec make_svf(std::string_view family, double parameter) {
  SvfSpec out;
  if (family == "constant") {
    out = ConstantSvf{parameter};
  } else if (family == "logpower") {
    out = LogPowerSvf{parameter};
  } else if (family == "explogpower") {
    out = ExpLogPowerSvf{parameter};
  } else {
    throw std::invalid_argument("unknown svf family '" + std::string(family) +
                                "' (expected constant, logpower or explogpower)");
  }
  validate_svf(out);
  return out;
}

std::string describe(const SvfSpec& svf) {
  std::ostringstream os;
  os << svf_family(svf) << "(" << svf_parameter(svf) << ")";
  return os.str();
}

}  // namespace coalsim
