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


// Acceptance driver: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <algorithm>
#include <iostream>
#include <thread>

#include "coalsim/verify.hpp"

int main() {
  coalsim::VerifyOptions options;
  options.workers = std::max(1u, std::thread::hardware_concurrency());
  bool ok = true;
  coalsim::verify_suite(options, [&ok](const coalsim::CriterionResult& r) {
    ok = ok && r.pass;
    std::cout << coalsim::verdict_line(r) << std::endl;
  });
  std::cout << (ok ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
  return ok ? 0 : 1;
}
