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

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace coalsim {

/// Set by the CLI's SIGINT handler; long loops stop picking up new work.
inline std::atomic<bool>& interrupt_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

/// Runs fn(i) for i in [0, count) on `workers` threads and returns the
/// results indexed by i. Work items are claimed dynamically, so results must
/// depend on i only; callers merge them in index order. Items skipped after
/// an interrupt are left value-initialized and flagged in `done`.
template <class R, class F>
std::vector<R> run_indexed(std::uint64_t count, unsigned workers, F&& fn,
                           std::vector<char>* done = nullptr) {
  std::vector<R> out(count);
  std::vector<char> finished(count, 0);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      if (interrupt_flag().load(std::memory_order_relaxed)) {
        return;
      }
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) {
        return;
      }
      try {
        out[i] = fn(i);
        finished[i] = 1;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
        next.store(count);
        return;
      }
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1 || count <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    const auto n = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));
    for (unsigned w = 0; w < n; ++w) {
      pool.emplace_back(body);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
  if (done != nullptr) {
    *done = std::move(finished);
  }
  return out;
}

}  // namespace coalsim
