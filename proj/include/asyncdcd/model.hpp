/**
 * Copyright 2026 The asyncdcd authors
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
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asyncdcd/loss.hpp"

namespace dcd {

/// Memory discipline used by workers when touching the shared primal vector.
///   serial: one thread, plain loads/stores.
///   lock:   per-coordinate locks over a row's support, taken in ascending
///           index order; every update sees a primal vector consistent with
///           the current duals.
///   atomic: unsynchronized (possibly stale) reads, indivisible scalar adds,
///           so no scatter update is ever lost.
///   wild:   tear-free word loads/stores with no further coordination;
///           concurrent scatter updates may overwrite each other.
enum class Variant { serial, lock, atomic, wild };

const char* variant_name(Variant v) noexcept;
Variant variant_from_name(const std::string& name);  // config_error on unknown

struct SolverConfig {
  Variant variant = Variant::serial;
  int threads = 1;           // serial requires exactly 1
  int max_epochs = 1000;
  double gap_tolerance = 1e-6;  // on duality gap / (n*C)
  std::uint64_t seed = 0;
  bool shrinking = false;
  bool normalize_rows = false;
  int trace_every = 1;  // epochs between trace/convergence checks; 0 = only
                        // the final epoch (fixed budget runs)

  void validate() const;  // config_error on violation
};

/// Training output: the dual vector and the primal vector as maintained in
/// shared memory during the run. For serial and lock these agree with
/// sum_i alpha_i x_i up to accumulation rounding; for wild they need not.
struct Model {
  std::vector<double> alpha;
  std::vector<double> w;
  LossSpec spec;
  Variant variant = Variant::serial;
  int epochs = 0;
  bool converged = false;
};

}  // namespace dcd
