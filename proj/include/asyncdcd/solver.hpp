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

#include <functional>
#include <span>

#include "asyncdcd/dataset.hpp"
#include "asyncdcd/diagnostics.hpp"
#include "asyncdcd/loss.hpp"
#include "asyncdcd/model.hpp"

namespace dcd {

/// Snapshot handed to the epoch callback at a barrier. The spans alias solver
/// state and are valid only for the duration of the call.
struct EpochView {
  int epoch = 0;
  double update_seconds = 0.0;
  std::span<const double> alpha;
  std::span<const double> w;
};

struct TrainHooks {
  /// Clock used for update-loop timing; defaults to a steady monotonic clock.
  /// Injected by tests to pin down exactly which phases are timed.
  std::function<double()> now;
  /// Invoked at every epoch barrier, after the sweep and before diagnostics.
  std::function<void(const EpochView&)> on_epoch;
};

struct TrainResult {
  Model model;
  std::vector<TraceRecord> trace;
  /// Wall time spent inside epoch sweeps only: initialization, trace
  /// diagnostics, and convergence checks are excluded, so benchmark speedups
  /// compare just the coordinate-update loops.
  double update_seconds = 0.0;
  /// Largest fraction of coordinates simultaneously shrunk out of the active
  /// sets at any epoch boundary (0 when shrinking is off).
  double max_shrunk_fraction = 0.0;
};

/// Runs dual coordinate descent from alpha = 0, w = 0 until the normalized
/// duality gap (gap / (n*C)) drops to config.gap_tolerance or max_epochs is
/// reached. Each epoch every thread sweeps its own index block in a fresh
/// random permutation; epochs end at a barrier where the trace is recorded.
/// The gap is always measured on the primal vector recomputed from alpha.
/// When test is non-null, trace rows carry prediction accuracy under both the
/// maintained and the recomputed vector. Deterministic (bit-identical reruns)
/// for a single thread; parallel variants are not required to be.
TrainResult train(const Dataset& data, const LossSpec& spec,
                  const SolverConfig& config, const Dataset* test = nullptr,
                  const TrainHooks* hooks = nullptr);

}  // namespace dcd
