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
#include <iosfwd>
#include <string>
#include <vector>

#include "asyncdcd/dataset.hpp"
#include "asyncdcd/solver.hpp"

namespace dcd {

/// One benchmark run. Seconds cover the update loop only (initialization and
/// diagnostics excluded); speedup is serial reference seconds over this run's
/// seconds at the identical epoch budget, shrinking off for everyone.
struct BenchRow {
  Variant variant = Variant::serial;
  int threads = 1;
  double seconds = 0.0;
  int epochs = 0;
  double final_gap = 0.0;
  double final_accuracy = 0.0;  // on the benchmark dataset, maintained vector
  double speedup = 0.0;
  double eps_rel = 0.0;  // recomputed-vs-maintained primal discrepancy
  double kkt_hat = 0.0;
  double kkt_bar = 0.0;
};

struct BenchOptions {
  LossSpec spec;
  int epochs = 100;
  std::vector<int> threads_list;
  std::vector<Variant> variants;
  std::uint64_t seed = 0;
};

/// Runs the (variant x threads) grid for a fixed epoch budget. The serial
/// reference (one thread) is always run once; serial grid rows reuse it, so
/// their speedup is exactly 1.0 and the row count stays
/// |variants| * |threads_list|.
std::vector<BenchRow> run_bench(const Dataset& data, const BenchOptions& opts,
                                const TrainHooks* hooks = nullptr);

/// Header: variant,threads,seconds,epochs,gap,accuracy,speedup,eps_rel,
/// kkt_hat,kkt_bar.
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
std::vector<BenchRow> read_bench_csv(std::istream& in);

/// Threads-by-variant table with `12.34s / 1.90x` cells.
std::string bench_table(const std::vector<BenchRow>& rows);

}  // namespace dcd
