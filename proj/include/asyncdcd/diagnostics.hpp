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

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "asyncdcd/dataset.hpp"
#include "asyncdcd/loss.hpp"
#include "asyncdcd/model.hpp"

namespace dcd {

/// 0.5*||w||^2 + sum_i loss(w . x_i).
double primal_objective(std::span<const double> w, const Dataset& data,
                        const LossSpec& spec);

/// 0.5*||sum_i alpha_i x_i||^2 + sum_i conjugate(alpha_i). The weighted sum is
/// always recomputed from alpha, never taken from a maintained primal vector.
/// +inf when any alpha_i is infeasible.
double dual_objective(std::span<const double> alpha, const Dataset& data,
                      const LossSpec& spec);

/// sum_i alpha_i x_i accumulated in ascending row order, so the result (and
/// hence epsilon below) is reproducible for equal alpha.
std::vector<double> recompute_w(std::span<const double> alpha,
                                const Dataset& data);

/// Componentwise exact single-coordinate minimizer of the dual at alpha.
/// Fixed points of this operator are exactly the dual optima, which makes it
/// an implementation-independent convergence certificate.
std::vector<double> fixed_point_operator(std::span<const double> alpha,
                                         const Dataset& data,
                                         const LossSpec& spec);

/// Discrepancy between the recomputed and the maintained primal vector, plus
/// the worst per-coordinate violation of the stationarity condition
/// -w.x_i in d(conjugate)(alpha_i) under each of the two vectors. For races
/// that lost scatter updates, the maintained vector is the one that stays
/// near-stationary.
struct BackwardErrorReport {
  std::vector<double> epsilon;  // recomputed minus maintained
  double eps_norm = 0.0;
  double eps_rel = 0.0;  // ||eps|| / (1 + ||w_maintained||)
  double kkt_residual_hat = 0.0;  // under the maintained vector
  double kkt_residual_bar = 0.0;  // under the recomputed vector
};

BackwardErrorReport backward_error(const Model& model, const Dataset& data,
                                   const LossSpec& spec);

/// Max over rows of the stationarity violation under the given primal vector.
double kkt_residual(std::span<const double> w, std::span<const double> alpha,
                    const Dataset& data, const LossSpec& spec);

/// Fraction of rows whose label matches sign(w . raw_x); an exact zero score
/// counts as +1.
double predict_accuracy(std::span<const double> w, const Dataset& test);

/// Triangle-inequality upper bound on the data-coupling constant
///   max_i max_{S subset of columns} || sum_{t in S} nbar_col_t * X_it ||,
/// where nbar_col_t is the t-th column of the row-normalized matrix with rows
/// x_i / ||x_i||^2. The exact max over subsets is combinatorial; the bound
/// sums |X_it| * ||nbar_col_t|| over the row support instead.
double bound_M(const Dataset& data);

/// One row of the convergence trace emitted at epoch barriers.
struct TraceRecord {
  int epoch = 0;
  double wall_seconds = 0.0;  // cumulative update-loop time, excludes
                              // initialization and diagnostics
  double primal_bar = 0.0;    // P of the recomputed primal vector
  double primal_hat = 0.0;    // P of the maintained primal vector
  double dual_obj = 0.0;
  double gap = 0.0;           // primal_bar + dual_obj
  std::optional<double> acc_hat;
  std::optional<double> acc_bar;
};

/// CSV header: epoch,seconds,primal_bar,primal_hat,dual,gap,acc_hat,acc_bar.
/// Optional accuracies serialize as empty cells.
void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);
std::vector<TraceRecord> read_trace_csv(std::istream& in);

}  // namespace dcd
