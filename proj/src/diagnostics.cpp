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
#include "asyncdcd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "asyncdcd/error.hpp"

namespace dcd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Worst-case violation of -w.x_i in d(conjugate)(alpha_i) for one row.
double row_kkt_residual(const LossSpec& spec, double wx, double alpha) {
  const double C = spec.C;
  switch (spec.kind) {
    case LossKind::hinge:
      if (alpha == 0.0) return std::max(0.0, 1.0 - wx);
      if (alpha == C) return std::max(0.0, wx - 1.0);
      return std::abs(wx - 1.0);
    case LossKind::squared_hinge:
      if (alpha == 0.0) return std::max(0.0, 1.0 - wx);
      return std::abs(wx - 1.0 + alpha / (2.0 * C));
    case LossKind::logistic:
      // interior stationarity; the boundary is never optimal
      if (alpha <= 0.0 || alpha >= C) return kInf;
      return std::abs(wx + std::log(alpha / (C - alpha)));
  }
  return 0.0;
}

}  // namespace

double primal_objective(std::span<const double> w, const Dataset& data,
                        const LossSpec& spec) {
  double obj = 0.5 * [&] {
    double s = 0.0;
    for (double x : w) s += x * x;
    return s;
  }();
  for (const SparseExample& row : data.rows)
    obj += primal_loss(spec, row.dot(w));
  return obj;
}

double dual_objective(std::span<const double> alpha, const Dataset& data,
                      const LossSpec& spec) {
  double conj = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    conj += conjugate_loss(spec, alpha[i]);
    if (conj == kInf) return kInf;
  }
  const std::vector<double> w = recompute_w(alpha, data);
  double quad = 0.0;
  for (double x : w) quad += x * x;
  return 0.5 * quad + conj;
}

std::vector<double> recompute_w(std::span<const double> alpha,
                                const Dataset& data) {
  std::vector<double> w(static_cast<std::size_t>(data.d), 0.0);
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const double a = alpha[i];
    if (a == 0.0) continue;
    const SparseExample& row = data.rows[i];
    for (std::size_t k = 0; k < row.nnz(); ++k)
      w[static_cast<std::size_t>(row.indices[k])] += a * row.values[k];
  }
  return w;
}

std::vector<double> fixed_point_operator(std::span<const double> alpha,
                                         const Dataset& data,
                                         const LossSpec& spec) {
  const std::vector<double> w = recompute_w(alpha, data);
  std::vector<double> t(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const SparseExample& row = data.rows[i];
    t[i] = prox_point(spec, alpha[i] - row.dot(w) / row.norm_sq, row.norm_sq);
  }
  return t;
}

double kkt_residual(std::span<const double> w, std::span<const double> alpha,
                    const Dataset& data, const LossSpec& spec) {
  double worst = 0.0;
  for (std::size_t i = 0; i < data.rows.size(); ++i)
    worst = std::max(worst,
                     row_kkt_residual(spec, data.rows[i].dot(w), alpha[i]));
  return worst;
}

BackwardErrorReport backward_error(const Model& model, const Dataset& data,
                                   const LossSpec& spec) {
  BackwardErrorReport rep;
  rep.epsilon = recompute_w(model.alpha, data);
  for (std::size_t j = 0; j < rep.epsilon.size(); ++j)
    rep.epsilon[j] -= model.w[j];
  rep.eps_norm = norm2(rep.epsilon);
  rep.eps_rel = rep.eps_norm / (1.0 + norm2(model.w));
  rep.kkt_residual_hat = kkt_residual(model.w, model.alpha, data, spec);
  const std::vector<double> wbar = recompute_w(model.alpha, data);
  rep.kkt_residual_bar = kkt_residual(wbar, model.alpha, data, spec);
  return rep;
}

double predict_accuracy(std::span<const double> w, const Dataset& test) {
  if (test.n == 0) return 0.0;
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < test.rows.size(); ++i) {
    // rows are folded, so w . raw_x = label * (w . x) for +1/-1 labels
    const double raw_score = test.labels[i] * test.rows[i].dot(w);
    const double pred = raw_score >= 0.0 ? 1.0 : -1.0;  // exact zero -> +1
    if (pred == test.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.n);
}

double bound_M(const Dataset& data) {
  if (data.empty()) throw config_error("bound_M requires a nonempty dataset");
  // squared norms of the columns of the row-normalized matrix
  std::vector<double> col_norm_sq(static_cast<std::size_t>(data.d), 0.0);
  for (const SparseExample& row : data.rows) {
    const double inv = 1.0 / row.norm_sq;
    for (std::size_t k = 0; k < row.nnz(); ++k) {
      const double v = row.values[k] * inv;
      col_norm_sq[static_cast<std::size_t>(row.indices[k])] += v * v;
    }
  }
  double bound = 0.0;
  for (const SparseExample& row : data.rows) {
    double s = 0.0;
    for (std::size_t k = 0; k < row.nnz(); ++k)
      s += std::abs(row.values[k]) *
           std::sqrt(col_norm_sq[static_cast<std::size_t>(row.indices[k])]);
    bound = std::max(bound, s);
  }
  return bound;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << "epoch,seconds,primal_bar,primal_hat,dual,gap,acc_hat,acc_bar\n";
  char buf[512];
  for (const TraceRecord& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g", r.epoch,
                  r.wall_seconds, r.primal_bar, r.primal_hat, r.dual_obj,
                  r.gap);
    out << buf;
    if (r.acc_hat) {
      std::snprintf(buf, sizeof buf, ",%.17g", *r.acc_hat);
      out << buf;
    } else {
      out << ',';
    }
    if (r.acc_bar) {
      std::snprintf(buf, sizeof buf, ",%.17g", *r.acc_bar);
      out << buf;
    } else {
      out << ',';
    }
    out << '\n';
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw parse_error("empty trace CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "epoch,seconds,primal_bar,primal_hat,dual,gap,acc_hat,acc_bar")
    throw parse_error("unexpected trace CSV header '" + line + "'");

  std::vector<TraceRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");  // trailing empty cell
    if (cells.size() != 8)
      throw parse_error("trace CSV row has " + std::to_string(cells.size()) +
                            " cells, expected 8",
                        line_no);
    TraceRecord r;
    try {
      r.epoch = std::stoi(cells[0]);
      r.wall_seconds = std::stod(cells[1]);
      r.primal_bar = std::stod(cells[2]);
      r.primal_hat = std::stod(cells[3]);
      r.dual_obj = std::stod(cells[4]);
      r.gap = std::stod(cells[5]);
      if (!cells[6].empty()) r.acc_hat = std::stod(cells[6]);
      if (!cells[7].empty()) r.acc_bar = std::stod(cells[7]);
    } catch (const std::exception&) {
      throw parse_error("non-numeric trace CSV cell", line_no);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace dcd
