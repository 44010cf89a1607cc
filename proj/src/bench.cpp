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
#include "asyncdcd/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "asyncdcd/diagnostics.hpp"
#include "asyncdcd/error.hpp"

namespace dcd {

namespace {

BenchRow run_one(const Dataset& data, const BenchOptions& opts,
                 Variant variant, int threads, const TrainHooks* hooks) {
  SolverConfig cfg;
  cfg.variant = variant;
  cfg.threads = threads;
  cfg.max_epochs = opts.epochs;
  cfg.gap_tolerance = 1e-300;  // fixed epoch budget: never stop early
  cfg.seed = opts.seed;
  cfg.shrinking = false;  // off for every run so timings are comparable
  cfg.trace_every = 0;    // diagnostics only once, after the last epoch
  const TrainResult res = train(data, opts.spec, cfg, nullptr, hooks);

  BenchRow row;
  row.variant = variant;
  row.threads = threads;
  row.seconds = res.update_seconds;
  row.epochs = res.model.epochs;
  row.final_gap = res.trace.back().gap;
  row.final_accuracy = predict_accuracy(res.model.w, data);
  const BackwardErrorReport rep = backward_error(res.model, data, opts.spec);
  row.eps_rel = rep.eps_rel;
  row.kkt_hat = rep.kkt_residual_hat;
  row.kkt_bar = rep.kkt_residual_bar;
  return row;
}

}  // namespace

std::vector<BenchRow> run_bench(const Dataset& data, const BenchOptions& opts,
                                const TrainHooks* hooks) {
  if (opts.threads_list.empty() || opts.variants.empty())
    throw config_error("benchmark grid is empty");

  // serial single-thread reference, run exactly once
  const BenchRow serial_ref =
      run_one(data, opts, Variant::serial, 1, hooks);

  std::vector<BenchRow> rows;
  rows.reserve(opts.variants.size() * opts.threads_list.size());
  for (const Variant variant : opts.variants) {
    for (const int threads : opts.threads_list) {
      BenchRow row;
      if (variant == Variant::serial) {
        // serial ignores the thread grid; reuse the reference run so its
        // speedup is exactly 1
        row = serial_ref;
        row.speedup = 1.0;
      } else {
        row = run_one(data, opts, variant, threads, hooks);
        row.speedup = serial_ref.seconds / row.seconds;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "variant,threads,seconds,epochs,gap,accuracy,speedup,eps_rel,"
         "kkt_hat,kkt_bar\n";
  char buf[512];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "%s,%d,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  variant_name(r.variant), r.threads, r.seconds, r.epochs,
                  r.final_gap, r.final_accuracy, r.speedup, r.eps_rel,
                  r.kkt_hat, r.kkt_bar);
    out << buf;
  }
}

std::vector<BenchRow> read_bench_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw parse_error("empty benchmark CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line !=
      "variant,threads,seconds,epochs,gap,accuracy,speedup,eps_rel,"
      "kkt_hat,kkt_bar")
    throw parse_error("unexpected benchmark CSV header");

  std::vector<BenchRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10)
      throw parse_error("benchmark CSV row has wrong cell count", line_no);
    try {
      BenchRow r;
      r.variant = variant_from_name(cells[0]);
      r.threads = std::stoi(cells[1]);
      r.seconds = std::stod(cells[2]);
      r.epochs = std::stoi(cells[3]);
      r.final_gap = std::stod(cells[4]);
      r.final_accuracy = std::stod(cells[5]);
      r.speedup = std::stod(cells[6]);
      r.eps_rel = std::stod(cells[7]);
      r.kkt_hat = std::stod(cells[8]);
      r.kkt_bar = std::stod(cells[9]);
      rows.push_back(r);
    } catch (const config_error&) {
      throw parse_error("bad variant in benchmark CSV", line_no);
    } catch (const std::exception&) {
      throw parse_error("non-numeric benchmark CSV cell", line_no);
    }
  }
  return rows;
}

std::string bench_table(const std::vector<BenchRow>& rows) {
  // collect the grid axes in first-appearance order
  std::vector<Variant> variants;
  std::vector<int> threads;
  for (const BenchRow& r : rows) {
    if (std::find(variants.begin(), variants.end(), r.variant) ==
        variants.end())
      variants.push_back(r.variant);
    if (std::find(threads.begin(), threads.end(), r.threads) == threads.end())
      threads.push_back(r.threads);
  }

  std::ostringstream out;
  char buf[64];
  out << "threads";
  for (const Variant v : variants) {
    std::snprintf(buf, sizeof buf, "  %-18s", variant_name(v));
    out << buf;
  }
  out << '\n';
  for (const int t : threads) {
    std::snprintf(buf, sizeof buf, "%-7d", t);
    out << buf;
    for (const Variant v : variants) {
      const auto it = std::find_if(
          rows.begin(), rows.end(), [&](const BenchRow& r) {
            return r.variant == v && (r.threads == t || v == Variant::serial);
          });
      if (it == rows.end()) {
        out << "  -                 ";
        continue;
      }
      std::snprintf(buf, sizeof buf, "%.2fs / %.2fx", it->seconds,
                    it->speedup);
      char cell[64];
      std::snprintf(cell, sizeof cell, "  %-18s", buf);
      out << cell;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dcd
