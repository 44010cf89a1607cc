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
#include "asyncdcd/solver.hpp"

#include <atomic>
#include <barrier>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "asyncdcd/error.hpp"
#include "asyncdcd/rng.hpp"

namespace dcd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double steady_now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

/// One test-and-set slot per feature coordinate. Spins briefly, then yields
/// so a preempted lock holder can run.
class CoordLock {
 public:
  void lock() noexcept {
    while (flag_.test_and_set(std::memory_order_acquire)) {
      int spins = 0;
      while (flag_.test(std::memory_order_relaxed)) {
        if (++spins == 1024) {
          std::this_thread::yield();
          spins = 0;
        }
      }
    }
  }
  void unlock() noexcept { flag_.clear(std::memory_order_release); }

 private:
  std::atomic_flag flag_;
};

// --- shared-vector access disciplines -------------------------------------
//
// All three produce the identical floating-point operation sequence as plain
// code when only one thread runs, which is what makes single-thread runs of
// every variant bit-identical to serial.

struct PlainAccess {
  static double load(double* w, std::int32_t j) noexcept { return w[j]; }
  static void add(double* w, std::int32_t j, double v) noexcept { w[j] += v; }
};

struct AtomicAccess {
  static double load(double* w, std::int32_t j) noexcept {
    return std::atomic_ref<double>(w[j]).load(std::memory_order_relaxed);
  }
  static void add(double* w, std::int32_t j, double v) noexcept {
    // indivisible read-modify-write: no concurrent addition is lost
    std::atomic_ref<double>(w[j]).fetch_add(v, std::memory_order_relaxed);
  }
};

struct WildAccess {
  static double load(double* w, std::int32_t j) noexcept {
    return std::atomic_ref<double>(w[j]).load(std::memory_order_relaxed);
  }
  static void add(double* w, std::int32_t j, double v) noexcept {
    // separate load and store: a concurrent add landing in between is
    // overwritten (lost update), exactly the discipline under study; relaxed
    // word-sized accesses keep each value tear-free
    std::atomic_ref<double> slot(w[j]);
    slot.store(slot.load(std::memory_order_relaxed) + v,
               std::memory_order_relaxed);
  }
};

template <bool kLocked>
struct RowGuard {
  RowGuard(std::vector<CoordLock>&, const SparseExample&) noexcept {}
};

/// Acquires every coordinate lock in a row's support in ascending index
/// order (a fixed global order, so no deadlock) and releases on destruction.
template <>
struct RowGuard<true> {
  RowGuard(std::vector<CoordLock>& locks, const SparseExample& row) noexcept
      : locks_(locks), row_(row) {
    for (std::int32_t j : row_.indices)
      locks_[static_cast<std::size_t>(j)].lock();
  }
  ~RowGuard() {
    for (std::int32_t j : row_.indices)
      locks_[static_cast<std::size_t>(j)].unlock();
  }
  std::vector<CoordLock>& locks_;
  const SparseExample& row_;
};

/// Per-worker state, cache-line padded since workers update violation
/// bookkeeping concurrently.
struct alignas(64) ThreadCtx {
  int id = 0;
  std::vector<std::int32_t> active;   // still-active indices of my block
  std::vector<std::int32_t> scratch;  // survivors for the next epoch
  std::size_t block_size = 0;
  double theta = kInf;          // previous epoch's max violation
  double max_violation = 0.0;   // accumulated during the current epoch
};

struct Engine {
  const Dataset& data;
  const LossSpec& spec;
  const SolverConfig& cfg;
  const Dataset* test;
  std::function<double()> now;
  std::function<void(const EpochView&)> on_epoch;

  std::vector<double> alpha;
  std::vector<double> w;
  std::vector<CoordLock> locks;
  std::vector<ThreadCtx> threads;

  bool shrink_on = false;
  double shrink_diag = 0.0;  // d(conjugate)'' contribution to the gradient
  double upper = kInf;       // finite only for hinge

  // epoch control, written only inside the barrier completion
  int epoch = 0;
  bool stop = false;
  bool converged = false;
  bool confirming = false;  // full pass after reactivation is in flight
  double sweep_begin = 0.0;
  double update_seconds = 0.0;
  double max_shrunk_fraction = 0.0;
  std::vector<TraceRecord> trace;

  std::mutex error_mu;
  std::exception_ptr error;

  Engine(const Dataset& d, const LossSpec& s, const SolverConfig& c,
         const Dataset* t, const TrainHooks* hooks)
      : data(d), spec(s), cfg(c), test(t) {
    now = hooks && hooks->now ? hooks->now : std::function<double()>(steady_now);
    if (hooks && hooks->on_epoch) on_epoch = hooks->on_epoch;

    alpha.assign(static_cast<std::size_t>(data.n), 0.0);
    w.assign(static_cast<std::size_t>(data.d), 0.0);
    if (cfg.variant == Variant::lock)
      locks = std::vector<CoordLock>(static_cast<std::size_t>(data.d));

    // shrinking needs a bounded-below dual interval; logistic has none usable
    shrink_on = cfg.shrinking && spec.kind != LossKind::logistic;
    shrink_diag =
        spec.kind == LossKind::squared_hinge ? 1.0 / (2.0 * spec.C) : 0.0;
    upper = spec.kind == LossKind::hinge ? spec.C : kInf;

    IndexPartition part =
        partition_indices(data.n, cfg.threads, cfg.seed);
    threads.resize(static_cast<std::size_t>(cfg.threads));
    for (int t_id = 0; t_id < cfg.threads; ++t_id) {
      ThreadCtx& ts = threads[static_cast<std::size_t>(t_id)];
      ts.id = t_id;
      ts.active = std::move(part.blocks[static_cast<std::size_t>(t_id)]);
      ts.block_size = ts.active.size();
    }
  }

  bool anything_shrunk() const {
    for (const ThreadCtx& ts : threads)
      if (ts.active.size() != ts.block_size) return true;
    return false;
  }

  void reactivate_all() {
    // rebuild each block in partition order; the next sweep permutes anyway
    IndexPartition part = partition_indices(data.n, cfg.threads, cfg.seed);
    for (std::size_t t_id = 0; t_id < threads.size(); ++t_id) {
      threads[t_id].active = std::move(part.blocks[t_id]);
      threads[t_id].theta = kInf;
      threads[t_id].max_violation = 0.0;
    }
  }

  TraceRecord make_trace(int epochs_done) {
    TraceRecord rec;
    rec.epoch = epochs_done;
    rec.wall_seconds = update_seconds;
    const std::vector<double> wbar = recompute_w(alpha, data);
    rec.primal_bar = primal_objective(wbar, data, spec);
    rec.primal_hat = primal_objective(w, data, spec);
    double conj = 0.0;
    for (double a : alpha) conj += conjugate_loss(spec, a);
    double quad = 0.0;
    for (double x : wbar) quad += x * x;
    rec.dual_obj = 0.5 * quad + conj;
    rec.gap = rec.primal_bar + rec.dual_obj;
    if (test != nullptr) {
      rec.acc_hat = predict_accuracy(w, *test);
      rec.acc_bar = predict_accuracy(wbar, *test);
    }
    return rec;
  }

  /// Runs at every epoch barrier on exactly one thread; everything it writes
  /// is visible to all workers when the barrier releases them.
  void epoch_complete() noexcept {
    try {
      update_seconds += now() - sweep_begin;
      {
        const std::lock_guard<std::mutex> g(error_mu);
        if (error) {
          stop = true;
          return;
        }
      }
      const int done = epoch + 1;
      if (on_epoch)
        on_epoch(EpochView{done, update_seconds, std::span(alpha),
                           std::span(w)});

      if (shrink_on) {
        std::size_t active_total = 0;
        for (ThreadCtx& ts : threads) {
          ts.theta = ts.max_violation;
          ts.max_violation = 0.0;
          active_total += ts.active.size();
        }
        const double shrunk =
            1.0 - static_cast<double>(active_total) /
                      static_cast<double>(data.n);
        if (shrunk > max_shrunk_fraction) max_shrunk_fraction = shrunk;
      }

      const bool is_last = done >= cfg.max_epochs;
      const bool scheduled =
          cfg.trace_every > 0 && done % cfg.trace_every == 0;
      const bool was_confirming = confirming;
      confirming = false;

      if (scheduled || is_last || was_confirming) {
        trace.push_back(make_trace(done));
        const double gap_norm =
            trace.back().gap /
            (static_cast<double>(data.n) * spec.C);
        if (gap_norm <= cfg.gap_tolerance) {
          if (shrink_on && !was_confirming && anything_shrunk()) {
            // tentative: reactivate everything and confirm with a full pass
            reactivate_all();
            confirming = true;
          } else {
            converged = true;
            stop = true;
          }
        }
      }
      if (is_last) stop = true;
      if (!stop) {
        ++epoch;
        sweep_begin = now();
      }
    } catch (...) {
      {
        const std::lock_guard<std::mutex> g(error_mu);
        if (!error) error = std::current_exception();
      }
      stop = true;
    }
  }

  void record_worker_error() noexcept {
    const std::lock_guard<std::mutex> g(error_mu);
    if (!error) error = std::current_exception();
  }

  template <class Access, bool kLocked>
  void sweep(ThreadCtx& ts, int epoch_idx) {
    SplitMix64 gen =
        derive_stream(cfg.seed, static_cast<std::uint64_t>(ts.id),
                      static_cast<std::uint64_t>(epoch_idx));
    fisher_yates(std::span<std::int32_t>(ts.active), gen);

    double* wp = w.data();
    const bool shrinking = shrink_on;
    if (shrinking) ts.scratch.clear();

    for (const std::int32_t i : ts.active) {
      const SparseExample& row = data.rows[static_cast<std::size_t>(i)];
      const RowGuard<kLocked> guard(locks, row);

      double wx = 0.0;
      for (std::size_t k = 0; k < row.nnz(); ++k)
        wx += Access::load(wp, row.indices[k]) * row.values[k];

      const double a = alpha[static_cast<std::size_t>(i)];
      if (shrinking) {
        const double grad = wx - 1.0 + shrink_diag * a;
        if (a == 0.0 && grad >= ts.theta) continue;       // pinned low
        if (a == upper && grad <= -ts.theta) continue;    // pinned high
        double violation;
        if (a == 0.0)
          violation = std::max(0.0, -grad);
        else if (a == upper)
          violation = std::max(0.0, grad);
        else
          violation = std::abs(grad);
        if (violation > ts.max_violation) ts.max_violation = violation;
        ts.scratch.push_back(i);
      }

      const double delta = solve_subproblem(spec, wx, row.norm_sq, a);
      if (delta != 0.0) {
        alpha[static_cast<std::size_t>(i)] = a + delta;
        for (std::size_t k = 0; k < row.nnz(); ++k)
          Access::add(wp, row.indices[k], delta * row.values[k]);
      }
    }

    if (shrinking) ts.active.swap(ts.scratch);
  }

  void sweep_dispatch(ThreadCtx& ts, int epoch_idx) {
    switch (cfg.variant) {
      case Variant::serial: sweep<PlainAccess, false>(ts, epoch_idx); break;
      case Variant::lock: sweep<PlainAccess, true>(ts, epoch_idx); break;
      case Variant::atomic: sweep<AtomicAccess, false>(ts, epoch_idx); break;
      case Variant::wild: sweep<WildAccess, false>(ts, epoch_idx); break;
    }
  }
};

}  // namespace

void SolverConfig::validate() const {
  if (threads < 1) throw config_error("thread count must be at least 1");
  if (variant == Variant::serial && threads != 1)
    throw config_error("the serial variant requires exactly one thread");
  if (max_epochs < 1) throw config_error("epoch budget must be at least 1");
  if (!(gap_tolerance > 0.0))
    throw config_error("gap tolerance must be positive");
  if (trace_every < 0) throw config_error("trace cadence must be >= 0");
}

const char* variant_name(Variant v) noexcept {
  switch (v) {
    case Variant::serial: return "serial";
    case Variant::lock: return "lock";
    case Variant::atomic: return "atomic";
    case Variant::wild: return "wild";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  if (name == "serial") return Variant::serial;
  if (name == "lock") return Variant::lock;
  if (name == "atomic") return Variant::atomic;
  if (name == "wild") return Variant::wild;
  throw config_error("unknown variant '" + name + "'");
}

TrainResult train(const Dataset& data, const LossSpec& spec,
                  const SolverConfig& config, const Dataset* test,
                  const TrainHooks* hooks) {
  config.validate();
  if (data.empty()) throw config_error("cannot train on an empty dataset");
  if (!(spec.C > 0.0)) throw config_error("penalty C must be positive");

  const Dataset* train_data = &data;
  Dataset normalized;
  if (config.normalize_rows) {
    normalized = normalize_rows(data);
    train_data = &normalized;
  }

  Engine eng(*train_data, spec, config, test, hooks);

  std::barrier barrier(config.threads, [&eng]() noexcept {
    eng.epoch_complete();
  });

  auto worker = [&eng, &barrier](int t_id) {
    ThreadCtx& ts = eng.threads[static_cast<std::size_t>(t_id)];
    for (;;) {
      try {
        eng.sweep_dispatch(ts, eng.epoch);
      } catch (...) {
        eng.record_worker_error();
      }
      barrier.arrive_and_wait();
      if (eng.stop) return;
    }
  };

  eng.sweep_begin = eng.now();
  if (config.threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(config.threads - 1));
    for (int t_id = 1; t_id < config.threads; ++t_id)
      pool.emplace_back(worker, t_id);
    worker(0);
  }

  if (eng.error) std::rethrow_exception(eng.error);

  TrainResult result;
  result.model.alpha = std::move(eng.alpha);
  result.model.w = std::move(eng.w);
  result.model.spec = spec;
  result.model.variant = config.variant;
  result.model.epochs = eng.epoch + 1;
  result.model.converged = eng.converged;
  result.trace = std::move(eng.trace);
  result.update_seconds = eng.update_seconds;
  result.max_shrunk_fraction = eng.max_shrunk_fraction;
  return result;
}

}  // namespace dcd
