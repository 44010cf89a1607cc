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
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asyncdcd/bench.hpp"
#include "asyncdcd/diagnostics.hpp"
#include "asyncdcd/error.hpp"
#include "asyncdcd/libsvm.hpp"
#include "asyncdcd/model_io.hpp"
#include "asyncdcd/solver.hpp"

namespace {

// exit codes: 0 ok, 2 bad flags/config, 3 parse or I/O error, 4 numeric
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumeric = 4;

struct TrainArgs {
  std::string data_path;
  std::string loss = "hinge";
  double C = 1.0;
  std::string variant = "serial";
  int threads = 1;
  int epochs = 1000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  bool shrink = false;
  bool normalize = false;
  std::string test_path;
  std::string trace_path;
  std::string model_out;
  bool no_alpha = false;
  int trace_every = 1;
};

struct PredictArgs {
  std::string model_path;
  std::string data_path;
  std::string use = "hat";
  std::string train_data;
  std::string out_path;
};

struct BenchArgs {
  std::string data_path;
  std::string loss = "hinge";
  double C = 1.0;
  int epochs = 100;
  std::vector<int> threads_list{1};
  std::vector<std::string> variants{"serial"};
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_train(const TrainArgs& args) {
  dcd::LossSpec spec{dcd::loss_from_name(args.loss), args.C};

  dcd::SolverConfig cfg;
  cfg.variant = dcd::variant_from_name(args.variant);
  cfg.threads = args.threads;
  cfg.max_epochs = args.epochs;
  cfg.gap_tolerance = args.tol;
  cfg.seed = args.seed;
  cfg.shrinking = args.shrink;
  cfg.normalize_rows = args.normalize;
  cfg.trace_every = args.trace_every;
  cfg.validate();

  const dcd::Dataset data =
      dcd::load_libsvm_file(args.data_path, dcd::LabelDomain::binary);
  dcd::Dataset test;
  const dcd::Dataset* test_ptr = nullptr;
  if (!args.test_path.empty()) {
    test = dcd::load_libsvm_file(args.test_path, dcd::LabelDomain::binary,
                                 data.d);
    test_ptr = &test;
  }

  const dcd::TrainResult res = dcd::train(data, spec, cfg, test_ptr);
  dcd::save_model(res.model, args.model_out, !args.no_alpha);

  if (!args.trace_path.empty()) {
    std::ofstream trace_out(args.trace_path, std::ios::binary);
    if (!trace_out)
      throw dcd::parse_error("cannot write trace file '" + args.trace_path +
                             "'");
    dcd::write_trace_csv(trace_out, res.trace);
  }

  const dcd::TraceRecord& last = res.trace.back();
  std::printf("variant=%s threads=%d epochs=%d converged=%s\n",
              dcd::variant_name(cfg.variant), cfg.threads, res.model.epochs,
              res.model.converged ? "yes" : "no");
  std::printf("primal_bar=%.10g primal_hat=%.10g dual=%.10g\n",
              last.primal_bar, last.primal_hat, last.dual_obj);
  std::printf("gap=%.10g normalized_gap=%.10g\n", last.gap,
              last.gap / (static_cast<double>(data.n) * spec.C));
  if (last.acc_hat)
    std::printf("test_accuracy_hat=%.6f test_accuracy_bar=%.6f\n",
                *last.acc_hat, *last.acc_bar);
  std::printf("update_seconds=%.6f\n", res.update_seconds);
  std::printf("model written to %s\n", args.model_out.c_str());
  return kExitOk;
}

int cmd_predict(const PredictArgs& args) {
  if (args.use != "hat" && args.use != "bar")
    throw dcd::config_error("--use must be 'hat' or 'bar'");

  const dcd::Model model = dcd::load_model(args.model_path);
  const std::int64_t d = static_cast<std::int64_t>(model.w.size());

  const dcd::RawRows raw =
      dcd::parse_libsvm(dcd::read_file_maybe_gz(args.data_path));
  if (raw.inferred_d > d)
    throw dcd::parse_error(
        "data dimension " + std::to_string(raw.inferred_d) +
        " exceeds the model dimension " + std::to_string(d));
  const dcd::Dataset data =
      dcd::fold_labels(raw, dcd::LabelDomain::binary, d);

  std::vector<double> w;
  if (args.use == "hat") {
    w = model.w;
  } else {
    if (model.alpha.empty())
      throw dcd::config_error(
          "--use bar requires the dual block, but the model file has none "
          "(retrain without --no-alpha)");
    if (args.train_data.empty())
      throw dcd::config_error(
          "--use bar recomputes the primal vector from the duals and needs "
          "--train-data pointing at the training file");
    const dcd::Dataset train =
        dcd::load_libsvm_file(args.train_data, dcd::LabelDomain::binary, d);
    if (static_cast<std::size_t>(train.n) != model.alpha.size())
      throw dcd::parse_error(
          "training file row count does not match the model's dual count");
    w = dcd::recompute_w(model.alpha, train);
  }

  const double acc = dcd::predict_accuracy(w, data);
  std::printf("accuracy=%.6f (%s, n=%lld)\n", acc, args.use.c_str(),
              static_cast<long long>(data.n));

  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out)
      throw dcd::parse_error("cannot write predictions to '" + args.out_path +
                             "'");
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
      // stored rows are folded; undo to get the raw score
      const double raw_score = data.labels[i] * data.rows[i].dot(w);
      out << (raw_score >= 0.0 ? 1 : -1) << '\n';
    }
  }
  return kExitOk;
}

int cmd_bench(const BenchArgs& args) {
  dcd::BenchOptions opts;
  opts.spec = dcd::LossSpec{dcd::loss_from_name(args.loss), args.C};
  opts.epochs = args.epochs;
  opts.threads_list = args.threads_list;
  for (const std::string& v : args.variants)
    opts.variants.push_back(dcd::variant_from_name(v));
  opts.seed = args.seed;
  for (const int t : opts.threads_list)
    if (t < 1) throw dcd::config_error("thread counts must be >= 1");

  const dcd::Dataset data =
      dcd::load_libsvm_file(args.data_path, dcd::LabelDomain::binary);
  const std::vector<dcd::BenchRow> rows = dcd::run_bench(data, opts);

  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out)
      throw dcd::parse_error("cannot write report to '" + args.out_path +
                             "'");
    dcd::write_bench_csv(out, rows);
  }
  std::fputs(dcd::bench_table(rows).c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual coordinate descent trainer for l2-regularized linear "
               "models, with lock / atomic / wild asynchronous variants"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train a model");
  train->add_option("--data", train_args.data_path)->required();
  train->add_option("--loss", train_args.loss)
      ->check(CLI::IsMember({"hinge", "sqhinge", "logistic"}));
  train->add_option("--C", train_args.C);
  train->add_option("--variant", train_args.variant)
      ->check(CLI::IsMember({"serial", "lock", "atomic", "wild"}));
  train->add_option("--threads", train_args.threads);
  train->add_option("--epochs", train_args.epochs);
  train->add_option("--tol", train_args.tol);
  train->add_option("--seed", train_args.seed);
  train->add_flag("--shrink", train_args.shrink);
  train->add_flag("--normalize", train_args.normalize);
  train->add_option("--test", train_args.test_path);
  train->add_option("--trace", train_args.trace_path);
  train->add_option("--model-out", train_args.model_out)->required();
  train->add_flag("--no-alpha", train_args.no_alpha,
                  "omit the dual block from the model file");
  train->add_option("--trace-every", train_args.trace_every,
                    "epochs between trace/convergence checks");

  PredictArgs predict_args;
  CLI::App* predict = app.add_subcommand("predict", "evaluate a model");
  predict->add_option("--model", predict_args.model_path)->required();
  predict->add_option("--data", predict_args.data_path)->required();
  predict->add_option("--use", predict_args.use)
      ->check(CLI::IsMember({"hat", "bar"}));
  predict->add_option("--train-data", predict_args.train_data,
                      "training file, required with --use bar");
  predict->add_option("--out", predict_args.out_path);

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "variant/thread speedup grid");
  bench->add_option("--data", bench_args.data_path)->required();
  bench->add_option("--loss", bench_args.loss)
      ->check(CLI::IsMember({"hinge", "sqhinge", "logistic"}));
  bench->add_option("--C", bench_args.C);
  bench->add_option("--epochs", bench_args.epochs);
  bench->add_option("--threads-list", bench_args.threads_list)
      ->delimiter(',');
  bench->add_option("--variants", bench_args.variants)->delimiter(',');
  bench->add_option("--seed", bench_args.seed);
  bench->add_option("--out", bench_args.out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (train->parsed()) return cmd_train(train_args);
    if (predict->parsed()) return cmd_predict(predict_args);
    if (bench->parsed()) return cmd_bench(bench_args);
    std::cerr << "no subcommand given\n";
    return kExitConfig;
  } catch (const dcd::config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dcd::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const dcd::numeric_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
