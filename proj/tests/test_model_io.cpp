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
#include <doctest.h>

#include <cmath>

#include "asyncdcd/bench.hpp"
#include "asyncdcd/error.hpp"
#include "asyncdcd/libsvm.hpp"
#include "asyncdcd/model_io.hpp"
#include "asyncdcd/rng.hpp"
#include "asyncdcd/solver.hpp"

#include <sstream>

using namespace dcd;

namespace {

Model awkward_model() {
  Model m;
  m.spec = LossSpec{LossKind::squared_hinge, 0.099999999999999992};
  m.variant = Variant::atomic;
  SplitMix64 gen(8);
  for (int j = 0; j < 17; ++j)
    m.w.push_back(
        std::ldexp(static_cast<double>(gen.next() >> 11) - 4.5e15, -60));
  for (int i = 0; i < 5; ++i)
    m.alpha.push_back(static_cast<double>(gen.next() >> 11) * 0x1.0p-53);
  return m;
}

}  // namespace

TEST_CASE("model round-trip is bit-exact and byte-stable") {
  const Model m = awkward_model();
  const std::string once = serialize_model(m);
  const Model back = parse_model(once);
  CHECK(back.spec.kind == m.spec.kind);
  CHECK(back.spec.C == m.spec.C);
  CHECK(back.variant == m.variant);
  REQUIRE(back.w.size() == m.w.size());
  for (std::size_t j = 0; j < m.w.size(); ++j) CHECK(back.w[j] == m.w[j]);
  REQUIRE(back.alpha.size() == m.alpha.size());
  for (std::size_t i = 0; i < m.alpha.size(); ++i)
    CHECK(back.alpha[i] == m.alpha[i]);
  // save(load(save(m))) reproduces the bytes
  CHECK(serialize_model(back) == once);
}

TEST_CASE("sparse layout kicks in above half zeros") {
  Model m;
  m.spec = LossSpec{LossKind::hinge, 1.0};
  m.w = {0.0, 0.0, 3.5, 0.0, 0.0};
  const std::string text = serialize_model(m, /*include_alpha=*/false);
  CHECK(text.find("w sparse 1") != std::string::npos);
  const Model back = parse_model(text);
  CHECK(back.w == m.w);
  CHECK(back.alpha.empty());

  m.w = {1.0, 2.0, 3.5, 0.0, 0.0};  // 40% zeros stays dense
  CHECK(serialize_model(m, false).find("w dense 5") != std::string::npos);
}

TEST_CASE("model files without the dual block load with empty alpha") {
  const Model m = awkward_model();
  const Model back = parse_model(serialize_model(m, /*include_alpha=*/false));
  CHECK(back.alpha.empty());
  CHECK(back.w == m.w);
}

TEST_CASE("malformed model files raise parse errors") {
  CHECK_THROWS_AS(parse_model("not a model\n"), parse_error);
  CHECK_THROWS_AS(parse_model("asyncdcd-model v1\nloss hinge\n"), parse_error);
  CHECK_THROWS_AS(
      parse_model("asyncdcd-model v1\nd 2\nw dense 3\n1\n2\n3\n"),
      parse_error);
  CHECK_THROWS_AS(
      parse_model("asyncdcd-model v1\nd 2\nw dense 2\n1\nxyz\n"),
      parse_error);
}

TEST_CASE("save and load round-trip through the filesystem") {
  const Model m = awkward_model();
  const std::string path = "/tmp/asyncdcd_model_io_test.model";
  save_model(m, path);
  const Model back = load_model(path);
  CHECK(back.w == m.w);
  CHECK(back.alpha == m.alpha);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_model("/nonexistent/nope.model"), parse_error);
}

TEST_CASE("bench grid shape, serial self-speedup, CSV round-trip") {
  const Dataset data = load_libsvm_file(ASYNCDCD_DATA_DIR "/toy_n40_d5.svm",
                                        LabelDomain::binary);
  BenchOptions opts;
  opts.spec = LossSpec{LossKind::hinge, 1.0};
  opts.epochs = 5;
  opts.threads_list = {1, 2};
  opts.variants = {Variant::serial, Variant::wild};
  opts.seed = 4;

  // fake clock so seconds are deterministic and init is provably unbilled
  long ticks = 0;
  TrainHooks hooks;
  hooks.now = [&ticks]() { return static_cast<double>(++ticks); };

  const std::vector<BenchRow> rows = run_bench(data, opts, &hooks);
  REQUIRE(rows.size() == 4);  // |variants| x |threads_list|
  CHECK(rows[0].variant == Variant::serial);
  CHECK(rows[0].speedup == 1.0);
  CHECK(rows[1].speedup == 1.0);
  // every run is billed exactly one tick per epoch by the fake clock:
  // data loading and trace diagnostics contributed nothing
  for (const BenchRow& r : rows) {
    CHECK(r.seconds == doctest::Approx(5.0));
    CHECK(r.epochs == 5);
  }

  std::ostringstream out;
  write_bench_csv(out, rows);
  std::istringstream in(out.str());
  const std::vector<BenchRow> back = read_bench_csv(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(back[k].variant == rows[k].variant);
    CHECK(back[k].threads == rows[k].threads);
    CHECK(back[k].seconds == rows[k].seconds);
    CHECK(back[k].final_gap == rows[k].final_gap);
    CHECK(back[k].eps_rel == rows[k].eps_rel);
  }

  const std::string table = bench_table(rows);
  CHECK(table.find("serial") != std::string::npos);
  CHECK(table.find("wild") != std::string::npos);
}
