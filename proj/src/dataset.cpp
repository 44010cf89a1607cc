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
#include "asyncdcd/dataset.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "asyncdcd/error.hpp"
#include "asyncdcd/rng.hpp"

namespace dcd {

Dataset fold_labels(RawRows raw, LabelDomain domain, std::int64_t d_override) {
  if (raw.rows.size() != raw.labels.size())
    throw config_error("row/label count mismatch");
  if (d_override != 0 && d_override < raw.inferred_d)
    throw config_error("dimension override " + std::to_string(d_override) +
                       " is below the inferred dimension " +
                       std::to_string(raw.inferred_d));

  Dataset data;
  data.n = static_cast<std::int64_t>(raw.rows.size());
  data.d = d_override != 0 ? d_override : raw.inferred_d;
  data.labels = std::move(raw.labels);
  data.rows = std::move(raw.rows);

  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const double y = data.labels[i];
    if (domain == LabelDomain::binary && y != 1.0 && y != -1.0)
      throw config_error("label " + std::to_string(y) + " of row " +
                         std::to_string(i + 1) +
                         " is not +1/-1, required by this loss");
    SparseExample& row = data.rows[i];
    double norm_sq = 0.0;
    for (double& v : row.values) {
      v *= y;
      norm_sq += v * v;
    }
    row.norm_sq = norm_sq;
    if (row.nnz() == 0 || norm_sq == 0.0)
      throw config_error("row " + std::to_string(i + 1) +
                         " is a zero sample; zero training samples are not "
                         "allowed");
  }
  return data;
}

Dataset normalize_rows(const Dataset& data) {
  Dataset out = data;
  for (SparseExample& row : out.rows) {
    const double inv = 1.0 / std::sqrt(row.norm_sq);
    for (double& v : row.values) v *= inv;
    row.norm_sq = 1.0;
  }
  return out;
}

IndexPartition partition_indices(std::int64_t n, int p, std::uint64_t seed) {
  if (p < 1) throw config_error("partition requires at least one block");
  if (n < 0) throw config_error("negative index count");

  std::vector<std::int32_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  SplitMix64 gen = derive_stream(seed, 0, 0);
  fisher_yates(std::span<std::int32_t>(perm), gen);

  IndexPartition part;
  part.seed = seed;
  part.blocks.resize(static_cast<std::size_t>(p));
  const std::int64_t base = n / p;
  const std::int64_t extra = n % p;  // first `extra` blocks get one more
  std::size_t pos = 0;
  for (int b = 0; b < p; ++b) {
    const std::int64_t size = base + (b < extra ? 1 : 0);
    auto& block = part.blocks[static_cast<std::size_t>(b)];
    block.assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                 perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += static_cast<std::size_t>(size);
  }
  return part;
}

}  // namespace dcd
