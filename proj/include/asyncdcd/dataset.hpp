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
#include <span>
#include <vector>

namespace dcd {

/// One training row with the label already folded into the features
/// (x_i = y_i * raw_x_i) and its squared 2-norm cached.
///
/// Invariants: indices strictly increasing, same length as values, no stored
/// value is exactly zero, and the row itself is nonempty.
struct SparseExample {
  std::vector<std::int32_t> indices;  // 0-based feature ids, sorted
  std::vector<double> values;
  double norm_sq = 0.0;

  std::size_t nnz() const noexcept { return indices.size(); }

  double dot(std::span<const double> w) const noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k)
      s += w[static_cast<std::size_t>(indices[k])] * values[k];
    return s;
  }
};

/// Immutable after construction; safe for concurrent reads from all workers.
struct Dataset {
  std::int64_t n = 0;  // rows
  std::int64_t d = 0;  // feature dimension (may exceed max index + 1)
  std::vector<SparseExample> rows;
  std::vector<double> labels;  // original labels, kept for prediction

  bool empty() const noexcept { return n == 0; }
};

/// Rows as parsed from text, before labels are folded in.
struct RawRows {
  std::vector<SparseExample> rows;  // norm_sq not yet filled
  std::vector<double> labels;
  std::int64_t inferred_d = 0;
};

enum class LabelDomain {
  binary,  // labels must be exactly +1 or -1
};

/// Folds labels into features (x_i = y_i * raw_x_i), fills norm_sq, and
/// validates against the loss's label domain. d_override, when nonzero, widens
/// the feature dimension beyond the inferred one (never narrows it).
Dataset fold_labels(RawRows raw, LabelDomain domain,
                    std::int64_t d_override = 0);

/// Returns a copy with every row scaled to unit 2-norm. Opt-in preprocessing;
/// the solver never normalizes implicitly.
Dataset normalize_rows(const Dataset& data);

/// Index blocks for per-thread permutation sweeps.
struct IndexPartition {
  std::vector<std::vector<std::int32_t>> blocks;
  std::uint64_t seed = 0;
};

/// Randomly permutes {0,...,n-1} (deterministic given seed) and splits it into
/// p contiguous blocks whose sizes differ by at most one.
IndexPartition partition_indices(std::int64_t n, int p, std::uint64_t seed);

}  // namespace dcd
