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

#include <string>
#include <string_view>

#include "asyncdcd/dataset.hpp"

namespace dcd {

/// Parses LIBSVM text: `<label> <idx>:<val> ...` per line, 1-based strictly
/// increasing indices. Blank lines and lines starting with '#' are skipped.
/// Exact-zero values are dropped (absent in a sparse encoding). Duplicate or
/// non-increasing indices, malformed tokens, and non-numeric values raise
/// parse_error with the offending line number.
RawRows parse_libsvm(std::string_view text);

/// Writes a folded Dataset back to LIBSVM text (unfolding the labels) with
/// 17-significant-digit values, so re-parsing reproduces the Dataset
/// bit-identically.
std::string to_libsvm(const Dataset& data);

/// Reads a whole file into memory, decompressing transparently if it is
/// gzip-compressed. Raises parse_error on I/O failure.
std::string read_file_maybe_gz(const std::string& path);

/// parse + fold in one step, as the CLI consumes files.
Dataset load_libsvm_file(const std::string& path, LabelDomain domain,
                         std::int64_t d_override = 0);

}  // namespace dcd
