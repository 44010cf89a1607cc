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
#include "asyncdcd/libsvm.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>

#include "asyncdcd/error.hpp"

namespace dcd {

namespace {

// from_chars does not accept a leading '+', which LIBSVM labels may carry.
double parse_double(std::string_view tok, std::size_t line,
                    const char* what) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw parse_error(std::string("non-numeric ") + what + " '" +
                          std::string(tok) + "'",
                      line);
  return value;
}

std::int64_t parse_index(std::string_view tok, std::size_t line) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 1)
    throw parse_error("malformed feature index '" + std::string(tok) + "'",
                      line);
  return value;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view next_token(std::string_view& rest) {
  std::size_t b = 0;
  while (b < rest.size() && is_space(rest[b])) ++b;
  std::size_t e = b;
  while (e < rest.size() && !is_space(rest[e])) ++e;
  const std::string_view tok = rest.substr(b, e - b);
  rest.remove_prefix(e);
  return tok;
}

}  // namespace

RawRows parse_libsvm(std::string_view text) {
  RawRows out;
  std::int64_t max_index = 0;  // 1-based
  std::size_t line_no = 0;

  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line =
        nl == std::string_view::npos ? text : text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    std::string_view rest = line;
    const std::string_view label_tok = next_token(rest);
    if (label_tok.empty() || label_tok.front() == '#') continue;

    SparseExample row;
    const double label = parse_double(label_tok, line_no, "label");

    std::int64_t prev_index = 0;
    for (;;) {
      const std::string_view tok = next_token(rest);
      if (tok.empty()) break;
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos || colon == 0 ||
          colon + 1 == tok.size())
        throw parse_error("malformed feature token '" + std::string(tok) + "'",
                          line_no);
      const std::int64_t index = parse_index(tok.substr(0, colon), line_no);
      const double value =
          parse_double(tok.substr(colon + 1), line_no, "feature value");
      if (index <= prev_index)
        throw parse_error("feature indices not strictly increasing", line_no);
      prev_index = index;
      max_index = std::max(max_index, index);
      if (value == 0.0) continue;  // zero entries are absent in sparse form
      row.indices.push_back(static_cast<std::int32_t>(index - 1));
      row.values.push_back(value);
    }
    out.rows.push_back(std::move(row));
    out.labels.push_back(label);
  }
  out.inferred_d = max_index;  // == 1 + max 0-based index
  return out;
}

std::string to_libsvm(const Dataset& data) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const double y = data.labels[i];
    std::snprintf(buf, sizeof buf, "%.17g", y);
    out += buf;
    const SparseExample& row = data.rows[i];
    for (std::size_t k = 0; k < row.nnz(); ++k) {
      // stored values are folded (y * raw); y in {+1,-1} so raw = y * stored
      std::snprintf(buf, sizeof buf, " %d:%.17g", row.indices[k] + 1,
                    y * row.values[k]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string read_file_maybe_gz(const std::string& path) {
  // gzopen reads plain files unchanged and gunzips compressed ones.
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw parse_error("cannot open '" + path + "'");
  std::string out;
  char buf[1 << 16];
  for (;;) {
    const int got = gzread(f, buf, sizeof buf);
    if (got < 0) {
      int errnum = 0;
      const char* msg = gzerror(f, &errnum);
      std::string err = msg != nullptr ? msg : "read error";
      gzclose(f);
      throw parse_error("error reading '" + path + "': " + err);
    }
    if (got == 0) break;
    out.append(buf, static_cast<std::size_t>(got));
  }
  gzclose(f);
  return out;
}

Dataset load_libsvm_file(const std::string& path, LabelDomain domain,
                         std::int64_t d_override) {
  return fold_labels(parse_libsvm(read_file_maybe_gz(path)), domain,
                     d_override);
}

}  // namespace dcd
