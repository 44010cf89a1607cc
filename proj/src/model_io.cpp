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
#include "asyncdcd/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "asyncdcd/error.hpp"

namespace dcd {

namespace {

constexpr const char* kMagic = "asyncdcd-model v1";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_value(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw parse_error("bad numeric value '" + tok + "' in model file", line);
  }
}

}  // namespace

std::string serialize_model(const Model& model, bool include_alpha) {
  std::string out;
  out += kMagic;
  out += '\n';
  out += "loss ";
  out += loss_name(model.spec.kind);
  out += '\n';
  out += "C " + fmt17(model.spec.C) + '\n';
  out += "d " + std::to_string(model.w.size()) + '\n';
  out += "variant ";
  out += variant_name(model.variant);
  out += '\n';

  std::size_t zeros = 0;
  for (double v : model.w)
    if (v == 0.0) ++zeros;
  const bool sparse = !model.w.empty() && 2 * zeros > model.w.size();
  if (sparse) {
    out += "w sparse " + std::to_string(model.w.size() - zeros) + '\n';
    for (std::size_t j = 0; j < model.w.size(); ++j)
      if (model.w[j] != 0.0)
        out += std::to_string(j) + ':' + fmt17(model.w[j]) + '\n';
  } else {
    out += "w dense " + std::to_string(model.w.size()) + '\n';
    for (double v : model.w) out += fmt17(v) + '\n';
  }
  if (include_alpha) {
    out += "alpha " + std::to_string(model.alpha.size()) + '\n';
    for (double a : model.alpha) out += fmt17(a) + '\n';
  }
  return out;
}

Model parse_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  const auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line))
      throw parse_error("truncated model file", line_no);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  if (next_line() != kMagic)
    throw parse_error("not a model file (bad magic line)", line_no);

  Model model;
  std::size_t d = 0;
  bool have_w = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "loss") {
      std::string v;
      ls >> v;
      model.spec.kind = loss_from_name(v);
    } else if (key == "C") {
      std::string v;
      ls >> v;
      model.spec.C = parse_value(v, line_no);
    } else if (key == "d") {
      ls >> d;
    } else if (key == "variant") {
      std::string v;
      ls >> v;
      model.variant = variant_from_name(v);
    } else if (key == "w") {
      std::string layout;
      std::size_t count = 0;
      ls >> layout >> count;
      model.w.assign(d, 0.0);
      if (layout == "dense") {
        if (count != d)
          throw parse_error("dense weight count does not match d", line_no);
        for (std::size_t j = 0; j < count; ++j)
          model.w[j] = parse_value(next_line(), line_no);
      } else if (layout == "sparse") {
        for (std::size_t k = 0; k < count; ++k) {
          const std::string& entry = next_line();
          const std::size_t colon = entry.find(':');
          if (colon == std::string::npos)
            throw parse_error("bad sparse weight entry '" + entry + "'",
                              line_no);
          const std::size_t j = static_cast<std::size_t>(
              parse_value(entry.substr(0, colon), line_no));
          if (j >= d)
            throw parse_error("sparse weight index out of range", line_no);
          model.w[j] = parse_value(entry.substr(colon + 1), line_no);
        }
      } else {
        throw parse_error("unknown weight layout '" + layout + "'", line_no);
      }
      have_w = true;
    } else if (key == "alpha") {
      std::size_t count = 0;
      ls >> count;
      model.alpha.resize(count);
      for (std::size_t i = 0; i < count; ++i)
        model.alpha[i] = parse_value(next_line(), line_no);
    } else {
      throw parse_error("unknown model file key '" + key + "'", line_no);
    }
  }
  if (!have_w) throw parse_error("model file has no weight block");
  return model;
}

void save_model(const Model& model, const std::string& path,
                bool include_alpha) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot write model file '" + path + "'");
  out << serialize_model(model, include_alpha);
  if (!out) throw parse_error("error writing model file '" + path + "'");
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace dcd
