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

#include "asyncdcd/model.hpp"

namespace dcd {

/// Text model format. Values are written with 17 significant digits so a
/// save/load round trip reproduces every double bit-exactly and repeated
/// save/load cycles are byte-stable. The weight vector is written densely,
/// one value per line, unless more than half the entries are exact zeros, in
/// which case sparse `idx:val` lines (0-based) are used. The dual vector is
/// an optional trailing block; prediction with the recomputed primal vector
/// requires it.
std::string serialize_model(const Model& model, bool include_alpha = true);
Model parse_model(const std::string& text);  // parse_error on malformed input

void save_model(const Model& model, const std::string& path,
                bool include_alpha = true);
Model load_model(const std::string& path);

}  // namespace dcd
