/*
 * Copyright 2026 The FogType Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fog/nn/checkpoint.h"

#include <set>

#include "fog/error.h"

namespace fog::nn {

nlohmann::json ParametersToJson(const ParameterRefs& params) {
  nlohmann::json entries = nlohmann::json::object();
  for (const Parameter* p : params) {
    nlohmann::json entry;
    entry["shape"] = p->value.shape();
    entry["values"] = std::vector<double>(p->value.values().begin(),
                                          p->value.values().end());
    entries[p->name] = std::move(entry);
  }
  return {{"version", kParameterFormatVersion}, {"parameters", std::move(entries)}};
}

void LoadParametersFromJson(const nlohmann::json& json,
                            const ParameterRefs& params) {
  if (!json.contains("version") ||
      json.at("version").get<int>() != kParameterFormatVersion) {
    Fail(ErrorKind::kIntegrity, "unsupported parameter container version");
  }
  const auto& entries = json.at("parameters");
  std::set<std::string> seen;
  for (Parameter* p : params) {
    if (!entries.contains(p->name)) {
      Fail(ErrorKind::kIntegrity, "checkpoint lacks parameter " + p->name);
    }
    const auto& entry = entries.at(p->name);
    const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
    if (shape != p->value.shape()) {
      Fail(ErrorKind::kIntegrity, "shape mismatch for parameter " + p->name);
    }
    const auto values = entry.at("values").get<std::vector<double>>();
    if (values.size() != p->value.size()) {
      Fail(ErrorKind::kIntegrity, "value count mismatch for parameter " + p->name);
    }
    std::copy(values.begin(), values.end(), p->value.values().begin());
    seen.insert(p->name);
  }
  for (const auto& [name, entry] : entries.items()) {
    if (!seen.contains(name)) {
      Fail(ErrorKind::kIntegrity, "checkpoint has unexpected parameter " + name);
    }
  }
}

}  // namespace fog::nn
