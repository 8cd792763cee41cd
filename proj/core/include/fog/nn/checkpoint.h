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

#ifndef FOG_NN_CHECKPOINT_H_
#define FOG_NN_CHECKPOINT_H_

#include <nlohmann/json.hpp>

#include "fog/nn/layers.h"

namespace fog::nn {

inline constexpr int kParameterFormatVersion = 1;

// {"version": 1, "parameters": {"<name>": {"shape": [...], "values": [...]}}}
// Values are written with round-trip precision.
nlohmann::json ParametersToJson(const ParameterRefs& params);

// Every named parameter must be present with the same shape; extra or
// missing entries are integrity errors.
void LoadParametersFromJson(const nlohmann::json& json,
                            const ParameterRefs& params);

}  // namespace fog::nn

#endif  // FOG_NN_CHECKPOINT_H_
