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

#ifndef FOG_TOOLS_CLI_H_
#define FOG_TOOLS_CLI_H_

#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fog/training.h"

namespace fog::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Environment variable naming the default corpus root.
inline constexpr const char* kDataRootVariable = "FOG_DATA_ROOT";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key=value settings. Every known key has a default.
using Settings = std::map<std::string, std::string>;

Settings DefaultSettings();

// Parses `key = value` lines; '#' starts a comment. Unknown keys and lines
// without '=' raise UsageError.
Settings ParseConfigText(const std::string& text, const std::string& source);

// Overlays `overrides` on `base`, rejecting unknown keys.
void Overlay(Settings& base, const Settings& overrides, const std::string& source);

std::string SettingsText(const Settings& settings, const std::string& command);

TrainConfig TrainConfigFromSettings(const Settings& settings);

// Runs one fogtool invocation; args[0] is the program name. Diagnostics go
// to `err` as a single JSON line {"error": kind, "message": text}.
int RunCommand(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err);

}  // namespace fog::cli

#endif  // FOG_TOOLS_CLI_H_
