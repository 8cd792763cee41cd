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

#ifndef FOG_ERROR_H_
#define FOG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace fog {

enum class ErrorKind {
  kSchema,
  kParse,
  kValidation,
  kIntegrity,
  kShape,
  kNumeric,
  kMissingDependency,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure raised by the library carries a kind so the CLI can emit a
// machine-readable diagnostic line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace fog

#endif  // FOG_ERROR_H_
