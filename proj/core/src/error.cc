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

#include "fog/error.h"

namespace fog {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSchema:
      return "schema";
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kValidation:
      return "validation";
    case ErrorKind::kIntegrity:
      return "integrity";
    case ErrorKind::kShape:
      return "shape";
    case ErrorKind::kNumeric:
      return "numeric";
    case ErrorKind::kMissingDependency:
      return "missing-dependency";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace fog
