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

#ifndef FOG_TESTS_PSEUDO_ORACLE_H_
#define FOG_TESTS_PSEUDO_ORACLE_H_

#include <array>
#include <cstdint>

namespace fog::testing {

// One-hot of the largest of three probabilities; the first of equal maxima
// wins.
inline std::array<std::uint8_t, 3> ArgmaxOneHot(double p0, double p1, double p2) {
  if (p0 >= p1 && p0 >= p2) return {1, 0, 0};
  if (p1 >= p2) return {0, 1, 0};
  return {0, 0, 1};
}

}  // namespace fog::testing

#endif  // FOG_TESTS_PSEUDO_ORACLE_H_
