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

#ifndef FOG_TESTS_REPORTED_SCORES_H_
#define FOG_TESTS_REPORTED_SCORES_H_

#include <array>

namespace fog::testing {

// Published per-feature-set scores, preliminary (7 rows) then pseudo-label
// retrained (6 rows).
struct ReportedScores {
  char feature_set;
  bool pseudo;
  double dmap, tmap, fp, private_score, public_score, total;
};

inline constexpr std::array<ReportedScores, 13> kReportedScores = {{
    {'A', false, 0.224, 0.642, 0.367, 0.330, 0.323, 0.328},
    {'B', false, 0.250, 0.687, 0.400, 0.362, 0.374, 0.366},
    {'C', false, 0.214, 0.669, 0.370, 0.420, 0.393, 0.411},
    {'D', false, 0.237, 0.686, 0.391, 0.342, 0.372, 0.352},
    {'E', false, 0.239, 0.659, 0.383, 0.400, 0.342, 0.381},
    {'F', false, 0.227, 0.652, 0.373, 0.391, 0.352, 0.378},
    {'G', false, 0.112, 0.601, 0.280, 0.156, 0.238, 0.183},
    {'A', true, 0.300, 0.642, 0.417, 0.356, 0.328, 0.347},
    {'B', true, 0.251, 0.687, 0.400, 0.377, 0.376, 0.377},
    {'C', true, 0.308, 0.669, 0.432, 0.443, 0.392, 0.427},
    {'D', true, 0.264, 0.686, 0.409, 0.349, 0.374, 0.357},
    {'E', true, 0.310, 0.659, 0.430, 0.408, 0.350, 0.389},
    {'F', true, 0.262, 0.652, 0.395, 0.397, 0.357, 0.384},
}};

}  // namespace fog::testing

#endif  // FOG_TESTS_REPORTED_SCORES_H_
