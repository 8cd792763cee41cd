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

#ifndef FOG_TESTS_AP_ORACLE_H_
#define FOG_TESTS_AP_ORACLE_H_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace fog::testing {

// Average precision by explicit precision@k enumeration. The rank of item i
// is counted directly: items with a higher score, or an equal score and a
// lower index, come first. Terms are summed in rank order so the result is
// comparable bit for bit.
inline std::optional<double> BruteForceAveragePrecision(
    const std::vector<double>& scores, const std::vector<double>& labels) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> rank(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (scores[j] > scores[i] || (scores[j] == scores[i] && j < i)) ++rank[i];
    }
  }
  std::vector<std::pair<std::size_t, double>> terms;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != 1.0) continue;
    double hits_at_rank = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[j] == 1.0 && rank[j] <= rank[i]) hits_at_rank += 1.0;
    }
    terms.emplace_back(rank[i], hits_at_rank / static_cast<double>(rank[i]));
  }
  std::sort(terms.begin(), terms.end());
  const double positives = static_cast<double>(terms.size());
  double sum = 0.0;
  for (const auto& term : terms) sum += term.second;
  if (positives == 0.0) return std::nullopt;
  return sum / positives;
}

}  // namespace fog::testing

#endif  // FOG_TESTS_AP_ORACLE_H_
