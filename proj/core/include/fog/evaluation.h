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

#ifndef FOG_EVALUATION_H_
#define FOG_EVALUATION_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fog/tensor.h"

namespace fog {

// Share of Defog and Tdcsfog data in the training corpus.
inline constexpr double kDefogWeight = 0.657;
inline constexpr double kTdcsfogWeight = 0.343;
// Share of the test data behind the private and public leaderboards.
inline constexpr double kPrivateWeight = 0.68;
inline constexpr double kPublicWeight = 0.32;

// Rank-based average precision. Items are ordered by descending score,
// ties by ascending index. Returns nullopt when there are no positives.
std::optional<double> AveragePrecision(std::span<const double> scores,
                                       std::span<const double> labels);

// Mean of per-class AP over classes with at least one positive. Throws
// kValidation when no class has positives.
double MapScore(const Tensor& probabilities, const Tensor& labels);

// Mean |p - y| over all entries.
double MeanAbsoluteError(const Tensor& probabilities, const Tensor& labels);

double FeatureSetPerformance(double dmap, double tmap,
                             double defog_weight = kDefogWeight,
                             double tdcsfog_weight = kTdcsfogWeight);

double CombinedScore(double private_score, double public_score,
                     double private_weight = kPrivateWeight,
                     double public_weight = kPublicWeight);

struct ReportRow {
  std::string feature_set;
  double dmap = 0.0;
  double tmap = 0.0;
  double fp = 0.0;
  std::optional<double> private_score;
  std::optional<double> public_score;
  std::optional<double> total_score;
};

// Fills fp (and total_score when both leaderboard scores are present).
ReportRow MakeReportRow(std::string feature_set, double dmap, double tmap,
                        std::optional<double> private_score = std::nullopt,
                        std::optional<double> public_score = std::nullopt);

// Columns FeatSet,DMAP,TMAP,FP,Private,Public,Total; three decimals.
std::string ReportMarkdown(const std::vector<ReportRow>& rows,
                           const std::string& title = "");
std::string ReportCsv(const std::vector<ReportRow>& rows);

}  // namespace fog

#endif  // FOG_EVALUATION_H_
