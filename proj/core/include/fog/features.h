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

#ifndef FOG_FEATURES_H_
#define FOG_FEATURES_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fog/data.h"
#include "fog/tensor.h"

namespace fog {

enum class FeatureSetId { kA, kB, kC, kD, kE, kF, kG };

inline constexpr std::array<FeatureSetId, 7> kAllFeatureSets = {
    FeatureSetId::kA, FeatureSetId::kB, FeatureSetId::kC, FeatureSetId::kD,
    FeatureSetId::kE, FeatureSetId::kF, FeatureSetId::kG};

FeatureSetId ParseFeatureSet(std::string_view name);
char FeatureSetName(FeatureSetId id);

// Subject -> cluster index in [0, k).
struct SubjectClusters {
  std::size_t k = 0;
  std::map<std::string, std::size_t> assignment;
};

// Column names in their fixed order. `cluster_count` only matters for G.
std::vector<std::string> FeatureColumns(FeatureSetId id,
                                        std::size_t cluster_count = 0);

struct FeatureMatrix {
  std::string trial_id;
  FeatureSetId set_id = FeatureSetId::kA;
  std::vector<std::string> columns;
  Tensor values;  // T x D

  std::size_t length() const { return values.rows(); }
  std::size_t dim() const { return columns.size(); }
};

// i / (T - 1); [0] for T = 1.
std::vector<double> ComputeTimeFrac(std::size_t length);

// j_0 = 0, j_i = (a_i - a_{i-1}) * rate.
std::vector<double> ComputeJerk(std::span<const double> channel,
                                double sample_rate_hz);

std::vector<double> ComputeMagnitude(std::span<const double> acc_v,
                                     std::span<const double> acc_ml,
                                     std::span<const double> acc_ap);

// Requires harmonized units. Set G needs `clusters` covering the subject.
FeatureMatrix BuildFeatureMatrix(const TimeSeries& series, FeatureSetId set,
                                 const TrialMetadata& meta,
                                 const Subject& subject,
                                 const SubjectClusters* clusters = nullptr);

// Looks metadata and subject up in the dataset.
FeatureMatrix BuildFeatureMatrix(const TimeSeries& series, FeatureSetId set,
                                 const Dataset& dataset,
                                 const SubjectClusters* clusters = nullptr);

// {mean, max, min, std} for AccV, AccML, AccAP in that order. Population std.
struct SummaryVector {
  std::string trial_id;
  std::array<double, 12> values{};
};

SummaryVector FileSummaryVector(const TimeSeries& series);

// True for acceleration, jerk and magnitude columns; TimeFrac, Gender,
// Medication and cluster indicators are never rescaled.
bool IsStandardizedColumn(std::string_view column);

struct ColumnStats {
  std::vector<std::string> columns;
  std::vector<double> mean;
  std::vector<double> stddev;
};

ColumnStats FitColumnStats(std::span<const FeatureMatrix> matrices);

// Z-scores the eligible columns. Columns with zero std pass through.
FeatureMatrix Standardize(FeatureMatrix matrix, const ColumnStats& stats);

// Stable hash of the set id and column order, used to reject checkpoints
// applied to differently laid out features.
std::string FeatureFingerprint(FeatureSetId id,
                               const std::vector<std::string>& columns);

void WriteFeatureMatrix(const FeatureMatrix& matrix,
                        const std::filesystem::path& path);

}  // namespace fog

#endif  // FOG_FEATURES_H_
