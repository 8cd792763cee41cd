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

#ifndef FOG_PSEUDOLABEL_H_
#define FOG_PSEUDOLABEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fog/data.h"
#include "fog/features.h"
#include "fog/tensor.h"

namespace fog {

struct PseudoProvenance {
  std::string group_id;
  FeatureSetId feature_set = FeatureSetId::kA;
  std::uint64_t seed = 0;
};

// A Notype trial with typed labels derived from a model group's output.
struct PseudoLabeledSeries {
  TimeSeries series;  // domain Notype, event column intact
  std::array<std::vector<std::uint8_t>, kNumEventTypes> generated;
  PseudoProvenance provenance;

  // Defog-domain copy whose typed labels are the generated columns.
  TimeSeries AsTrainingSeries() const;
};

// Where event = 1 the most probable class (ties to the lowest index) is set;
// all columns are 0 where event = 0.
PseudoLabeledSeries AssignPseudoLabels(const TimeSeries& series,
                                       const Tensor& probabilities,
                                       PseudoProvenance provenance = {});

// Appends the pseudo-labelled trials (flagged) to a copy of `defog`.
// `retrain_set` must match every trial's provenance feature set.
Dataset BuildAugmentedDataset(const Dataset& defog,
                              const std::vector<PseudoLabeledSeries>& pseudo,
                              FeatureSetId retrain_set);

// <dir>/<trial>.csv in the typed-label schema plus <dir>/<trial>.provenance.json.
void WritePseudoLabeled(const PseudoLabeledSeries& labeled,
                        const std::filesystem::path& dir);
std::vector<PseudoLabeledSeries> LoadPseudoLabeled(
    const std::filesystem::path& dir);

}  // namespace fog

#endif  // FOG_PSEUDOLABEL_H_
