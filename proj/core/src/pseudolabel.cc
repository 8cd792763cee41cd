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

#include "fog/pseudolabel.h"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "fog/csv.h"
#include "fog/error.h"

namespace fog {

TimeSeries PseudoLabeledSeries::AsTrainingSeries() const {
  TimeSeries out = series;
  out.domain = Domain::kDefog;
  out.sample_rate_hz = SampleRateHz(Domain::kDefog);
  out.typed_labels = generated;
  out.event.clear();
  return out;
}

PseudoLabeledSeries AssignPseudoLabels(const TimeSeries& series,
                                       const Tensor& probabilities,
                                       PseudoProvenance provenance) {
  if (series.domain != Domain::kNotype) {
    Fail(ErrorKind::kValidation,
         series.trial_id + ": pseudo-labels apply to Notype trials only");
  }
  if (probabilities.rows() != series.length() ||
      probabilities.cols() != kNumEventTypes) {
    Fail(ErrorKind::kShape, series.trial_id + ": probabilities " +
                                probabilities.ShapeString() + " for " +
                                std::to_string(series.length()) + " timesteps");
  }
  PseudoLabeledSeries labeled;
  labeled.series = series;
  labeled.provenance = std::move(provenance);
  for (auto& column : labeled.generated) column.assign(series.length(), 0);
  for (std::size_t t = 0; t < series.length(); ++t) {
    if (series.event[t] == 0) continue;
    std::size_t best = 0;
    for (std::size_t k = 1; k < kNumEventTypes; ++k) {
      if (probabilities(t, k) > probabilities(t, best)) best = k;
    }
    labeled.generated[best][t] = 1;
  }
  return labeled;
}

Dataset BuildAugmentedDataset(const Dataset& defog,
                              const std::vector<PseudoLabeledSeries>& pseudo,
                              FeatureSetId retrain_set) {
  Dataset merged = defog;
  if (merged.pseudo.size() != merged.series.size()) {
    merged.pseudo.assign(merged.series.size(), false);
  }
  std::set<std::string> ids;
  for (const auto& s : merged.series) ids.insert(s.trial_id);
  for (const auto& p : pseudo) {
    if (p.provenance.feature_set != retrain_set) {
      Fail(ErrorKind::kValidation,
           p.series.trial_id + ": pseudo-labels came from a feature set " +
               std::string(1, FeatureSetName(p.provenance.feature_set)) +
               " group, retraining uses set " +
               std::string(1, FeatureSetName(retrain_set)));
    }
    if (!ids.insert(p.series.trial_id).second) {
      Fail(ErrorKind::kIntegrity, "duplicate trial id " + p.series.trial_id);
    }
    merged.series.push_back(p.AsTrainingSeries());
    merged.pseudo.push_back(true);
  }
  merged.CheckIntegrity();
  return merged;
}

void WritePseudoLabeled(const PseudoLabeledSeries& labeled,
                        const std::filesystem::path& dir) {
  const TimeSeries training = labeled.AsTrainingSeries();
  WriteTimeSeries(training, dir / (training.trial_id + ".csv"));
  nlohmann::json sidecar = {
      {"group_id", labeled.provenance.group_id},
      {"feature_set", std::string(1, FeatureSetName(labeled.provenance.feature_set))},
      {"seed", labeled.provenance.seed},
      {"source_domain", "notype"},
      {"units_harmonized", labeled.series.units_harmonized}};
  csv::WriteText(dir / (training.trial_id + ".provenance.json"),
                 sidecar.dump(2) + "\n");
}

std::vector<PseudoLabeledSeries> LoadPseudoLabeled(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    Fail(ErrorKind::kIo, "missing pseudo-label directory " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<PseudoLabeledSeries> out;
  for (const auto& file : files) {
    const TimeSeries typed = LoadTimeSeries(file, Domain::kDefog);
    auto sidecar_path = file;
    sidecar_path.replace_extension(".provenance.json");
    nlohmann::json sidecar;
    try {
      sidecar = nlohmann::json::parse(csv::ReadText(sidecar_path));
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorKind::kParse, sidecar_path.string() + ": " + e.what());
    }
    PseudoLabeledSeries labeled;
    labeled.series = typed;
    labeled.series.domain = Domain::kNotype;
    labeled.series.units_harmonized = sidecar.value("units_harmonized", false);
    labeled.series.event.assign(typed.length(), 0);
    for (std::size_t t = 0; t < typed.length(); ++t) {
      for (const auto& column : typed.typed_labels) {
        labeled.series.event[t] |= column[t];
      }
    }
    labeled.series.typed_labels = {};
    labeled.generated = typed.typed_labels;
    labeled.provenance.group_id = sidecar.at("group_id").get<std::string>();
    labeled.provenance.feature_set =
        ParseFeatureSet(sidecar.at("feature_set").get<std::string>());
    labeled.provenance.seed = sidecar.at("seed").get<std::uint64_t>();
    out.push_back(std::move(labeled));
  }
  return out;
}

}  // namespace fog
