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

#include "fog/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "fog/error.h"
#include "fog/random.h"

namespace fog {
namespace {

std::string HexId(Rng& rng) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "%010llx",
                static_cast<unsigned long long>(rng.NextSeed() >> 24));
  return buffer;
}

double Round1(double v) { return std::round(v * 10.0) / 10.0; }

}  // namespace

std::vector<Episode> RandomEpisodes(Rng& rng, double duration_s,
                                    EventType first_type) {
  const std::size_t count = 1 + rng.Index(3);
  // Equal slots; each episode sits somewhere inside its own slot.
  const double slot = duration_s / static_cast<double>(count);
  std::vector<Episode> episodes;
  for (std::size_t i = 0; i < count; ++i) {
    const double length = std::min(rng.Uniform(1.5, 3.5), 0.9 * slot);
    const double start = i * slot + rng.Uniform(0.0, slot - length);
    const auto type = i == 0 ? first_type
                             : static_cast<EventType>(rng.Index(kNumEventTypes));
    episodes.push_back({type, start, length});
  }
  return episodes;
}

SyntheticCorpusSummary WriteSyntheticCorpus(const SyntheticCorpusOptions& options,
                                            const std::filesystem::path& root) {
  if (options.subjects == 0) {
    Fail(ErrorKind::kValidation, "synthetic corpus needs at least one subject");
  }
  Rng rng(options.seed);
  const CorpusLayout layout{root};
  SyntheticCorpusSummary summary;

  std::vector<Subject> subjects;
  for (std::size_t i = 0; i < options.subjects; ++i) {
    Subject s;
    s.subject_id = HexId(rng).substr(0, 6);
    s.age = Round1(rng.Uniform(50.0, 85.0));
    s.sex = rng.Uniform() < 0.5 ? Sex::kMale : Sex::kFemale;
    s.years_since_dx = Round1(rng.Uniform(1.0, 20.0));
    s.updrs_on = std::round(rng.Uniform(10.0, 50.0));
    s.updrs_off = s.updrs_on + std::round(rng.Uniform(0.0, 15.0));
    s.nfogq = std::round(rng.Uniform(0.0, 28.0));
    subjects.push_back(s);
  }
  WriteSubjects(subjects, layout.Subjects());
  summary.subjects = subjects.size();

  std::vector<TrialMetadata> defog_meta, tdcsfog_meta;
  std::size_t type_cycle = 0;
  auto emit = [&](std::string_view split, Domain domain, std::size_t count,
                  double duration) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::string id = HexId(rng);
      const auto first = static_cast<EventType>(type_cycle++ % kNumEventTypes);
      const auto episodes = RandomEpisodes(rng, duration, first);
      const TimeSeries series =
          GenerateTrial(rng.NextSeed(), domain, duration, episodes, id);
      WriteTimeSeries(series, layout.SeriesDir(split, domain) / (id + ".csv"));
      TrialMetadata meta{id, subjects[rng.Index(subjects.size())].subject_id,
                         rng.Uniform() < 0.5 ? Medication::kOn : Medication::kOff};
      (domain == Domain::kTdcsfog ? tdcsfog_meta : defog_meta).push_back(meta);
      ++summary.series;
    }
  };
  emit("train", Domain::kDefog, options.defog_trials, options.defog_duration_s);
  emit("train", Domain::kTdcsfog, options.tdcsfog_trials, options.tdcsfog_duration_s);
  emit("train", Domain::kNotype, options.notype_trials, options.notype_duration_s);
  emit("test", Domain::kDefog, options.test_trials, options.defog_duration_s);
  emit("test", Domain::kTdcsfog, options.test_trials, options.tdcsfog_duration_s);
  WriteMetadata(defog_meta, layout.DefogMetadata());
  WriteMetadata(tdcsfog_meta, layout.TdcsfogMetadata());
  return summary;
}

}  // namespace fog
