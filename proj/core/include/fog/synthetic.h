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

#ifndef FOG_SYNTHETIC_H_
#define FOG_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "fog/data.h"
#include "fog/random.h"

namespace fog {

struct SyntheticCorpusOptions {
  std::uint64_t seed = 0;
  std::size_t defog_trials = 20;
  std::size_t tdcsfog_trials = 12;
  std::size_t notype_trials = 8;
  std::size_t test_trials = 6;  // per typed domain, in the "test" split
  std::size_t subjects = 8;
  double defog_duration_s = 10.0;
  double tdcsfog_duration_s = 8.0;
  double notype_duration_s = 10.0;
};

// One to three non-overlapping episodes of 1.5-3.5 s. The first episode's
// type is `first_type`, so callers can cycle types across trials.
std::vector<Episode> RandomEpisodes(Rng& rng, double duration_s,
                                    EventType first_type);

struct SyntheticCorpusSummary {
  std::size_t series = 0;
  std::size_t subjects = 0;
};

// Writes a complete corpus under `root` in the CorpusLayout arrangement:
// train/{defog,tdcsfog,notype}, test/{defog,tdcsfog}, both metadata files
// and the subject file. Deterministic in options.seed.
SyntheticCorpusSummary WriteSyntheticCorpus(const SyntheticCorpusOptions& options,
                                            const std::filesystem::path& root);

}  // namespace fog

#endif  // FOG_SYNTHETIC_H_
