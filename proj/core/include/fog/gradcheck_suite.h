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

#ifndef FOG_GRADCHECK_SUITE_H_
#define FOG_GRADCHECK_SUITE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fog/model.h"

namespace fog {

struct GradcheckResult {
  std::string name;
  std::size_t seeds = 0;
  std::size_t checked = 0;  // perturbed elements over all seeds
  double max_relative_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_relative_error < tolerance; }
};

// Finite-difference checks of every layer's backward pass on random inputs,
// parameters and upstream gradients, one run per seed starting at
// `first_seed`. Layer tolerance 1e-5; full toy model 1e-4.
GradcheckResult CheckDenseGradients(std::size_t seeds, std::uint64_t first_seed = 1);
GradcheckResult CheckLayerNormGradients(std::size_t seeds, std::uint64_t first_seed = 1);
GradcheckResult CheckAttentionGradients(std::size_t seeds, std::uint64_t first_seed = 1);
GradcheckResult CheckLstmCellGradients(std::size_t seeds, std::uint64_t first_seed = 1);
GradcheckResult CheckBiLstmGradients(std::size_t seeds, std::uint64_t first_seed = 1);
GradcheckResult CheckLossHeadGradients(std::size_t seeds, std::uint64_t first_seed = 1);
GradcheckResult CheckToyModelGradients(std::size_t seeds, std::uint64_t first_seed = 1);

// A config of a few thousand parameters used for gradient and learning
// checks.
TransBiLstmConfig GradcheckToyConfig(std::size_t input_dim = 3);

std::vector<GradcheckResult> RunGradcheckSuite(std::size_t seeds = 10,
                                               std::uint64_t first_seed = 1);

}  // namespace fog

#endif  // FOG_GRADCHECK_SUITE_H_
