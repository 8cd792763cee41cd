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

#ifndef FOG_NN_GRADCHECK_H_
#define FOG_NN_GRADCHECK_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fog/tensor.h"

namespace fog::nn {

// A tensor the loss depends on, together with the analytic gradient to
// compare against.
struct GradTarget {
  std::string name;
  Tensor* point;
  const Tensor* analytic;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::string worst_target;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
};

// Perturbs every element of every target in place (restoring it afterwards)
// and compares a central finite difference of `loss` with the analytic
// gradient. Relative error uses max(|analytic|, |numeric|, 1e-8) as the
// denominator. The difference uses the fourth-order central stencil
// (-f(x+2h) + 8 f(x+h) - 8 f(x-h) + f(x-2h)) / 12h.
// Throws kNumeric on non-finite loss values.
GradCheckReport GradientCheck(const std::function<double()>& loss,
                              const std::vector<GradTarget>& targets,
                              double eps = 1e-5);

double RelativeError(double analytic, double numeric);

}  // namespace fog::nn

#endif  // FOG_NN_GRADCHECK_H_
