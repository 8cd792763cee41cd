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

#include "fog/nn/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "fog/error.h"

namespace fog::nn {

double RelativeError(double analytic, double numeric) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

GradCheckReport GradientCheck(const std::function<double()>& loss,
                              const std::vector<GradTarget>& targets,
                              double eps) {
  if (!(eps >= 1e-6 && eps <= 1e-4)) {
    Fail(ErrorKind::kValidation, "gradient check eps must be in [1e-6, 1e-4]");
  }
  GradCheckReport report;
  auto evaluate = [&loss](const std::string& name) {
    const double value = loss();
    if (!std::isfinite(value)) {
      Fail(ErrorKind::kNumeric, "non-finite loss while perturbing " + name);
    }
    return value;
  };
  for (const auto& target : targets) {
    if (target.point->size() != target.analytic->size()) {
      Fail(ErrorKind::kShape, target.name + ": gradient shape mismatch");
    }
    if (!target.analytic->AllFinite()) {
      Fail(ErrorKind::kNumeric, target.name + ": non-finite analytic gradient");
    }
    for (std::size_t i = 0; i < target.point->size(); ++i) {
      double& x = (*target.point)[i];
      const double original = x;
      x = original + 2 * eps;
      const double f_p2 = evaluate(target.name);
      x = original + eps;
      const double f_p1 = evaluate(target.name);
      x = original - eps;
      const double f_m1 = evaluate(target.name);
      x = original - 2 * eps;
      const double f_m2 = evaluate(target.name);
      x = original;
      const double numeric =
          ((f_m2 - f_p2) + 8.0 * (f_p1 - f_m1)) / (12.0 * eps);
      const double error = RelativeError((*target.analytic)[i], numeric);
      ++report.checked;
      report.max_absolute_error = std::max(
          report.max_absolute_error, std::abs((*target.analytic)[i] - numeric));
      if (error > report.max_relative_error) {
        report.max_relative_error = error;
        report.worst_target = target.name;
        report.worst_index = i;
      }
    }
  }
  return report;
}

}  // namespace fog::nn
