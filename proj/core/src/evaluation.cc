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

#include "fog/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "fog/data.h"
#include "fog/error.h"

namespace fog {
namespace {

void CheckWeights(double a, double b, const char* what) {
  if (std::abs(a + b - 1.0) > 1e-9) {
    Fail(ErrorKind::kValidation, std::string(what) + ": weights must sum to 1");
  }
}

void CheckUnit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    Fail(ErrorKind::kValidation, std::string(what) + " must lie in [0, 1]");
  }
}

std::string Fixed3(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", v);
  return buffer;
}

std::string Optional3(const std::optional<double>& v) {
  return v ? Fixed3(*v) : "-";
}

}  // namespace

std::optional<double> AveragePrecision(std::span<const double> scores,
                                       std::span<const double> labels) {
  if (scores.size() != labels.size()) {
    Fail(ErrorKind::kShape, "average precision: length mismatch");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (labels[order[rank]] > 0.5) {
      hits += 1.0;
      sum += hits / static_cast<double>(rank + 1);
    }
  }
  if (hits == 0.0) return std::nullopt;
  return sum / hits;
}

double MapScore(const Tensor& probabilities, const Tensor& labels) {
  if (!probabilities.SameShape(labels)) {
    Fail(ErrorKind::kShape, "MAP: probabilities " + probabilities.ShapeString() +
                                " vs labels " + labels.ShapeString());
  }
  double total = 0.0;
  int counted = 0;
  std::vector<double> scores(probabilities.rows()), truth(probabilities.rows());
  for (std::size_t c = 0; c < probabilities.cols(); ++c) {
    for (std::size_t r = 0; r < probabilities.rows(); ++r) {
      scores[r] = probabilities(r, c);
      truth[r] = labels(r, c);
    }
    if (auto ap = AveragePrecision(scores, truth)) {
      total += *ap;
      ++counted;
    }
  }
  if (counted == 0) {
    Fail(ErrorKind::kValidation, "MAP undefined: no class has positive labels");
  }
  return total / counted;
}

double MeanAbsoluteError(const Tensor& probabilities, const Tensor& labels) {
  if (!probabilities.SameShape(labels)) {
    Fail(ErrorKind::kShape, "MAE: shape mismatch");
  }
  if (probabilities.empty()) Fail(ErrorKind::kValidation, "MAE of empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    sum += std::abs(probabilities[i] - labels[i]);
  }
  return sum / static_cast<double>(probabilities.size());
}

double FeatureSetPerformance(double dmap, double tmap, double defog_weight,
                             double tdcsfog_weight) {
  CheckWeights(defog_weight, tdcsfog_weight, "feature set performance");
  CheckUnit(dmap, "DMAP");
  CheckUnit(tmap, "TMAP");
  return defog_weight * dmap + tdcsfog_weight * tmap;
}

double CombinedScore(double private_score, double public_score,
                     double private_weight, double public_weight) {
  CheckWeights(private_weight, public_weight, "combined score");
  CheckUnit(private_score, "private score");
  CheckUnit(public_score, "public score");
  return private_weight * private_score + public_weight * public_score;
}

ReportRow MakeReportRow(std::string feature_set, double dmap, double tmap,
                        std::optional<double> private_score,
                        std::optional<double> public_score) {
  ReportRow row;
  row.feature_set = std::move(feature_set);
  row.dmap = dmap;
  row.tmap = tmap;
  row.fp = FeatureSetPerformance(dmap, tmap);
  row.private_score = private_score;
  row.public_score = public_score;
  if (private_score && public_score) {
    row.total_score = CombinedScore(*private_score, *public_score);
  }
  return row;
}

std::string ReportMarkdown(const std::vector<ReportRow>& rows,
                           const std::string& title) {
  std::ostringstream out;
  if (!title.empty()) out << "### " << title << "\n\n";
  out << "| FeatSet | DMAP | TMAP | FP | Private | Public | Total |\n"
      << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    out << "| " << r.feature_set << " | " << Fixed3(r.dmap) << " | "
        << Fixed3(r.tmap) << " | " << Fixed3(r.fp) << " | "
        << Optional3(r.private_score) << " | " << Optional3(r.public_score)
        << " | " << Optional3(r.total_score) << " |\n";
  }
  return out.str();
}

std::string ReportCsv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "FeatSet,DMAP,TMAP,FP,Private,Public,Total\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatNumber(*v) : std::string();
  };
  for (const auto& r : rows) {
    out << r.feature_set << ',' << FormatNumber(r.dmap) << ','
        << FormatNumber(r.tmap) << ',' << FormatNumber(r.fp) << ','
        << opt(r.private_score) << ',' << opt(r.public_score) << ','
        << opt(r.total_score) << '\n';
  }
  return out.str();
}

}  // namespace fog
