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

#include "fog/features.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

#include "fog/csv.h"
#include "fog/error.h"

namespace fog {
namespace {

const std::vector<std::string>& SetCColumns() {
  static const std::vector<std::string> columns = {
      "AccV", "AccML", "AccAP", "TimeFrac", "JerkV", "JerkML", "JerkAP"};
  return columns;
}

bool Contains(const std::vector<std::string>& columns, std::string_view name) {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

}  // namespace

FeatureSetId ParseFeatureSet(std::string_view name) {
  if (name.size() == 1) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    if (c >= 'A' && c <= 'G') return static_cast<FeatureSetId>(c - 'A');
  }
  Fail(ErrorKind::kValidation,
       "feature set must be one of A..G, got '" + std::string(name) + "'");
}

char FeatureSetName(FeatureSetId id) {
  return static_cast<char>('A' + static_cast<int>(id));
}

std::vector<std::string> FeatureColumns(FeatureSetId id,
                                        std::size_t cluster_count) {
  const auto& c = SetCColumns();
  std::vector<std::string> columns;
  switch (id) {
    case FeatureSetId::kA:
      columns.assign(c.begin(), c.begin() + 3);
      break;
    case FeatureSetId::kB:
      columns.assign(c.begin(), c.begin() + 4);
      break;
    case FeatureSetId::kC:
      columns = c;
      break;
    case FeatureSetId::kD:
      columns = c;
      columns.insert(columns.end(), {"AccM", "JerkM"});
      break;
    case FeatureSetId::kE:
      columns = c;
      columns.insert(columns.end(), {"Gender", "Medication"});
      break;
    case FeatureSetId::kF:
      columns = c;
      columns.insert(columns.end(), {"AccM", "JerkM", "Gender", "Medication"});
      break;
    case FeatureSetId::kG:
      columns = c;
      for (std::size_t k = 0; k < cluster_count; ++k) {
        columns.push_back("Cluster" + std::to_string(k));
      }
      break;
  }
  return columns;
}

std::vector<double> ComputeTimeFrac(std::size_t length) {
  if (length == 0) Fail(ErrorKind::kValidation, "TimeFrac of empty series");
  std::vector<double> frac(length, 0.0);
  if (length == 1) return frac;
  const double denom = static_cast<double>(length - 1);
  for (std::size_t i = 0; i < length; ++i) {
    frac[i] = static_cast<double>(i) / denom;
  }
  return frac;
}

std::vector<double> ComputeJerk(std::span<const double> channel,
                                double sample_rate_hz) {
  if (channel.empty()) Fail(ErrorKind::kValidation, "jerk of empty channel");
  std::vector<double> jerk(channel.size(), 0.0);
  for (std::size_t i = 1; i < channel.size(); ++i) {
    jerk[i] = (channel[i] - channel[i - 1]) * sample_rate_hz;
  }
  return jerk;
}

std::vector<double> ComputeMagnitude(std::span<const double> acc_v,
                                     std::span<const double> acc_ml,
                                     std::span<const double> acc_ap) {
  if (acc_v.size() != acc_ml.size() || acc_v.size() != acc_ap.size()) {
    Fail(ErrorKind::kShape, "magnitude: channel lengths differ");
  }
  std::vector<double> m(acc_v.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = std::sqrt(acc_v[i] * acc_v[i] + acc_ml[i] * acc_ml[i] +
                     acc_ap[i] * acc_ap[i]);
  }
  return m;
}

FeatureMatrix BuildFeatureMatrix(const TimeSeries& series, FeatureSetId set,
                                 const TrialMetadata& meta,
                                 const Subject& subject,
                                 const SubjectClusters* clusters) {
  if (!series.units_harmonized) {
    Fail(ErrorKind::kValidation,
         series.trial_id + ": features require harmonized units");
  }
  if (meta.subject_id != subject.subject_id) {
    Fail(ErrorKind::kIntegrity, series.trial_id + ": subject record mismatch");
  }
  std::size_t cluster_count = 0;
  std::size_t cluster = 0;
  if (set == FeatureSetId::kG) {
    if (clusters == nullptr) {
      Fail(ErrorKind::kMissingDependency,
           "feature set G requires subject clusters");
    }
    auto it = clusters->assignment.find(subject.subject_id);
    if (it == clusters->assignment.end()) {
      Fail(ErrorKind::kIntegrity,
           "subject " + subject.subject_id + " missing from cluster map");
    }
    cluster_count = clusters->k;
    cluster = it->second;
  }

  FeatureMatrix matrix;
  matrix.trial_id = series.trial_id;
  matrix.set_id = set;
  matrix.columns = FeatureColumns(set, cluster_count);
  const std::size_t n = series.length();
  matrix.values = Tensor(n, matrix.columns.size());

  std::vector<double> jerk_v, jerk_ml, jerk_ap, magnitude, jerk_m;
  const auto& cols = matrix.columns;
  if (Contains(cols, "JerkV")) {
    jerk_v = ComputeJerk(series.acc_v, series.sample_rate_hz);
    jerk_ml = ComputeJerk(series.acc_ml, series.sample_rate_hz);
    jerk_ap = ComputeJerk(series.acc_ap, series.sample_rate_hz);
  }
  if (Contains(cols, "AccM")) {
    magnitude = ComputeMagnitude(series.acc_v, series.acc_ml, series.acc_ap);
    jerk_m = ComputeJerk(magnitude, series.sample_rate_hz);
  }
  std::vector<double> time_frac;
  if (Contains(cols, "TimeFrac")) time_frac = ComputeTimeFrac(n);
  const double gender = subject.sex == Sex::kMale ? 1.0 : 0.0;
  const double medication = meta.medication == Medication::kOn ? 1.0 : 0.0;

  for (std::size_t c = 0; c < cols.size(); ++c) {
    const std::string& name = cols[c];
    const std::vector<double>* source = nullptr;
    double constant = 0.0;
    if (name == "AccV") source = &series.acc_v;
    else if (name == "AccML") source = &series.acc_ml;
    else if (name == "AccAP") source = &series.acc_ap;
    else if (name == "TimeFrac") source = &time_frac;
    else if (name == "JerkV") source = &jerk_v;
    else if (name == "JerkML") source = &jerk_ml;
    else if (name == "JerkAP") source = &jerk_ap;
    else if (name == "AccM") source = &magnitude;
    else if (name == "JerkM") source = &jerk_m;
    else if (name == "Gender") constant = gender;
    else if (name == "Medication") constant = medication;
    else constant = name == "Cluster" + std::to_string(cluster) ? 1.0 : 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      matrix.values(t, c) = source ? (*source)[t] : constant;
    }
  }
  return matrix;
}

FeatureMatrix BuildFeatureMatrix(const TimeSeries& series, FeatureSetId set,
                                 const Dataset& dataset,
                                 const SubjectClusters* clusters) {
  auto meta = dataset.metadata.find(series.trial_id);
  if (meta == dataset.metadata.end()) {
    Fail(ErrorKind::kIntegrity, "no metadata for trial " + series.trial_id);
  }
  auto subject = dataset.subjects.find(meta->second.subject_id);
  if (subject == dataset.subjects.end()) {
    Fail(ErrorKind::kIntegrity, "unknown subject " + meta->second.subject_id);
  }
  return BuildFeatureMatrix(series, set, meta->second, subject->second,
                            clusters);
}

SummaryVector FileSummaryVector(const TimeSeries& series) {
  if (series.length() == 0) {
    Fail(ErrorKind::kValidation, series.trial_id + ": empty series");
  }
  SummaryVector summary;
  summary.trial_id = series.trial_id;
  const std::array<const std::vector<double>*, 3> channels = {
      &series.acc_v, &series.acc_ml, &series.acc_ap};
  for (std::size_t c = 0; c < 3; ++c) {
    const auto& x = *channels[c];
    const double n = static_cast<double>(x.size());
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / n;
    double sq = 0.0;
    for (double v : x) sq += (v - mean) * (v - mean);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    summary.values[4 * c + 0] = mean;
    summary.values[4 * c + 1] = *hi;
    summary.values[4 * c + 2] = *lo;
    summary.values[4 * c + 3] = std::sqrt(sq / n);
  }
  return summary;
}

bool IsStandardizedColumn(std::string_view column) {
  return column.starts_with("Acc") || column.starts_with("Jerk");
}

ColumnStats FitColumnStats(std::span<const FeatureMatrix> matrices) {
  if (matrices.empty()) Fail(ErrorKind::kValidation, "no matrices to fit");
  ColumnStats stats;
  stats.columns = matrices.front().columns;
  const std::size_t d = stats.columns.size();
  stats.mean.assign(d, 0.0);
  stats.stddev.assign(d, 0.0);
  double count = 0.0;
  for (const auto& m : matrices) {
    if (m.columns != stats.columns) {
      Fail(ErrorKind::kShape, "column layouts differ across matrices");
    }
    for (std::size_t t = 0; t < m.length(); ++t) {
      for (std::size_t c = 0; c < d; ++c) stats.mean[c] += m.values(t, c);
    }
    count += static_cast<double>(m.length());
  }
  for (double& v : stats.mean) v /= count;
  for (const auto& m : matrices) {
    for (std::size_t t = 0; t < m.length(); ++t) {
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = m.values(t, c) - stats.mean[c];
        stats.stddev[c] += diff * diff;
      }
    }
  }
  for (double& v : stats.stddev) v = std::sqrt(v / count);
  return stats;
}

FeatureMatrix Standardize(FeatureMatrix matrix, const ColumnStats& stats) {
  if (matrix.columns != stats.columns) {
    Fail(ErrorKind::kShape, matrix.trial_id + ": stats were fitted on a "
                                              "different column layout");
  }
  for (std::size_t c = 0; c < matrix.dim(); ++c) {
    if (!IsStandardizedColumn(matrix.columns[c]) || stats.stddev[c] == 0.0) {
      continue;
    }
    for (std::size_t t = 0; t < matrix.length(); ++t) {
      matrix.values(t, c) = (matrix.values(t, c) - stats.mean[c]) / stats.stddev[c];
    }
  }
  return matrix;
}

std::string FeatureFingerprint(FeatureSetId id,
                               const std::vector<std::string>& columns) {
  // FNV-1a, 64 bit.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](std::string_view s) {
    for (unsigned char c : s) {
      hash ^= c;
      hash *= 0x100000001b3ULL;
    }
    hash ^= 0xff;
    hash *= 0x100000001b3ULL;
  };
  mix(std::string(1, FeatureSetName(id)));
  for (const auto& c : columns) mix(c);
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

void WriteFeatureMatrix(const FeatureMatrix& matrix,
                        const std::filesystem::path& path) {
  std::ostringstream out;
  for (std::size_t c = 0; c < matrix.dim(); ++c) {
    out << (c ? "," : "") << matrix.columns[c];
  }
  out << '\n';
  for (std::size_t t = 0; t < matrix.length(); ++t) {
    for (std::size_t c = 0; c < matrix.dim(); ++c) {
      out << (c ? "," : "") << FormatNumber(matrix.values(t, c));
    }
    out << '\n';
  }
  csv::WriteText(path, out.str());
}

}  // namespace fog
