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

#include "fog/data.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "fog/csv.h"
#include "fog/error.h"
#include "fog/log.h"
#include "fog/random.h"

namespace fog {
namespace {

constexpr std::array<std::string_view, 4> kChannelColumns = {"Time", "AccV",
                                                             "AccML", "AccAP"};

std::vector<std::string_view> SchemaFor(Domain domain) {
  std::vector<std::string_view> columns(kChannelColumns.begin(),
                                        kChannelColumns.end());
  if (domain == Domain::kNotype) {
    columns.push_back("Event");
  } else {
    columns.insert(columns.end(), kEventColumns.begin(), kEventColumns.end());
  }
  return columns;
}

std::uint8_t ParseFlag(const csv::Table& table, std::size_t row,
                       std::size_t col) {
  const double value = csv::ParseDouble(table, row, col);
  if (value != 0.0 && value != 1.0) {
    Fail(ErrorKind::kParse, table.source.string() + ": row " +
                                std::to_string(row) + ", column " +
                                table.header[col] + ": label must be 0 or 1");
  }
  return value == 1.0 ? 1 : 0;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view DomainName(Domain domain) {
  switch (domain) {
    case Domain::kDefog:
      return "defog";
    case Domain::kTdcsfog:
      return "tdcsfog";
    case Domain::kNotype:
      return "notype";
  }
  return "unknown";
}

Domain ParseDomain(std::string_view name) {
  const std::string lower = Lower(name);
  if (lower == "defog") return Domain::kDefog;
  if (lower == "tdcsfog") return Domain::kTdcsfog;
  if (lower == "notype") return Domain::kNotype;
  Fail(ErrorKind::kValidation, "unknown domain '" + std::string(name) + "'");
}

double SampleRateHz(Domain domain) {
  return domain == Domain::kTdcsfog ? 100.0 : 124.0;
}

EventType ParseEventType(std::string_view name) {
  const std::string lower = Lower(name);
  if (lower == "starthesitation" || lower == "start_hesitation") {
    return EventType::kStartHesitation;
  }
  if (lower == "turn") return EventType::kTurn;
  if (lower == "walking") return EventType::kWalking;
  Fail(ErrorKind::kValidation, "unknown event type '" + std::string(name) + "'");
}

Medication ParseMedication(std::string_view value) {
  const std::string lower = Lower(value);
  if (lower == "on") return Medication::kOn;
  if (lower == "off") return Medication::kOff;
  Fail(ErrorKind::kValidation,
       "medication must be 'on' or 'off', got '" + std::string(value) + "'");
}

std::string_view MedicationName(Medication medication) {
  return medication == Medication::kOn ? "on" : "off";
}

Sex ParseSex(std::string_view value) {
  const std::string lower = Lower(value);
  if (lower == "m" || lower == "male") return Sex::kMale;
  if (lower == "f" || lower == "female") return Sex::kFemale;
  Fail(ErrorKind::kValidation, "unknown sex '" + std::string(value) + "'");
}

std::string_view SexName(Sex sex) { return sex == Sex::kMale ? "M" : "F"; }

Tensor TimeSeries::LabelMatrix() const {
  if (!has_typed_labels()) {
    Fail(ErrorKind::kValidation,
         trial_id + ": Notype series has no typed labels");
  }
  Tensor labels(length(), kNumEventTypes);
  for (std::size_t t = 0; t < length(); ++t) {
    for (std::size_t k = 0; k < kNumEventTypes; ++k) {
      labels(t, k) = typed_labels[k][t];
    }
  }
  return labels;
}

void TimeSeries::Validate() const {
  const std::size_t n = length();
  auto fail = [&](const std::string& what) {
    Fail(ErrorKind::kValidation, trial_id + ": " + what);
  };
  if (n == 0) fail("empty series");
  if (acc_ml.size() != n || acc_ap.size() != n) fail("channel lengths differ");
  if (!time.empty() && time.size() != n) fail("time column length differs");
  if (sample_rate_hz != SampleRateHz(domain)) {
    fail("sample rate does not match domain " + std::string(DomainName(domain)));
  }
  if (has_typed_labels()) {
    for (const auto& column : typed_labels) {
      if (column.size() != n) fail("label column length differs");
    }
    for (std::size_t t = 0; t < n; ++t) {
      const int active =
          typed_labels[0][t] + typed_labels[1][t] + typed_labels[2][t];
      if (active > 1) {
        fail("more than one event type active at row " + std::to_string(t));
      }
    }
  } else if (event.size() != n) {
    fail("event column length differs");
  }
}

void Dataset::CheckIntegrity() const {
  if (!pseudo.empty() && pseudo.size() != series.size()) {
    Fail(ErrorKind::kIntegrity, "pseudo flags do not match series count");
  }
  std::set<std::string> ids;
  for (const auto& s : series) {
    if (!ids.insert(s.trial_id).second) {
      Fail(ErrorKind::kIntegrity, "duplicate trial id " + s.trial_id);
    }
    if (!metadata.contains(s.trial_id)) {
      Fail(ErrorKind::kIntegrity, "no metadata for trial " + s.trial_id);
    }
  }
  for (const auto& [id, meta] : metadata) {
    if (!subjects.contains(meta.subject_id)) {
      Fail(ErrorKind::kIntegrity, "trial " + id + " references unknown subject " +
                                      meta.subject_id);
    }
  }
}

std::string FormatNumber(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

TimeSeries LoadTimeSeries(const std::filesystem::path& path, Domain domain) {
  const csv::Table table = csv::Read(path);
  const auto schema = SchemaFor(domain);
  std::vector<std::size_t> index;
  for (auto column : schema) index.push_back(table.Require(column));
  for (const auto& column : table.header) {
    if (std::find(schema.begin(), schema.end(), column) == schema.end()) {
      Warn(path.string() + ": ignoring extra column '" + column + "'");
    }
  }

  TimeSeries series;
  series.trial_id = path.stem().string();
  series.domain = domain;
  series.sample_rate_hz = SampleRateHz(domain);
  const std::size_t n = table.rows.size();
  series.time.reserve(n);
  series.acc_v.reserve(n);
  series.acc_ml.reserve(n);
  series.acc_ap.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    series.time.push_back(csv::ParseInt(table, r, index[0]));
    series.acc_v.push_back(csv::ParseDouble(table, r, index[1]));
    series.acc_ml.push_back(csv::ParseDouble(table, r, index[2]));
    series.acc_ap.push_back(csv::ParseDouble(table, r, index[3]));
    if (domain == Domain::kNotype) {
      series.event.push_back(ParseFlag(table, r, index[4]));
    } else {
      for (std::size_t k = 0; k < kNumEventTypes; ++k) {
        series.typed_labels[k].push_back(ParseFlag(table, r, index[4 + k]));
      }
    }
  }
  if (n == 0) Fail(ErrorKind::kParse, path.string() + ": no data rows");
  series.Validate();
  return series;
}

void WriteTimeSeries(const TimeSeries& series,
                     const std::filesystem::path& path) {
  series.Validate();
  std::ostringstream out;
  const auto schema = SchemaFor(series.domain);
  for (std::size_t i = 0; i < schema.size(); ++i) {
    out << (i ? "," : "") << schema[i];
  }
  out << '\n';
  for (std::size_t t = 0; t < series.length(); ++t) {
    const std::int64_t time =
        series.time.empty() ? static_cast<std::int64_t>(t) : series.time[t];
    out << time << ',' << FormatNumber(series.acc_v[t]) << ','
        << FormatNumber(series.acc_ml[t]) << ',' << FormatNumber(series.acc_ap[t]);
    if (series.has_typed_labels()) {
      for (const auto& column : series.typed_labels) {
        out << ',' << static_cast<int>(column[t]);
      }
    } else {
      out << ',' << static_cast<int>(series.event[t]);
    }
    out << '\n';
  }
  csv::WriteText(path, out.str());
}

MetadataAndSubjects LoadMetadataAndSubjects(
    const std::vector<std::filesystem::path>& meta_paths,
    const std::filesystem::path& subject_path) {
  MetadataAndSubjects result;
  for (const auto& path : meta_paths) {
    const csv::Table table = csv::Read(path);
    const std::size_t id = table.Require("Id");
    const std::size_t subject = table.Require("Subject");
    const std::size_t medication = table.Require("Medication");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      TrialMetadata meta{row[id], row[subject], Medication::kOff};
      try {
        meta.medication = ParseMedication(row[medication]);
      } catch (const Error& e) {
        Fail(ErrorKind::kValidation,
             path.string() + ": row " + std::to_string(r) + ": " + e.what());
      }
      if (!result.metadata.emplace(meta.trial_id, meta).second) {
        Fail(ErrorKind::kIntegrity,
             path.string() + ": duplicate trial id " + meta.trial_id);
      }
    }
  }

  const csv::Table table = csv::Read(subject_path);
  const std::size_t id = table.Require("Subject");
  const std::size_t age = table.Require("Age");
  const std::size_t sex = table.Require("Sex");
  const std::size_t years = table.Require("YearsSinceDx");
  const std::size_t updrs_on = table.Require("UPDRS_On");
  const std::size_t updrs_off = table.Require("UPDRS_Off");
  const std::size_t nfogq = table.Require("NFOGQ");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    Subject s;
    s.subject_id = table.rows[r][id];
    s.age = csv::ParseDouble(table, r, age);
    s.sex = ParseSex(table.rows[r][sex]);
    s.years_since_dx = csv::ParseDouble(table, r, years);
    s.updrs_on = csv::ParseDouble(table, r, updrs_on);
    s.updrs_off = csv::ParseDouble(table, r, updrs_off);
    s.nfogq = csv::ParseDouble(table, r, nfogq);
    if (s.age <= 0.0 || s.nfogq < 0.0) {
      Fail(ErrorKind::kValidation, subject_path.string() + ": row " +
                                       std::to_string(r) +
                                       ": age must be > 0 and NFOGQ >= 0");
    }
    if (!result.subjects.emplace(s.subject_id, s).second) {
      Fail(ErrorKind::kIntegrity,
           subject_path.string() + ": duplicate subject " + s.subject_id);
    }
  }
  return result;
}

void WriteMetadata(const std::vector<TrialMetadata>& rows,
                   const std::filesystem::path& path) {
  std::ostringstream out;
  out << "Id,Subject,Medication\n";
  for (const auto& row : rows) {
    out << row.trial_id << ',' << row.subject_id << ','
        << MedicationName(row.medication) << '\n';
  }
  csv::WriteText(path, out.str());
}

void WriteSubjects(const std::vector<Subject>& rows,
                   const std::filesystem::path& path) {
  std::ostringstream out;
  out << "Subject,Age,Sex,YearsSinceDx,UPDRS_On,UPDRS_Off,NFOGQ\n";
  for (const auto& s : rows) {
    out << s.subject_id << ',' << FormatNumber(s.age) << ',' << SexName(s.sex)
        << ',' << FormatNumber(s.years_since_dx) << ','
        << FormatNumber(s.updrs_on) << ',' << FormatNumber(s.updrs_off) << ','
        << FormatNumber(s.nfogq) << '\n';
  }
  csv::WriteText(path, out.str());
}

TimeSeries HarmonizeUnits(TimeSeries series) {
  if (series.units_harmonized) {
    Fail(ErrorKind::kValidation,
         series.trial_id + ": units already harmonized");
  }
  if (series.domain != Domain::kTdcsfog) {
    for (auto* channel : {&series.acc_v, &series.acc_ml, &series.acc_ap}) {
      for (double& v : *channel) v *= kStandardGravity;
    }
  }
  series.units_harmonized = true;
  return series;
}

std::filesystem::path CorpusLayout::SeriesDir(std::string_view split,
                                              Domain domain) const {
  return root / std::string(split) / std::string(DomainName(domain));
}

std::filesystem::path CorpusLayout::DefogMetadata() const {
  return root / "defog_metadata.csv";
}

std::filesystem::path CorpusLayout::TdcsfogMetadata() const {
  return root / "tdcsfog_metadata.csv";
}

std::filesystem::path CorpusLayout::Subjects() const {
  return root / "subjects.csv";
}

Dataset LoadDomain(const CorpusLayout& layout, std::string_view split,
                   Domain domain) {
  const auto dir = layout.SeriesDir(split, domain);
  if (!std::filesystem::is_directory(dir)) {
    Fail(ErrorKind::kIo, "missing series directory " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<std::filesystem::path> meta_paths;
  for (const auto& p : {layout.DefogMetadata(), layout.TdcsfogMetadata()}) {
    if (std::filesystem::exists(p)) meta_paths.push_back(p);
  }
  auto meta = LoadMetadataAndSubjects(meta_paths, layout.Subjects());

  Dataset dataset;
  dataset.metadata = std::move(meta.metadata);
  dataset.subjects = std::move(meta.subjects);
  for (const auto& file : files) {
    dataset.series.push_back(LoadTimeSeries(file, domain));
  }
  dataset.pseudo.assign(dataset.series.size(), false);
  dataset.CheckIntegrity();
  return dataset;
}

TimeSeries GenerateTrial(std::uint64_t seed, Domain domain, double duration_s,
                         const std::vector<Episode>& episodes,
                         std::string trial_id) {
  if (!(duration_s > 0.0)) {
    Fail(ErrorKind::kValidation, "duration must be positive");
  }
  const double rate = SampleRateHz(domain);
  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate));
  if (n == 0) Fail(ErrorKind::kValidation, "duration shorter than one sample");

  std::vector<Episode> sorted = episodes;
  for (const auto& e : sorted) {
    const int type = static_cast<int>(e.type);
    if (type < 0 || type >= static_cast<int>(kNumEventTypes)) {
      Fail(ErrorKind::kValidation, "invalid episode type " + std::to_string(type));
    }
    if (e.start_s < 0.0 || e.length_s <= 0.0 ||
        e.start_s + e.length_s > duration_s) {
      Fail(ErrorKind::kValidation, "episode outside [0, duration]");
    }
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Episode& a, const Episode& b) { return a.start_s < b.start_s; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].start_s < sorted[i - 1].start_s + sorted[i - 1].length_s) {
      Fail(ErrorKind::kValidation, "episodes overlap");
    }
  }

  TimeSeries series;
  series.trial_id = std::move(trial_id);
  series.domain = domain;
  series.sample_rate_hz = rate;
  series.time.resize(n);
  series.acc_v.resize(n);
  series.acc_ml.resize(n);
  series.acc_ap.resize(n);
  if (domain == Domain::kNotype) {
    series.event.assign(n, 0);
  } else {
    for (auto& column : series.typed_labels) column.assign(n, 0);
  }

  // Per-timestep episode type, or -1 outside episodes.
  std::vector<int> active(n, -1);
  for (const auto& e : sorted) {
    const auto begin = static_cast<std::size_t>(std::llround(e.start_s * rate));
    const auto end = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::llround((e.start_s + e.length_s) * rate)));
    for (std::size_t t = begin; t < end; ++t) active[t] = static_cast<int>(e.type);
  }

  Rng rng(seed);
  const double f1 = rng.Uniform(0.9, 1.1);
  const double f2 = rng.Uniform(1.8, 2.2);
  // Lab walking is more vigorous than at-home recordings.
  const double regime = domain == Domain::kTdcsfog ? 1.5 : 1.0;
  constexpr std::array<double, 3> kAmp1 = {1.0, 0.6, 0.8};
  constexpr std::array<double, 3> kAmp2 = {0.5, 0.3, 0.4};
  constexpr double kDamping = 0.5;
  constexpr double kTremorHz = 6.0;
  constexpr double kTremorPrimary = 1.2;
  constexpr double kTremorSecondary = 0.3;
  constexpr double kNoiseSigma = 0.1;
  std::array<double, 3> phase1{}, phase2{};
  for (std::size_t c = 0; c < 3; ++c) {
    phase1[c] = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    phase2[c] = rng.Uniform(0.0, 2.0 * std::numbers::pi);
  }
  const double tremor_phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);

  std::array<std::vector<double>*, 3> channels = {&series.acc_v, &series.acc_ml,
                                                  &series.acc_ap};
  const double to_file_units =
      domain == Domain::kTdcsfog ? 1.0 : 1.0 / kStandardGravity;
  for (std::size_t t = 0; t < n; ++t) {
    const double seconds = static_cast<double>(t) / rate;
    const int type = active[t];
    const double envelope = type >= 0 ? kDamping : 1.0;
    for (std::size_t c = 0; c < 3; ++c) {
      double a = regime * envelope *
                 (kAmp1[c] * std::sin(2.0 * std::numbers::pi * f1 * seconds + phase1[c]) +
                  kAmp2[c] * std::sin(2.0 * std::numbers::pi * f2 * seconds + phase2[c]));
      if (type >= 0) {
        // The dominant tremor axis encodes the event type.
        const double amp = static_cast<std::size_t>(type) == c ? kTremorPrimary
                                                               : kTremorSecondary;
        a += amp * std::sin(2.0 * std::numbers::pi * kTremorHz * seconds + tremor_phase);
      }
      if (c == 0) a -= kStandardGravity;
      a += kNoiseSigma * rng.Normal();
      (*channels[c])[t] = a * to_file_units;
    }
    series.time[t] = static_cast<std::int64_t>(t);
    if (type >= 0) {
      if (domain == Domain::kNotype) {
        series.event[t] = 1;
      } else {
        series.typed_labels[static_cast<std::size_t>(type)][t] = 1;
      }
    }
  }
  return series;
}

}  // namespace fog
