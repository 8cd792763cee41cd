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

#ifndef FOG_DATA_H_
#define FOG_DATA_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fog/tensor.h"

namespace fog {

enum class Domain { kDefog, kTdcsfog, kNotype };

std::string_view DomainName(Domain domain);
Domain ParseDomain(std::string_view name);
double SampleRateHz(Domain domain);

// Defog and Notype files store acceleration in g.
inline constexpr double kStandardGravity = 9.81;

enum class EventType { kStartHesitation = 0, kTurn = 1, kWalking = 2 };
inline constexpr std::size_t kNumEventTypes = 3;
inline constexpr std::array<std::string_view, kNumEventTypes> kEventColumns = {
    "StartHesitation", "Turn", "Walking"};

EventType ParseEventType(std::string_view name);

// One trial. Defog/Tdcsfog carry the three typed label columns, Notype a
// single untyped event column.
struct TimeSeries {
  std::string trial_id;
  Domain domain = Domain::kDefog;
  double sample_rate_hz = 124.0;
  std::vector<std::int64_t> time;
  std::vector<double> acc_v;
  std::vector<double> acc_ml;
  std::vector<double> acc_ap;
  std::array<std::vector<std::uint8_t>, kNumEventTypes> typed_labels;
  std::vector<std::uint8_t> event;
  bool units_harmonized = false;

  std::size_t length() const { return acc_v.size(); }
  bool has_typed_labels() const { return domain != Domain::kNotype; }

  // T x 3 label matrix (0/1). Throws for Notype series.
  Tensor LabelMatrix() const;

  // Throws kValidation when any invariant is broken.
  void Validate() const;
};

enum class Medication { kOn, kOff };
Medication ParseMedication(std::string_view value);
std::string_view MedicationName(Medication medication);

struct TrialMetadata {
  std::string trial_id;
  std::string subject_id;
  Medication medication = Medication::kOff;
};

enum class Sex { kMale, kFemale };
Sex ParseSex(std::string_view value);
std::string_view SexName(Sex sex);

struct Subject {
  std::string subject_id;
  double age = 0.0;
  Sex sex = Sex::kMale;
  double years_since_dx = 0.0;
  double updrs_on = 0.0;
  double updrs_off = 0.0;
  double nfogq = 0.0;
};

using MetadataMap = std::map<std::string, TrialMetadata>;
using SubjectMap = std::map<std::string, Subject>;

struct Dataset {
  std::vector<TimeSeries> series;
  MetadataMap metadata;
  SubjectMap subjects;
  // Parallel to `series`: true for trials whose labels came from
  // pseudo-labelling.
  std::vector<bool> pseudo;

  // Every series has metadata and every referenced subject exists.
  void CheckIntegrity() const;
};

// --- CSV ingestion ----------------------------------------------------------

TimeSeries LoadTimeSeries(const std::filesystem::path& path, Domain domain);
void WriteTimeSeries(const TimeSeries& series, const std::filesystem::path& path);

struct MetadataAndSubjects {
  MetadataMap metadata;
  SubjectMap subjects;
};

MetadataAndSubjects LoadMetadataAndSubjects(
    const std::vector<std::filesystem::path>& meta_paths,
    const std::filesystem::path& subject_path);

void WriteMetadata(const std::vector<TrialMetadata>& rows,
                   const std::filesystem::path& path);
void WriteSubjects(const std::vector<Subject>& rows,
                   const std::filesystem::path& path);

// Multiplies Defog/Notype channels by g. Throws if already harmonized.
TimeSeries HarmonizeUnits(TimeSeries series);

// Text form used for every numeric cell we write: at most 9 significant
// digits.
std::string FormatNumber(double value);

// Directory layout of a corpus root:
//   <root>/<split>/{defog,tdcsfog,notype}/<trial>.csv
//   <root>/defog_metadata.csv, <root>/tdcsfog_metadata.csv, <root>/subjects.csv
struct CorpusLayout {
  std::filesystem::path root;

  std::filesystem::path SeriesDir(std::string_view split, Domain domain) const;
  std::filesystem::path DefogMetadata() const;
  std::filesystem::path TdcsfogMetadata() const;
  std::filesystem::path Subjects() const;
};

// Loads every series of `domain` under `split` (sorted by trial id), with
// metadata and subjects. Series are returned unharmonized.
Dataset LoadDomain(const CorpusLayout& layout, std::string_view split,
                   Domain domain);

// --- Synthetic trials -------------------------------------------------------

struct Episode {
  EventType type = EventType::kStartHesitation;
  double start_s = 0.0;
  double length_s = 0.0;
};

// Seeded FOG-like trial in raw file units (units_harmonized = false). For
// Notype the episodes only set the untyped event column; the signal still
// carries the type-specific signature.
TimeSeries GenerateTrial(std::uint64_t seed, Domain domain, double duration_s,
                         const std::vector<Episode>& episodes,
                         std::string trial_id = "synthetic");

}  // namespace fog

#endif  // FOG_DATA_H_
