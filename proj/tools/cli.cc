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

#include "cli.h"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fog/csv.h"
#include "fog/data.h"
#include "fog/error.h"
#include "fog/evaluation.h"
#include "fog/features.h"
#include "fog/gradcheck_suite.h"
#include "fog/pseudolabel.h"
#include "fog/stats.h"
#include "fog/synthetic.h"
#include "fog/training.h"

namespace fog::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kResolvedConfigFile = "resolved_config.txt";
constexpr double kPrivateFraction = kPrivateWeight;

std::string Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

template <typename T>
T ParseNumber(const Settings& settings, const std::string& key) {
  const std::string& text = settings.at(key);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    Fail(ErrorKind::kParse, "config key " + key + ": cannot parse '" + text + "'");
  }
  return value;
}

bool ParseBool(const Settings& settings, const std::string& key) {
  const std::string& text = settings.at(key);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  Fail(ErrorKind::kParse, "config key " + key + ": expected true or false");
}

std::uint64_t Fnv1a(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

// Flags shared by the subcommands. Only the ones a subcommand registers are
// ever set.
struct Flags {
  std::optional<std::string> config, data, out, domain, feature_set, seed,
      clusters, pseudo_dir, split;
  std::vector<std::string> group_manifests;
  std::optional<std::size_t> defog_trials, tdcsfog_trials, notype_trials,
      test_trials, subjects, k, seeds;
};

struct Context {
  Settings settings;
  std::ostream& out;
  std::ostream& err;
};

Settings Resolve(const Flags& flags) {
  Settings settings = DefaultSettings();
  if (const char* root = std::getenv(kDataRootVariable)) {
    settings["data_root"] = root;
  }
  if (flags.config) {
    Overlay(settings, ParseConfigText(csv::ReadText(*flags.config), *flags.config),
            *flags.config);
  }
  Settings overrides;
  auto put = [&](const char* key, const auto& value) {
    if (value) {
      std::ostringstream s;
      s << *value;
      overrides[key] = s.str();
    }
  };
  put("data_root", flags.data);
  put("out", flags.out);
  put("domain", flags.domain);
  put("feature_set", flags.feature_set);
  put("seed", flags.seed);
  put("clusters", flags.clusters);
  put("pseudo_dir", flags.pseudo_dir);
  put("split", flags.split);
  put("defog_trials", flags.defog_trials);
  put("tdcsfog_trials", flags.tdcsfog_trials);
  put("notype_trials", flags.notype_trials);
  put("test_trials", flags.test_trials);
  put("subjects", flags.subjects);
  put("cluster_count", flags.k);
  Overlay(settings, overrides, "command line");
  return settings;
}

const std::string& Require(const Settings& settings, const std::string& key,
                           const std::string& flag) {
  const std::string& value = settings.at(key);
  if (value.empty()) throw UsageError(flag + " is required");
  return value;
}

fs::path OutDir(const Context& ctx, const std::string& command) {
  const fs::path out = Require(ctx.settings, "out", "--out");
  fs::create_directories(out);
  csv::WriteText(out / kResolvedConfigFile, SettingsText(ctx.settings, command));
  return out;
}

CorpusLayout Layout(const Settings& settings) {
  const std::string& root = settings.at("data_root");
  if (root.empty()) {
    throw UsageError(std::string("--data is required (or set ") +
                     kDataRootVariable + ")");
  }
  return CorpusLayout{root};
}

Domain TypedDomain(const Settings& settings) {
  const Domain d = ParseDomain(Require(settings, "domain", "--domain"));
  if (d == Domain::kNotype) {
    throw UsageError("--domain must be defog or tdcsfog");
  }
  return d;
}

std::optional<SubjectClusters> MaybeClusters(const Settings& settings,
                                             FeatureSetId set) {
  const std::string& path = settings.at("clusters");
  if (!path.empty()) return LoadSubjectClusters(path);
  if (set == FeatureSetId::kG) {
    Fail(ErrorKind::kMissingDependency,
         "feature set G needs subject clusters: run cluster-subjects and pass "
         "--clusters");
  }
  return std::nullopt;
}

const SubjectClusters* Ptr(const std::optional<SubjectClusters>& c) {
  return c ? &*c : nullptr;
}

std::string Fixed(double v) { return FormatNumber(v); }

// --- subcommands ----------------------------------------------------------

int Synth(Context& ctx) {
  const fs::path out = OutDir(ctx, "synth");
  SyntheticCorpusOptions options;
  const auto& s = ctx.settings;
  options.seed = ParseNumber<std::uint64_t>(s, "seed");
  options.defog_trials = ParseNumber<std::size_t>(s, "defog_trials");
  options.tdcsfog_trials = ParseNumber<std::size_t>(s, "tdcsfog_trials");
  options.notype_trials = ParseNumber<std::size_t>(s, "notype_trials");
  options.test_trials = ParseNumber<std::size_t>(s, "test_trials");
  options.subjects = ParseNumber<std::size_t>(s, "subjects");
  const auto summary = WriteSyntheticCorpus(options, out);
  ctx.out << "series=" << summary.series << " subjects=" << summary.subjects
          << " root=" << out.string() << "\n";
  return kExitOk;
}

int Validate(Context& ctx) {
  const CorpusLayout layout = Layout(ctx.settings);
  nlohmann::json report = nlohmann::json::object();
  std::size_t total = 0;
  for (const char* split : {"train", "test"}) {
    for (Domain d : {Domain::kDefog, Domain::kTdcsfog, Domain::kNotype}) {
      if (!fs::is_directory(layout.SeriesDir(split, d))) continue;
      const Dataset dataset = LoadDomain(layout, split, d);
      dataset.CheckIntegrity();
      for (const auto& series : dataset.series) HarmonizeUnits(series).Validate();
      const std::string key = std::string(split) + "/" + std::string(DomainName(d));
      report[key] = dataset.series.size();
      total += dataset.series.size();
      ctx.out << key << ": " << dataset.series.size() << " series ok\n";
    }
  }
  if (total == 0) {
    Fail(ErrorKind::kIo, "no series found under " + layout.root.string());
  }
  if (!ctx.settings.at("out").empty()) {
    csv::WriteText(OutDir(ctx, "validate") / "validation.json", report.dump(2) + "\n");
  }
  return kExitOk;
}

int Features(Context& ctx) {
  const CorpusLayout layout = Layout(ctx.settings);
  const Domain domain = ParseDomain(Require(ctx.settings, "domain", "--domain"));
  const FeatureSetId set = ParseFeatureSet(ctx.settings.at("feature_set"));
  const auto clusters = MaybeClusters(ctx.settings, set);
  const fs::path out = OutDir(ctx, "features");
  const Dataset dataset = LoadDomain(layout, ctx.settings.at("split"), domain);
  for (const auto& series : dataset.series) {
    const FeatureMatrix m =
        BuildFeatureMatrix(HarmonizeUnits(series), set, dataset, Ptr(clusters));
    WriteFeatureMatrix(m, out / (m.trial_id + ".csv"));
  }
  ctx.out << "matrices=" << dataset.series.size() << " set=" << FeatureSetName(set)
          << " columns=" << FeatureColumns(set, clusters ? clusters->k : 0).size()
          << "\n";
  return kExitOk;
}

int ClusterSubjectsCommand(Context& ctx) {
  const CorpusLayout layout = Layout(ctx.settings);
  const auto k = ParseNumber<std::size_t>(ctx.settings, "cluster_count");
  const auto seed = ParseNumber<std::uint64_t>(ctx.settings, "seed");
  const fs::path out = OutDir(ctx, "cluster-subjects");
  const auto meta = LoadMetadataAndSubjects({}, layout.Subjects());
  const SubjectClusters clusters = ClusterSubjects(meta.subjects, k, seed);
  WriteSubjectClusters(clusters, out / "subject_clusters.csv");
  ctx.out << "subjects=" << clusters.assignment.size() << " k=" << clusters.k
          << "\n";
  return kExitOk;
}

int AnalyzeSeparationCommand(Context& ctx) {
  const CorpusLayout layout = Layout(ctx.settings);
  const fs::path out = OutDir(ctx, "analyze-separation");
  std::vector<SummaryVector> summaries;
  std::vector<Domain> domains;
  for (Domain d : {Domain::kDefog, Domain::kTdcsfog}) {
    const Dataset dataset = LoadDomain(layout, ctx.settings.at("split"), d);
    for (const auto& series : dataset.series) {
      summaries.push_back(FileSummaryVector(series));
      domains.push_back(d);
    }
  }
  const SeparationAnalysis analysis = AnalyzeSeparation(summaries, domains);
  WriteSeparationCsv(analysis, out / "separation.csv");
  WriteSeparationSvg(analysis, out / "separation.svg");
  const nlohmann::json summary = {{"trials", summaries.size()},
                                  {"silhouette", analysis.silhouette},
                                  {"explained_variance",
                                   analysis.explained_variance}};
  csv::WriteText(out / "separation.json", summary.dump(2) + "\n");
  ctx.out << "silhouette=" << Fixed(analysis.silhouette) << "\n";
  return kExitOk;
}

int TrainOn(Context& ctx, const Dataset& dataset, Domain domain,
            const std::string& command) {
  const TrainConfig config = TrainConfigFromSettings(ctx.settings);
  const auto clusters = MaybeClusters(ctx.settings, config.feature_set);
  const fs::path out = OutDir(ctx, command);
  const auto trials = PrepareTrials(dataset, config.feature_set, Ptr(clusters));
  const ModelGroup group = TrainModelGroup(trials, config, domain);
  const fs::path manifest = SaveModelGroup(group, out);
  ctx.out << "group=" << group.group_id << " map=" << Fixed(group.group_map)
          << " manifest=" << manifest.string() << "\n";
  return kExitOk;
}

int Train(Context& ctx) {
  const Domain domain = TypedDomain(ctx.settings);
  const Dataset dataset = LoadDomain(Layout(ctx.settings), "train", domain);
  return TrainOn(ctx, dataset, domain, "train");
}

int Retrain(Context& ctx) {
  if (!ctx.settings.at("domain").empty() &&
      TypedDomain(ctx.settings) != Domain::kDefog) {
    throw UsageError("retrain augments the defog domain only");
  }
  const FeatureSetId set = ParseFeatureSet(ctx.settings.at("feature_set"));
  const Dataset defog = LoadDomain(Layout(ctx.settings), "train", Domain::kDefog);
  const auto pseudo =
      LoadPseudoLabeled(Require(ctx.settings, "pseudo_dir", "--pseudo-dir"));
  const Dataset merged = BuildAugmentedDataset(defog, pseudo, set);
  return TrainOn(ctx, merged, Domain::kDefog, "retrain");
}

Tensor PredictSeries(const ModelGroup& group, const Dataset& dataset,
                     const TimeSeries& series, const SubjectClusters* clusters) {
  const TimeSeries harmonized =
      series.units_harmonized ? series : HarmonizeUnits(series);
  return PredictGroup(group, BuildFeatureMatrix(harmonized, group.feature_set,
                                                dataset, clusters));
}

std::string PredictionCsv(const TimeSeries& series, const Tensor& p) {
  std::ostringstream s;
  s << "Time";
  for (auto name : kEventColumns) s << ',' << name;
  s << '\n';
  for (std::size_t t = 0; t < p.rows(); ++t) {
    s << series.time[t];
    for (std::size_t c = 0; c < p.cols(); ++c) s << ',' << FormatNumber(p(t, c));
    s << '\n';
  }
  return s.str();
}

const std::string& SingleManifest(const Flags& flags) {
  if (flags.group_manifests.size() != 1) {
    throw UsageError("exactly one --group-manifest is required");
  }
  return flags.group_manifests.front();
}

int Predict(Context& ctx, const Flags& flags) {
  const Domain domain = TypedDomain(ctx.settings);
  const ModelGroup group = LoadModelGroup(SingleManifest(flags));
  if (group.domain != domain) {
    Fail(ErrorKind::kValidation,
         "group " + group.group_id + " was trained on " +
             std::string(DomainName(group.domain)) + ", not " +
             std::string(DomainName(domain)));
  }
  const auto clusters = MaybeClusters(ctx.settings, group.feature_set);
  const fs::path out = OutDir(ctx, "predict");
  const Dataset dataset =
      LoadDomain(Layout(ctx.settings), ctx.settings.at("split"), domain);
  std::vector<Tensor> predictions, labels;
  for (const auto& series : dataset.series) {
    Tensor p = PredictSeries(group, dataset, series, Ptr(clusters));
    csv::WriteText(out / (series.trial_id + ".csv"), PredictionCsv(series, p));
    labels.push_back(series.LabelMatrix());
    predictions.push_back(std::move(p));
  }
  nlohmann::json summary = {{"group_id", group.group_id},
                            {"trials", dataset.series.size()}};
  if (!predictions.empty()) {
    std::size_t rows = 0;
    for (const auto& p : predictions) rows += p.rows();
    Tensor all_p(rows, kNumEventTypes), all_y(rows, kNumEventTypes);
    std::size_t r = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      for (std::size_t t = 0; t < predictions[i].rows(); ++t, ++r) {
        for (std::size_t c = 0; c < kNumEventTypes; ++c) {
          all_p(r, c) = predictions[i](t, c);
          all_y(r, c) = labels[i](t, c);
        }
      }
    }
    const double map = MapScore(all_p, all_y);
    summary["map"] = map;
    ctx.out << "trials=" << dataset.series.size() << " map=" << Fixed(map) << "\n";
  }
  csv::WriteText(out / "predict_summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

int Pseudolabel(Context& ctx, const Flags& flags) {
  const ModelGroup group = LoadModelGroup(SingleManifest(flags));
  if (group.domain != Domain::kDefog) {
    Fail(ErrorKind::kValidation, "pseudo-labels come from a defog model group");
  }
  const auto clusters = MaybeClusters(ctx.settings, group.feature_set);
  const fs::path out = OutDir(ctx, "pseudolabel");
  const Dataset notype =
      LoadDomain(Layout(ctx.settings), ctx.settings.at("split"), Domain::kNotype);
  const PseudoProvenance provenance{group.group_id, group.feature_set,
                                    group.config.seed};
  for (const auto& series : notype.series) {
    const TimeSeries harmonized = HarmonizeUnits(series);
    const Tensor p = PredictSeries(group, notype, harmonized, Ptr(clusters));
    WritePseudoLabeled(AssignPseudoLabels(harmonized, p, provenance), out);
  }
  ctx.out << "pseudo_labeled=" << notype.series.size() << " group=" << group.group_id
          << "\n";
  return kExitOk;
}

// Trials of one domain's held-out split, dealt into private and public
// partitions by a hash of the trial id.
struct HeldOut {
  std::vector<TrialData> trials;
  std::set<std::string> private_ids;
};

HeldOut LoadHeldOut(const Settings& settings, Domain domain, FeatureSetId set,
                    const SubjectClusters* clusters) {
  const Dataset dataset = LoadDomain(Layout(settings), settings.at("split"), domain);
  HeldOut held;
  held.trials = PrepareTrials(dataset, set, clusters);
  std::vector<std::string> ids;
  for (const auto& t : held.trials) ids.push_back(t.trial_id());
  std::sort(ids.begin(), ids.end(), [](const std::string& a, const std::string& b) {
    return Fnv1a(a) < Fnv1a(b);
  });
  const auto n_private = static_cast<std::size_t>(
      std::llround(kPrivateFraction * static_cast<double>(ids.size())));
  held.private_ids.insert(ids.begin(), ids.begin() + n_private);
  return held;
}

int Evaluate(Context& ctx, const Flags& flags) {
  if (flags.group_manifests.empty()) {
    throw UsageError("at least one --group-manifest is required");
  }
  const fs::path out = OutDir(ctx, "evaluate");
  // One row per defog group, paired with the tdcsfog group of the same
  // feature set; pseudo-labelled retraining only ever touches defog.
  std::map<std::pair<char, bool>, ModelGroup> defog_groups;
  std::map<char, ModelGroup> tdcsfog_groups;
  for (const auto& path : flags.group_manifests) {
    ModelGroup g = LoadModelGroup(path);
    const char set = FeatureSetName(g.feature_set);
    const bool fresh =
        g.domain == Domain::kDefog
            ? defog_groups.emplace(std::pair{set, g.uses_pseudo}, g).second
            : tdcsfog_groups.emplace(set, g).second;
    if (!fresh) {
      Fail(ErrorKind::kValidation, "two " + std::string(DomainName(g.domain)) +
                                       " groups for feature set " + set +
                                       (g.uses_pseudo ? " with pseudo-labels" : ""));
    }
  }
  const bool held_out = !ctx.settings.at("data_root").empty();
  std::vector<ReportRow> rows;
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& [key, defog_group] : defog_groups) {
    const std::string label =
        std::string(1, key.first) + (key.second ? "+pseudo" : "");
    const auto tdcsfog = tdcsfog_groups.find(key.first);
    if (tdcsfog == tdcsfog_groups.end()) {
      Fail(ErrorKind::kValidation,
           "feature set " + std::string(1, key.first) + " lacks a tdcsfog group");
    }
    const std::array<const ModelGroup*, 2> pair = {&defog_group, &tdcsfog->second};
    std::optional<double> private_score, public_score;
    std::array<std::optional<double>, 2> held_map;
    if (held_out) {
      std::vector<Tensor> p_private, y_private, p_public, y_public;
      for (std::size_t i = 0; i < 2; ++i) {
        const ModelGroup& g = *pair[i];
        const auto clusters = MaybeClusters(ctx.settings, g.feature_set);
        const HeldOut held =
            LoadHeldOut(ctx.settings, g.domain, g.feature_set, Ptr(clusters));
        if (held.trials.empty()) continue;
        held_map[i] = GroupMapOn(g, held.trials);
        for (const auto& t : held.trials) {
          const bool is_private = held.private_ids.count(t.trial_id()) > 0;
          (is_private ? p_private : p_public).push_back(PredictGroup(g, t.features));
          (is_private ? y_private : y_public).push_back(t.labels);
        }
      }
      auto pooled = [](const std::vector<Tensor>& p, const std::vector<Tensor>& y)
          -> std::optional<double> {
        if (p.empty()) return std::nullopt;
        std::size_t rows = 0;
        for (const auto& t : p) rows += t.rows();
        Tensor all_p(rows, kNumEventTypes), all_y(rows, kNumEventTypes);
        std::size_t r = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
          std::copy(p[i].values().begin(), p[i].values().end(),
                    all_p.row(r).begin());
          std::copy(y[i].values().begin(), y[i].values().end(),
                    all_y.row(r).begin());
          r += p[i].rows();
        }
        return MapScore(all_p, all_y);
      };
      private_score = pooled(p_private, y_private);
      public_score = pooled(p_public, y_public);
    }
    rows.push_back(MakeReportRow(label, pair[0]->group_map, pair[1]->group_map,
                                 private_score, public_score));
    for (std::size_t i = 0; i < 2; ++i) {
      nlohmann::json entry = {{"row", label},
                              {"group_id", pair[i]->group_id},
                              {"domain", DomainName(pair[i]->domain)},
                              {"group_map", pair[i]->group_map}};
      if (held_map[i]) entry["heldout_map"] = *held_map[i];
      groups.push_back(entry);
    }
  }
  const std::string markdown = ReportMarkdown(rows, "Feature set performance");
  csv::WriteText(out / "report.md", markdown);
  csv::WriteText(out / "report.csv", ReportCsv(rows));
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j = {{"feature_set", r.feature_set},
                        {"dmap", r.dmap},
                        {"tmap", r.tmap},
                        {"fp", r.fp}};
    if (r.private_score) j["private"] = *r.private_score;
    if (r.public_score) j["public"] = *r.public_score;
    if (r.total_score) j["total"] = *r.total_score;
    rows_json.push_back(j);
  }
  csv::WriteText(out / "evaluation.json",
                 nlohmann::json{{"rows", rows_json}, {"groups", groups}}.dump(2) +
                     "\n");
  ctx.out << markdown;
  return kExitOk;
}

int Gradcheck(Context& ctx, const Flags& flags) {
  const std::size_t seeds = flags.seeds.value_or(10);
  const auto results = RunGradcheckSuite(seeds);
  nlohmann::json report = nlohmann::json::array();
  bool ok = true;
  for (const auto& r : results) {
    ctx.out << (r.passed() ? "PASS " : "FAIL ") << r.name
            << " max_rel_err=" << Fixed(r.max_relative_error)
            << " tol=" << Fixed(r.tolerance) << " seeds=" << r.seeds
            << " elements=" << r.checked << "\n";
    report.push_back({{"name", r.name},
                      {"max_relative_error", r.max_relative_error},
                      {"tolerance", r.tolerance},
                      {"seeds", r.seeds},
                      {"passed", r.passed()}});
    ok = ok && r.passed();
  }
  if (!ctx.settings.at("out").empty()) {
    csv::WriteText(OutDir(ctx, "gradcheck") / "gradcheck.json",
                   report.dump(2) + "\n");
  }
  if (!ok) Fail(ErrorKind::kNumeric, "gradient check exceeded tolerance");
  return kExitOk;
}

void ErrorLine(std::ostream& err, std::string_view kind, const std::string& message) {
  err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

Settings DefaultSettings() {
  const TrainConfig t;
  const TransBiLstmConfig& m = t.model;
  auto num = [](double v) { return FormatNumber(v); };
  return {
      {"data_root", ""},
      {"out", ""},
      {"domain", ""},
      {"feature_set", std::string(1, FeatureSetName(t.feature_set))},
      {"seed", std::to_string(t.seed)},
      {"split", ""},
      {"clusters", ""},
      {"pseudo_dir", ""},
      {"cluster_count", "3"},
      {"defog_trials", "20"},
      {"tdcsfog_trials", "12"},
      {"notype_trials", "8"},
      {"test_trials", "6"},
      {"subjects", "8"},
      {"window_len", std::to_string(t.window_len)},
      {"window_stride", std::to_string(t.window_stride)},
      {"batch_size", std::to_string(t.batch_size)},
      {"max_epochs", std::to_string(t.max_epochs)},
      {"learning_rate", num(t.learning_rate)},
      {"beta1", num(t.beta1)},
      {"beta2", num(t.beta2)},
      {"adam_epsilon", num(t.adam_epsilon)},
      {"num_folds", std::to_string(t.num_folds)},
      {"standardize", t.standardize ? "true" : "false"},
      {"pseudo_weight", num(t.pseudo_weight)},
      {"workers", std::to_string(t.workers)},
      {"patch_len", std::to_string(m.patch_len)},
      {"model_dim", std::to_string(m.model_dim)},
      {"num_encoder_layers", std::to_string(m.num_encoder_layers)},
      {"num_heads", std::to_string(m.num_heads)},
      {"head_dim", std::to_string(m.head_dim)},
      {"ffn_units", std::to_string(m.ffn_units)},
      {"dropout_rate", num(m.dropout_rate)},
      {"num_bilstm_layers", std::to_string(m.num_bilstm_layers)},
      {"bilstm_output_dim", std::to_string(m.bilstm_output_dim)},
  };
}

Settings ParseConfigText(const std::string& text, const std::string& source) {
  Settings parsed;
  std::istringstream in(text);
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const std::string content = Trim(line.substr(0, line.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw UsageError(source + ":" + std::to_string(number) +
                       ": expected key = value");
    }
    parsed[Trim(std::string_view(content).substr(0, eq))] =
        Trim(std::string_view(content).substr(eq + 1));
  }
  return parsed;
}

void Overlay(Settings& base, const Settings& overrides, const std::string& source) {
  const Settings defaults = DefaultSettings();
  for (const auto& [key, value] : overrides) {
    if (!defaults.count(key)) {
      throw UsageError(source + ": unknown config key '" + key + "'");
    }
    base[key] = value;
  }
}

std::string SettingsText(const Settings& settings, const std::string& command) {
  std::ostringstream out;
  out << "# fogtool " << command << "\n";
  for (const auto& [key, value] : settings) out << key << " = " << value << "\n";
  return out.str();
}

TrainConfig TrainConfigFromSettings(const Settings& s) {
  TrainConfig c;
  c.window_len = ParseNumber<std::size_t>(s, "window_len");
  c.window_stride = ParseNumber<std::size_t>(s, "window_stride");
  c.batch_size = ParseNumber<std::size_t>(s, "batch_size");
  c.max_epochs = ParseNumber<std::size_t>(s, "max_epochs");
  c.learning_rate = ParseNumber<double>(s, "learning_rate");
  c.beta1 = ParseNumber<double>(s, "beta1");
  c.beta2 = ParseNumber<double>(s, "beta2");
  c.adam_epsilon = ParseNumber<double>(s, "adam_epsilon");
  c.seed = ParseNumber<std::uint64_t>(s, "seed");
  c.num_folds = ParseNumber<std::size_t>(s, "num_folds");
  c.feature_set = ParseFeatureSet(s.at("feature_set"));
  c.standardize = ParseBool(s, "standardize");
  c.pseudo_weight = ParseNumber<double>(s, "pseudo_weight");
  c.workers = ParseNumber<std::size_t>(s, "workers");
  c.model.patch_len = ParseNumber<std::size_t>(s, "patch_len");
  c.model.model_dim = ParseNumber<std::size_t>(s, "model_dim");
  c.model.num_encoder_layers = ParseNumber<std::size_t>(s, "num_encoder_layers");
  c.model.num_heads = ParseNumber<std::size_t>(s, "num_heads");
  c.model.head_dim = ParseNumber<std::size_t>(s, "head_dim");
  c.model.ffn_units = ParseNumber<std::size_t>(s, "ffn_units");
  c.model.dropout_rate = ParseNumber<double>(s, "dropout_rate");
  c.model.num_bilstm_layers = ParseNumber<std::size_t>(s, "num_bilstm_layers");
  c.model.bilstm_output_dim = ParseNumber<std::size_t>(s, "bilstm_output_dim");
  c.Validate();
  return c;
}

int RunCommand(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Freezing-of-gait event-type prediction toolkit", "fogtool"};
  app.require_subcommand(1, 1);
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "key = value config file");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "root seed");
  };
  auto data = [&](CLI::App* sub) {
    sub->add_option("--data", flags.data,
                    std::string("corpus root (default $") + kDataRootVariable + ")");
  };
  auto domain = [&](CLI::App* sub) {
    sub->add_option("--domain", flags.domain, "defog or tdcsfog")
        ->check(CLI::IsMember({"defog", "tdcsfog"}));
  };
  auto feature_set = [&](CLI::App* sub) {
    sub->add_option("--feature-set", flags.feature_set, "A..G")
        ->check(CLI::IsMember({"A", "B", "C", "D", "E", "F", "G"}));
    sub->add_option("--clusters", flags.clusters, "subject cluster file (set G)");
  };
  auto split = [&](CLI::App* sub, const char* fallback) {
    sub->add_option("--split", flags.split, std::string("corpus split (default ") +
                                                fallback + ")");
  };
  auto manifests = [&](CLI::App* sub) {
    sub->add_option("--group-manifest", flags.group_manifests,
                    "model group manifest.json");
  };

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  common(synth);
  synth->add_option("--defog-trials", flags.defog_trials);
  synth->add_option("--tdcsfog-trials", flags.tdcsfog_trials);
  synth->add_option("--notype-trials", flags.notype_trials);
  synth->add_option("--test-trials", flags.test_trials);
  synth->add_option("--subjects", flags.subjects);

  auto* validate = app.add_subcommand("validate", "schema and integrity checks");
  common(validate);
  data(validate);

  auto* features = app.add_subcommand("features", "dump feature matrices");
  common(features);
  data(features);
  features->add_option("--domain", flags.domain, "defog, tdcsfog or notype")
      ->check(CLI::IsMember({"defog", "tdcsfog", "notype"}));
  feature_set(features);
  split(features, "train");

  auto* cluster = app.add_subcommand("cluster-subjects", "k-means over subjects");
  common(cluster);
  data(cluster);
  cluster->add_option("--k", flags.k, "cluster count");

  auto* separation =
      app.add_subcommand("analyze-separation", "defog/tdcsfog PCA separation");
  common(separation);
  data(separation);
  split(separation, "train");

  auto* train = app.add_subcommand("train", "train one model group");
  common(train);
  data(train);
  domain(train);
  feature_set(train);

  auto* predict = app.add_subcommand("predict", "apply a model group");
  common(predict);
  data(predict);
  domain(predict);
  manifests(predict);
  predict->add_option("--clusters", flags.clusters, "subject cluster file (set G)");
  split(predict, "test");

  auto* pseudo = app.add_subcommand("pseudolabel", "type the notype trials");
  common(pseudo);
  data(pseudo);
  manifests(pseudo);
  pseudo->add_option("--clusters", flags.clusters, "subject cluster file (set G)");
  split(pseudo, "train");

  auto* retrain =
      app.add_subcommand("retrain", "train a defog group with pseudo-labels");
  common(retrain);
  data(retrain);
  domain(retrain);
  feature_set(retrain);
  retrain->add_option("--pseudo-dir", flags.pseudo_dir, "pseudolabel output");

  auto* evaluate = app.add_subcommand("evaluate", "feature-set report");
  common(evaluate);
  data(evaluate);
  manifests(evaluate);
  evaluate->add_option("--clusters", flags.clusters, "subject cluster file (set G)");
  split(evaluate, "test");

  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference suite");
  common(gradcheck);
  gradcheck->add_option("--seeds", flags.seeds, "seeds per check");

  if (args.size() > 1 && !args[1].starts_with('-') &&
      app.get_subcommand_no_throw(args[1]) == nullptr) {
    ErrorLine(err, "usage", "unknown subcommand '" + args[1] + "'");
    err << app.help();
    return kExitUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    ErrorLine(err, "usage", e.what());
    err << app.help();
    return kExitUsage;
  }

  try {
    Context ctx{Resolve(flags), out, err};
    auto default_split = [&](const char* value) {
      if (ctx.settings["split"].empty()) ctx.settings["split"] = value;
    };
    if (synth->parsed()) return Synth(ctx);
    if (validate->parsed()) return Validate(ctx);
    if (features->parsed()) return default_split("train"), Features(ctx);
    if (cluster->parsed()) return ClusterSubjectsCommand(ctx);
    if (separation->parsed()) {
      return default_split("train"), AnalyzeSeparationCommand(ctx);
    }
    if (train->parsed()) return Train(ctx);
    if (predict->parsed()) return default_split("test"), Predict(ctx, flags);
    if (pseudo->parsed()) return default_split("train"), Pseudolabel(ctx, flags);
    if (retrain->parsed()) return Retrain(ctx);
    if (evaluate->parsed()) return default_split("test"), Evaluate(ctx, flags);
    if (gradcheck->parsed()) return Gradcheck(ctx, flags);
  } catch (const UsageError& e) {
    ErrorLine(err, "usage", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    ErrorLine(err, ErrorKindName(e.kind()), e.what());
    return kExitFailure;
  } catch (const nlohmann::json::exception& e) {
    ErrorLine(err, ErrorKindName(ErrorKind::kParse), e.what());
    return kExitFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    ErrorLine(err, ErrorKindName(ErrorKind::kIo), e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace fog::cli
