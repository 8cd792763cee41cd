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

#ifndef FOG_STATS_H_
#define FOG_STATS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fog/data.h"
#include "fog/features.h"
#include "fog/tensor.h"

namespace fog {

struct PcaModel {
  std::vector<double> mean;         // D
  Tensor components;                // D x p, orthonormal columns
  std::vector<double> explained_variance;  // p, non-increasing

  Tensor Transform(const Tensor& data) const;
  Tensor InverseTransform(const Tensor& scores) const;
};

struct PcaResult {
  PcaModel model;
  Tensor scores;  // N x p
};

// Eigendecomposition of the sample covariance (denominator N - 1). Each
// component is signed so its largest-magnitude entry is positive.
PcaResult PcaFitTransform(const Tensor& data, std::size_t p);

struct Clustering {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;
  Tensor centroids;  // k x D
  // Within-cluster sum of squares after each assignment step.
  std::vector<double> inertia;
  std::size_t iterations = 0;
};

// Lloyd's algorithm from a seeded k-means++ start. An empty cluster is
// re-seeded at the point farthest from its assigned centroid.
Clustering KMeans(const Tensor& data, std::size_t k, std::uint64_t seed,
                  std::size_t max_iter = 300);

double WithinClusterSumOfSquares(const Tensor& data,
                                 std::span<const std::size_t> assignments,
                                 const Tensor& centroids);

// Mean silhouette with Euclidean distance; members of singleton clusters
// score 0.
double SilhouetteScore(const Tensor& data,
                       std::span<const std::size_t> assignments);

double PearsonCorrelation(std::span<const double> x, std::span<const double> y);

// Per-column z-score; zero-variance columns become 0.
Tensor ZScoreColumns(const Tensor& data);

// Clusters subjects on standardized [age, years_since_dx, updrs_on,
// updrs_off, nfogq].
SubjectClusters ClusterSubjects(const SubjectMap& subjects, std::size_t k,
                                std::uint64_t seed);
void WriteSubjectClusters(const SubjectClusters& clusters,
                          const std::filesystem::path& path);
SubjectClusters LoadSubjectClusters(const std::filesystem::path& path);

// Summary vectors -> column z-score -> PCA(2) -> silhouette of the domain
// labelling.
struct SeparationAnalysis {
  std::vector<std::string> trial_ids;
  std::vector<Domain> domains;
  Tensor scores;  // N x 2
  std::vector<double> explained_variance;
  double silhouette = 0.0;
};

SeparationAnalysis AnalyzeSeparation(std::span<const SummaryVector> summaries,
                                     std::span<const Domain> domains);
void WriteSeparationCsv(const SeparationAnalysis& analysis,
                        const std::filesystem::path& path);
void WriteSeparationSvg(const SeparationAnalysis& analysis,
                        const std::filesystem::path& path);

}  // namespace fog

#endif  // FOG_STATS_H_
