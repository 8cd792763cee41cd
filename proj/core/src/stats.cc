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

#include "fog/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/Dense>

#include "fog/csv.h"
#include "fog/error.h"
#include "fog/random.h"

namespace fog {
namespace {

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

std::size_t NearestCentroid(std::span<const double> point, const Tensor& centroids) {
  std::size_t best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = SquaredDistance(point, centroids.row(c));
    if (d < best_distance) {
      best_distance = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

Tensor PcaModel::Transform(const Tensor& data) const {
  if (data.cols() != mean.size()) {
    Fail(ErrorKind::kShape, "PCA transform: dimension mismatch");
  }
  Tensor centered = data;
  for (std::size_t r = 0; r < centered.rows(); ++r) {
    for (std::size_t c = 0; c < centered.cols(); ++c) centered(r, c) -= mean[c];
  }
  return MatMul(centered, components);
}

Tensor PcaModel::InverseTransform(const Tensor& scores) const {
  Tensor out = MatMulTransB(scores, components);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += mean[c];
  }
  return out;
}

PcaResult PcaFitTransform(const Tensor& data, std::size_t p) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  if (n < 2) Fail(ErrorKind::kValidation, "PCA needs at least 2 rows");
  if (p < 1 || p > std::min(n, d)) {
    Fail(ErrorKind::kValidation, "PCA target dimension " + std::to_string(p) +
                                     " outside [1, " +
                                     std::to_string(std::min(n, d)) + "]");
  }
  PcaModel model;
  model.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) model.mean[c] += data(r, c);
  }
  for (double& m : model.mean) m /= static_cast<double>(n);

  Eigen::MatrixXd centered(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      centered(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          data(r, c) - model.mean[c];
    }
  }
  const Eigen::MatrixXd covariance =
      centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    Fail(ErrorKind::kNumeric, "PCA eigendecomposition failed");
  }
  // Eigen returns ascending eigenvalues.
  model.components = Tensor(d, p);
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = static_cast<Eigen::Index>(d - 1 - j);
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    Eigen::Index argmax = 0;
    v.cwiseAbs().maxCoeff(&argmax);
    if (v(argmax) < 0) v = -v;
    for (std::size_t c = 0; c < d; ++c) {
      model.components(c, j) = v(static_cast<Eigen::Index>(c));
    }
    model.explained_variance.push_back(std::max(0.0, solver.eigenvalues()(col)));
  }
  PcaResult result;
  result.scores = model.Transform(data);
  result.model = std::move(model);
  return result;
}

double WithinClusterSumOfSquares(const Tensor& data,
                                 std::span<const std::size_t> assignments,
                                 const Tensor& centroids) {
  double total = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    total += SquaredDistance(data.row(r), centroids.row(assignments[r]));
  }
  return total;
}

Clustering KMeans(const Tensor& data, std::size_t k, std::uint64_t seed,
                  std::size_t max_iter) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  if (k < 1 || k > n) {
    Fail(ErrorKind::kValidation, "k-means: k=" + std::to_string(k) +
                                     " must be in [1, " + std::to_string(n) + "]");
  }
  Rng rng(seed);
  Clustering result;
  result.k = k;
  result.centroids = Tensor(k, d);

  // k-means++ seeding.
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::size_t chosen = rng.Index(n);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy(data.row(chosen).begin(), data.row(chosen).end(),
              result.centroids.row(c).begin());
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      nearest[r] = std::min(nearest[r], SquaredDistance(data.row(r), data.row(chosen)));
      total += nearest[r];
    }
    if (c + 1 == k) break;
    if (total <= 0.0) {
      chosen = rng.Index(n);
      continue;
    }
    double target = rng.Uniform() * total;
    chosen = n - 1;
    for (std::size_t r = 0; r < n; ++r) {
      target -= nearest[r];
      if (target < 0.0 && nearest[r] > 0.0) {
        chosen = r;
        break;
      }
    }
  }

  result.assignments.assign(n, 0);
  std::vector<std::size_t> previous;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    for (std::size_t r = 0; r < n; ++r) {
      result.assignments[r] = NearestCentroid(data.row(r), result.centroids);
    }
    result.inertia.push_back(
        WithinClusterSumOfSquares(data, result.assignments, result.centroids));
    result.iterations = iter + 1;
    if (result.assignments == previous) break;
    previous = result.assignments;

    Tensor sums(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t c = result.assignments[r];
      ++counts[c];
      for (std::size_t j = 0; j < d; ++j) sums(c, j) += data(r, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        result.centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t farthest = 0;
      double farthest_distance = -1.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double dist = SquaredDistance(
            data.row(r), result.centroids.row(result.assignments[r]));
        if (dist > farthest_distance) {
          farthest_distance = dist;
          farthest = r;
        }
      }
      std::copy(data.row(farthest).begin(), data.row(farthest).end(),
                result.centroids.row(c).begin());
    }
  }
  return result;
}

double SilhouetteScore(const Tensor& data,
                       std::span<const std::size_t> assignments) {
  const std::size_t n = data.rows();
  if (n < 2 || assignments.size() != n) {
    Fail(ErrorKind::kValidation, "silhouette needs >= 2 labelled points");
  }
  std::map<std::size_t, std::size_t> sizes;
  for (std::size_t a : assignments) ++sizes[a];
  if (sizes.size() < 2) {
    Fail(ErrorKind::kValidation, "silhouette undefined for a single cluster");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t own = assignments[i];
    if (sizes[own] == 1) continue;
    std::map<std::size_t, double> distance_sum;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      distance_sum[assignments[j]] +=
          std::sqrt(SquaredDistance(data.row(i), data.row(j)));
    }
    const double a = distance_sum[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [cluster, sum] : distance_sum) {
      if (cluster == own) continue;
      b = std::min(b, sum / static_cast<double>(sizes[cluster]));
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

double PearsonCorrelation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    Fail(ErrorKind::kValidation, "correlation needs equal lengths >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    Fail(ErrorKind::kValidation, "correlation undefined for constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Tensor ZScoreColumns(const Tensor& data) {
  Tensor out = data;
  const std::size_t n = data.rows();
  for (std::size_t c = 0; c < data.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += data(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) var += (data(r, c) - mean) * (data(r, c) - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
      out(r, c) = sd > 0.0 ? (data(r, c) - mean) / sd : 0.0;
    }
  }
  return out;
}

SubjectClusters ClusterSubjects(const SubjectMap& subjects, std::size_t k,
                                std::uint64_t seed) {
  Tensor features(subjects.size(), 5);
  std::size_t r = 0;
  for (const auto& [id, s] : subjects) {
    const double row[5] = {s.age, s.years_since_dx, s.updrs_on, s.updrs_off,
                           s.nfogq};
    std::copy(std::begin(row), std::end(row), features.row(r).begin());
    ++r;
  }
  const Clustering clustering = KMeans(ZScoreColumns(features), k, seed);
  SubjectClusters clusters;
  clusters.k = k;
  r = 0;
  for (const auto& [id, s] : subjects) {
    clusters.assignment[id] = clustering.assignments[r++];
  }
  return clusters;
}

void WriteSubjectClusters(const SubjectClusters& clusters,
                          const std::filesystem::path& path) {
  std::ostringstream out;
  out << "Subject,Cluster\n";
  for (const auto& [id, c] : clusters.assignment) out << id << ',' << c << '\n';
  csv::WriteText(path, out.str());
}

SubjectClusters LoadSubjectClusters(const std::filesystem::path& path) {
  const csv::Table table = csv::Read(path);
  const std::size_t subject = table.Require("Subject");
  const std::size_t cluster = table.Require("Cluster");
  SubjectClusters clusters;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const long long c = csv::ParseInt(table, r, cluster);
    if (c < 0) Fail(ErrorKind::kValidation, path.string() + ": negative cluster");
    clusters.assignment[table.rows[r][subject]] = static_cast<std::size_t>(c);
    clusters.k = std::max(clusters.k, static_cast<std::size_t>(c) + 1);
  }
  return clusters;
}

SeparationAnalysis AnalyzeSeparation(std::span<const SummaryVector> summaries,
                                     std::span<const Domain> domains) {
  if (summaries.size() != domains.size()) {
    Fail(ErrorKind::kShape, "one domain label per summary vector required");
  }
  Tensor data(summaries.size(), 12);
  SeparationAnalysis analysis;
  for (std::size_t r = 0; r < summaries.size(); ++r) {
    std::copy(summaries[r].values.begin(), summaries[r].values.end(),
              data.row(r).begin());
    analysis.trial_ids.push_back(summaries[r].trial_id);
  }
  analysis.domains.assign(domains.begin(), domains.end());
  PcaResult pca = PcaFitTransform(ZScoreColumns(data), 2);
  analysis.scores = std::move(pca.scores);
  analysis.explained_variance = pca.model.explained_variance;
  std::vector<std::size_t> labels;
  for (Domain d : domains) labels.push_back(static_cast<std::size_t>(d));
  analysis.silhouette = SilhouetteScore(analysis.scores, labels);
  return analysis;
}

void WriteSeparationCsv(const SeparationAnalysis& analysis,
                        const std::filesystem::path& path) {
  std::ostringstream out;
  out << "TrialId,Domain,PC1,PC2\n";
  for (std::size_t r = 0; r < analysis.trial_ids.size(); ++r) {
    out << analysis.trial_ids[r] << ',' << DomainName(analysis.domains[r]) << ','
        << FormatNumber(analysis.scores(r, 0)) << ','
        << FormatNumber(analysis.scores(r, 1)) << '\n';
  }
  csv::WriteText(path, out.str());
}

void WriteSeparationSvg(const SeparationAnalysis& analysis,
                        const std::filesystem::path& path) {
  constexpr double kSize = 480.0;
  constexpr double kMargin = 30.0;
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  for (std::size_t r = 0; r < analysis.scores.rows(); ++r) {
    lo_x = std::min(lo_x, analysis.scores(r, 0));
    hi_x = std::max(hi_x, analysis.scores(r, 0));
    lo_y = std::min(lo_y, analysis.scores(r, 1));
    hi_y = std::max(hi_y, analysis.scores(r, 1));
  }
  const double span_x = std::max(hi_x - lo_x, 1e-12);
  const double span_y = std::max(hi_y - lo_y, 1e-12);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize
      << "\" height=\"" << kSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kMargin << "\" y=\"20\" font-size=\"12\">PC1 vs PC2, "
      << "silhouette " << FormatNumber(analysis.silhouette) << "</text>\n";
  for (std::size_t r = 0; r < analysis.scores.rows(); ++r) {
    const double x = kMargin + (analysis.scores(r, 0) - lo_x) / span_x *
                                   (kSize - 2 * kMargin);
    const double y = kSize - kMargin - (analysis.scores(r, 1) - lo_y) / span_y *
                                           (kSize - 2 * kMargin);
    const char* color =
        analysis.domains[r] == Domain::kTdcsfog ? "#e6c619" : "#5b2a86";
    out << "<circle cx=\"" << FormatNumber(x) << "\" cy=\"" << FormatNumber(y)
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  }
  out << "</svg>\n";
  csv::WriteText(path, out.str());
}

}  // namespace fog
