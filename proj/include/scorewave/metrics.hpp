// Copyright 2026 The scorewave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCOREWAVE_METRICS_HPP_
#define SCOREWAVE_METRICS_HPP_

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "scorewave/core.hpp"

namespace scorewave {

/// One embedded item: a vector of any fixed dimension plus the corpus
/// labels it was generated with. Skeleton rows have is_skeleton set and an
/// nht_count of 0.
struct EmbeddingRecord {
  std::string item_id;
  std::vector<double> vec;
  std::string skeleton_id;
  std::string tonality;
  int nht_count = 0;
  std::vector<std::string> nht_kinds;
  bool is_skeleton = false;
};

/// Frame-level accuracy TP / (TP + FP + FN) over active notes aggregated
/// across 16 equal time frames. Both-empty inputs score 1.0. Throws
/// ShapeError on mismatched shapes or when T is not divisible into 16
/// frames.
double frame_accuracy(const PianoRoll& pred, const PianoRoll& target);

struct DistanceBucket {
  int nht_count = 0;
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double normalized = 0.0;  // mean / max bucket mean
};

struct DistanceProfile {
  std::vector<DistanceBucket> buckets;  // ascending nht_count
};

/// L2 distance of every realisation to its skeleton's embedding, bucketed
/// by nht_count and normalized by the largest bucket mean. Throws
/// ValidationError listing the ids of realisations whose skeleton has no
/// embedding.
DistanceProfile distance_profile(std::span<const EmbeddingRecord> records);

struct LinearityScore {
  double pearson_r = 0.0;
  double spearman_rho = 0.0;
  bool degenerate = false;  // zero variance on either axis
};

/// Correlation of bucket mean distance with nht_count; needs >= 3 buckets.
LinearityScore linearity_score(const DistanceProfile& profile);

struct SilhouetteResult {
  double score = 0.0;
  std::vector<std::string> excluded_labels;  // singleton tonalities
};

/// Mean silhouette coefficient of the tonality labels under the L2 metric.
/// Labels with fewer than two members are excluded with a warning entry;
/// at least two surviving labels are required.
SilhouetteResult tonality_silhouette(std::span<const EmbeddingRecord> records);

struct KindDistance {
  std::string kind;
  int count = 0;
  double mean = 0.0;
};

/// Mean skeleton distance per ornament kind, over single-ornament
/// realisations.
std::vector<KindDistance> kindwise_profile(std::span<const EmbeddingRecord> records);

// Compensated (Neumaier) summation, used so metric results do not depend
// on accumulation order.
class KahanSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    comp_ += std::abs(sum_) >= std::abs(value) ? (sum_ - t) + value
                                               : (value - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double l2_distance(std::span<const double> a, std::span<const double> b);

}  // namespace scorewave

#endif  // SCOREWAVE_METRICS_HPP_
