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

#include "scorewave/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "scorewave/errors.hpp"

namespace scorewave {

namespace {

constexpr int kFrames = 16;

double pearson(std::span<const double> x, std::span<const double> y,
               bool* degenerate) {
  const std::size_t n = x.size();
  KahanSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.value() / static_cast<double>(n);
  const double my = sy.value() / static_cast<double>(n);
  KahanSum sxy, sxx, syy;
  for (std::size_t i = 0; i < n; ++i) {
    sxy.add((x[i] - mx) * (y[i] - my));
    sxx.add((x[i] - mx) * (x[i] - mx));
    syy.add((y[i] - my) * (y[i] - my));
  }
  if (sxx.value() <= 0.0 || syy.value() <= 0.0) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  return sxy.value() / std::sqrt(sxx.value() * syy.value());
}

// ranks with ties averaged
std::vector<double> ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> out(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = rank;
    i = j + 1;
  }
  return out;
}

const EmbeddingRecord* find_skeleton(
    const std::map<std::string, const EmbeddingRecord*>& skeletons,
    const std::string& id) {
  auto it = skeletons.find(id);
  return it == skeletons.end() ? nullptr : it->second;
}

struct PairedDistances {
  std::map<int, std::vector<double>> by_count;
  std::map<std::string, std::vector<double>> by_kind;  // single-ornament items
};

PairedDistances pair_distances(std::span<const EmbeddingRecord> records) {
  std::map<std::string, const EmbeddingRecord*> skeletons;
  std::size_t dim = 0;
  for (const auto& r : records) {
    if (!r.vec.empty() && dim == 0) dim = r.vec.size();
    if (r.vec.size() != dim)
      throw ShapeError("embedding vectors disagree on dimension: " +
                       std::to_string(dim) + " vs " +
                       std::to_string(r.vec.size()) + " (" + r.item_id + ")");
    if (r.is_skeleton) skeletons[r.item_id] = &r;
  }

  PairedDistances out;
  std::vector<std::string> missing;
  for (const auto& r : records) {
    if (r.is_skeleton) continue;
    const EmbeddingRecord* s = find_skeleton(skeletons, r.skeleton_id);
    if (s == nullptr) {
      missing.push_back(r.item_id);
      continue;
    }
    const double d = l2_distance(r.vec, s->vec);
    out.by_count[r.nht_count].push_back(d);
    if (r.nht_kinds.size() == 1) out.by_kind[r.nht_kinds[0]].push_back(d);
  }
  if (!missing.empty()) {
    std::string msg = "no skeleton embedding for: ";
    for (std::size_t i = 0; i < missing.size(); ++i)
      msg += (i ? ", " : "") + missing[i];
    throw ValidationError(msg);
  }
  return out;
}

}  // namespace

double l2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ShapeError("vectors of size " + std::to_string(a.size()) + " and " +
                     std::to_string(b.size()));
  KahanSum sum;
  for (std::size_t i = 0; i < a.size(); ++i)
    sum.add((a[i] - b[i]) * (a[i] - b[i]));
  return std::sqrt(sum.value());
}

double frame_accuracy(const PianoRoll& pred, const PianoRoll& target) {
  if (pred.steps() != target.steps())
    throw ShapeError("piano-rolls of " + std::to_string(pred.steps()) +
                     " and " + std::to_string(target.steps()) + " columns");
  if (target.steps() % kFrames != 0)
    throw ShapeError(std::to_string(target.steps()) +
                     " columns do not divide into 16 frames");
  const int cols_per_frame = target.steps() / kFrames;

  long tp = 0, fp = 0, fn = 0;
  for (int f = 0; f < kFrames; ++f) {
    for (int p = 0; p < kNumPitches; ++p) {
      bool in_pred = false, in_target = false;
      for (int c = f * cols_per_frame; c < (f + 1) * cols_per_frame; ++c) {
        in_pred = in_pred || pred.get(p, c);
        in_target = in_target || target.get(p, c);
      }
      if (in_pred && in_target) ++tp;
      else if (in_pred) ++fp;
      else if (in_target) ++fn;
    }
  }
  const long denom = tp + fp + fn;
  return denom == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

DistanceProfile distance_profile(std::span<const EmbeddingRecord> records) {
  PairedDistances paired = pair_distances(records);

  DistanceProfile profile;
  double max_mean = 0.0;
  for (const auto& [count, distances] : paired.by_count) {
    DistanceBucket bucket;
    bucket.nht_count = count;
    bucket.count = static_cast<int>(distances.size());
    KahanSum sum;
    for (double d : distances) sum.add(d);
    bucket.mean = sum.value() / static_cast<double>(distances.size());
    KahanSum var;
    for (double d : distances) var.add((d - bucket.mean) * (d - bucket.mean));
    bucket.stddev = distances.size() > 1
                        ? std::sqrt(var.value() /
                                    static_cast<double>(distances.size() - 1))
                        : 0.0;
    max_mean = std::max(max_mean, bucket.mean);
    profile.buckets.push_back(bucket);
  }
  for (auto& bucket : profile.buckets)
    bucket.normalized = max_mean > 0.0 ? bucket.mean / max_mean : 0.0;
  return profile;
}

LinearityScore linearity_score(const DistanceProfile& profile) {
  if (profile.buckets.size() < 3)
    throw ValidationError("linearity needs at least 3 buckets, got " +
                          std::to_string(profile.buckets.size()));
  std::vector<double> counts, means;
  for (const auto& b : profile.buckets) {
    counts.push_back(static_cast<double>(b.nht_count));
    means.push_back(b.mean);
  }
  LinearityScore score;
  score.pearson_r = pearson(counts, means, &score.degenerate);
  if (score.degenerate) return score;
  const auto rx = ranks(counts);
  const auto ry = ranks(means);
  bool rank_degenerate = false;
  score.spearman_rho = pearson(rx, ry, &rank_degenerate);
  score.degenerate = score.degenerate || rank_degenerate;
  if (rank_degenerate) score.spearman_rho = 0.0;
  return score;
}

SilhouetteResult tonality_silhouette(std::span<const EmbeddingRecord> records) {
  std::map<std::string, std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < records.size(); ++i)
    clusters[records[i].tonality].push_back(i);

  SilhouetteResult result;
  std::map<std::string, std::vector<std::size_t>> usable;
  for (const auto& [label, members] : clusters) {
    if (members.size() < 2)
      result.excluded_labels.push_back(label);
    else
      usable[label] = members;
  }
  if (usable.size() < 2)
    throw ValidationError("silhouette needs at least two tonality labels "
                          "with two or more members each");

  KahanSum total;
  long n_scored = 0;
  for (const auto& [label, members] : usable) {
    for (std::size_t i : members) {
      KahanSum own;
      for (std::size_t j : members)
        if (j != i) own.add(l2_distance(records[i].vec, records[j].vec));
      const double a = own.value() / static_cast<double>(members.size() - 1);

      double b = std::numeric_limits<double>::infinity();
      for (const auto& [other_label, other_members] : usable) {
        if (other_label == label) continue;
        KahanSum across;
        for (std::size_t j : other_members)
          across.add(l2_distance(records[i].vec, records[j].vec));
        b = std::min(b, across.value() /
                            static_cast<double>(other_members.size()));
      }
      const double denom = std::max(a, b);
      total.add(denom > 0.0 ? (b - a) / denom : 0.0);
      ++n_scored;
    }
  }
  result.score = total.value() / static_cast<double>(n_scored);
  return result;
}

std::vector<KindDistance> kindwise_profile(
    std::span<const EmbeddingRecord> records) {
  PairedDistances paired = pair_distances(records);
  std::vector<KindDistance> out;
  for (const auto& [kind, distances] : paired.by_kind) {
    KindDistance kd;
    kd.kind = kind;
    kd.count = static_cast<int>(distances.size());
    KahanSum sum;
    for (double d : distances) sum.add(d);
    kd.mean = sum.value() / static_cast<double>(distances.size());
    out.push_back(kd);
  }
  return out;
}

}  // namespace scorewave
