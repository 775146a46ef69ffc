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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "scorewave/errors.hpp"
#include "scorewave/metrics.hpp"
#include "scorewave/rng.hpp"

using namespace scorewave;

namespace {

EmbeddingRecord skeleton_record(const std::string& id, std::vector<double> vec,
                                const std::string& tonality = "c_major") {
  EmbeddingRecord r;
  r.item_id = id;
  r.vec = std::move(vec);
  r.tonality = tonality;
  r.is_skeleton = true;
  return r;
}

EmbeddingRecord realisation_record(const std::string& id,
                                   const std::string& skeleton,
                                   std::vector<double> vec, int nht_count,
                                   std::vector<std::string> kinds = {},
                                   const std::string& tonality = "c_major") {
  EmbeddingRecord r;
  r.item_id = id;
  r.skeleton_id = skeleton;
  r.vec = std::move(vec);
  r.nht_count = nht_count;
  r.nht_kinds = std::move(kinds);
  r.tonality = tonality;
  return r;
}

PianoRoll roll_of(const std::vector<std::pair<int, int>>& cells, int steps = 16) {
  PianoRoll roll(steps);
  for (auto [p, t] : cells) roll.set(p, t, true);
  return roll;
}

PianoRoll shift_pitches(const PianoRoll& roll, int k) {
  PianoRoll out(roll.steps(), roll.quantum());
  for (int p = 0; p < 128; ++p)
    for (int t = 0; t < roll.steps(); ++t)
      if (roll.get(p, t) && p + k >= 0 && p + k < 128) out.set(p + k, t, true);
  return out;
}

}  // namespace

TEST_CASE("frame accuracy: identical nonempty rolls score 1") {
  PianoRoll roll = roll_of({{60, 0}, {64, 3}, {70, 15}});
  CHECK(frame_accuracy(roll, roll) == 1.0);
}

TEST_CASE("frame accuracy: disjoint activations score 0") {
  CHECK(frame_accuracy(roll_of({{60, 0}}), roll_of({{61, 0}})) == 0.0);
}

TEST_CASE("frame accuracy: both empty scores 1") {
  CHECK(frame_accuracy(PianoRoll(16), PianoRoll(16)) == 1.0);
}

TEST_CASE("frame accuracy: the TP=1 FP=1 FN=1 example is one third") {
  PianoRoll target = roll_of({{60, 1}, {64, 1}});
  PianoRoll pred = roll_of({{60, 1}, {67, 1}});
  CHECK(frame_accuracy(pred, target) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("frame accuracy: equals the set-arithmetic oracle on random pairs") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    PianoRoll a = oracles::random_roll(rng, 8);
    PianoRoll b = oracles::random_roll(rng, 8);
    CHECK(frame_accuracy(a, b) ==
          doctest::Approx(oracles::frame_accuracy_sets(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("frame accuracy: invariant under joint transposition, symmetric bounds") {
  Rng rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    PianoRoll a = oracles::random_roll(rng, 6);
    PianoRoll b = oracles::random_roll(rng, 6);
    const double acc = frame_accuracy(a, b);
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
    CHECK(frame_accuracy(shift_pitches(a, 7), shift_pitches(b, 7)) ==
          doctest::Approx(acc).epsilon(1e-15));
  }
}

TEST_CASE("frame accuracy: shape mismatch throws") {
  CHECK_THROWS_AS(frame_accuracy(PianoRoll(16), PianoRoll(32)), ShapeError);
  CHECK_THROWS_AS(frame_accuracy(PianoRoll(12), PianoRoll(12)), ShapeError);
}

TEST_CASE("distance profile: zero distance, normalization, missing skeleton") {
  std::vector<EmbeddingRecord> records;
  records.push_back(skeleton_record("s0", {1.0, 2.0}));
  records.push_back(realisation_record("r0", "s0", {1.0, 2.0}, 0));
  records.push_back(realisation_record("r1", "s0", {2.0, 2.0}, 1));
  records.push_back(realisation_record("r2", "s0", {3.0, 2.0}, 2));

  DistanceProfile profile = distance_profile(records);
  REQUIRE(profile.buckets.size() == 3);
  CHECK(profile.buckets[0].mean == 0.0);
  CHECK(profile.buckets[1].mean == doctest::Approx(1.0));
  CHECK(profile.buckets[2].mean == doctest::Approx(2.0));
  CHECK(profile.buckets[1].normalized == doctest::Approx(0.5));
  CHECK(profile.buckets[2].normalized == doctest::Approx(1.0));

  records.push_back(realisation_record("r3", "missing", {0.0, 0.0}, 1));
  try {
    distance_profile(records);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("r3") != std::string::npos);
  }
}

TEST_CASE("distance profile: bucket means match hand computation") {
  std::vector<EmbeddingRecord> records;
  records.push_back(skeleton_record("s0", {0.0, 0.0, 0.0}));
  records.push_back(realisation_record("a", "s0", {3.0, 4.0, 0.0}, 1));   // 5
  records.push_back(realisation_record("b", "s0", {0.0, 0.0, 7.0}, 1));   // 7
  records.push_back(realisation_record("c", "s0", {6.0, 8.0, 0.0}, 2));   // 10
  DistanceProfile profile = distance_profile(records);
  REQUIRE(profile.buckets.size() == 2);
  CHECK(profile.buckets[0].count == 2);
  CHECK(profile.buckets[0].mean == doctest::Approx(6.0));
  CHECK(profile.buckets[0].stddev == doctest::Approx(std::sqrt(2.0)));
  CHECK(profile.buckets[1].mean == doctest::Approx(10.0));
}

TEST_CASE("distance profile: invariant under orthogonal transforms") {
  // rotate every vector by the same 2x2 rotation; distances are preserved
  Rng rng(43);
  std::vector<EmbeddingRecord> records;
  records.push_back(skeleton_record("s0", {rng.uniform01(), rng.uniform01()}));
  for (int i = 0; i < 20; ++i)
    records.push_back(realisation_record(
        "r" + std::to_string(i), "s0",
        {rng.uniform01() * 4, rng.uniform01() * 4}, i % 5));
  DistanceProfile base = distance_profile(records);

  const double theta = 0.83;
  auto rotated = records;
  for (auto& r : rotated) {
    const double x = r.vec[0], y = r.vec[1];
    r.vec[0] = std::cos(theta) * x - std::sin(theta) * y;
    r.vec[1] = std::sin(theta) * x + std::cos(theta) * y;
  }
  DistanceProfile rot = distance_profile(rotated);
  REQUIRE(rot.buckets.size() == base.buckets.size());
  for (std::size_t i = 0; i < base.buckets.size(); ++i)
    CHECK(rot.buckets[i].mean ==
          doctest::Approx(base.buckets[i].mean).epsilon(1e-12));
}

TEST_CASE("linearity: perfect, reversed, and textbook-formula agreement") {
  auto profile_of = [](std::vector<double> means) {
    DistanceProfile p;
    for (std::size_t i = 0; i < means.size(); ++i)
      p.buckets.push_back({static_cast<int>(i + 1), 1, means[i], 0.0, 0.0});
    return p;
  };

  LinearityScore perfect = linearity_score(profile_of({1, 2, 3, 4}));
  CHECK(perfect.pearson_r == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(perfect.spearman_rho == doctest::Approx(1.0).epsilon(1e-15));

  LinearityScore reversed = linearity_score(profile_of({4, 3, 2, 1}));
  CHECK(reversed.pearson_r == doctest::Approx(-1.0).epsilon(1e-15));

  // noisy monotone series vs the independent textbook formulas
  Rng rng(53);
  std::vector<double> counts, means;
  for (int i = 1; i <= 9; ++i) {
    counts.push_back(i);
    means.push_back(i + rng.uniform01() * 0.5);
  }
  LinearityScore got = linearity_score(profile_of(means));
  CHECK(got.pearson_r ==
        doctest::Approx(oracles::pearson_textbook(counts, means)).epsilon(1e-12));
  CHECK(got.spearman_rho ==
        doctest::Approx(oracles::spearman_textbook(counts, means)).epsilon(1e-12));
  CHECK(!got.degenerate);

  LinearityScore flat = linearity_score(profile_of({2, 2, 2}));
  CHECK(flat.degenerate);
  CHECK(flat.pearson_r == 0.0);

  CHECK_THROWS_AS(linearity_score(profile_of({1, 2})), ValidationError);
}

TEST_CASE("linearity: invariant under affine rescaling of the means") {
  DistanceProfile p;
  Rng rng(59);
  for (int i = 0; i < 7; ++i)
    p.buckets.push_back({i, 1, 1.0 + i + rng.uniform01(), 0.0, 0.0});
  const double base = linearity_score(p).pearson_r;
  for (auto& b : p.buckets) b.mean = 3.25 * b.mean + 11.0;
  CHECK(linearity_score(p).pearson_r == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("silhouette: separated clusters near 1, shuffled labels near 0") {
  Rng rng(61);
  std::vector<EmbeddingRecord> separated;
  for (int i = 0; i < 40; ++i) {
    EmbeddingRecord r;
    r.item_id = "p" + std::to_string(i);
    const bool first = i < 20;
    r.tonality = first ? "a" : "b";
    r.vec = {(first ? 0.0 : 100.0) + rng.uniform01(), rng.uniform01()};
    separated.push_back(r);
  }
  CHECK(tonality_silhouette(separated).score > 0.9);

  std::vector<EmbeddingRecord> blob;
  for (int i = 0; i < 1000; ++i) {
    EmbeddingRecord r;
    r.item_id = "q" + std::to_string(i);
    r.tonality = rng.chance(0.5) ? "a" : "b";
    // Box-Muller gaussian
    const double u1 = rng.uniform01() + 1e-12, u2 = rng.uniform01();
    r.vec = {std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2),
             std::sqrt(-2 * std::log(u1)) * std::sin(2 * std::numbers::pi * u2)};
    blob.push_back(r);
  }
  CHECK(std::abs(tonality_silhouette(blob).score) < 0.1);
}

TEST_CASE("silhouette: identical vectors across two labels score 0") {
  std::vector<EmbeddingRecord> records;
  for (int i = 0; i < 8; ++i) {
    EmbeddingRecord r;
    r.item_id = std::to_string(i);
    r.tonality = i % 2 ? "a" : "b";
    r.vec = {1.0, 1.0};
    records.push_back(r);
  }
  CHECK(tonality_silhouette(records).score == 0.0);
}

TEST_CASE("silhouette: singletons are excluded, too few classes throw") {
  std::vector<EmbeddingRecord> records;
  for (int i = 0; i < 4; ++i) {
    EmbeddingRecord r;
    r.item_id = std::to_string(i);
    r.tonality = i < 2 ? "a" : (i == 2 ? "b" : "c");
    r.vec = {static_cast<double>(i)};
    records.push_back(r);
  }
  CHECK_THROWS_AS(tonality_silhouette(records), ValidationError);

  records.push_back(records.back());
  records.back().item_id = "extra";
  SilhouetteResult result = tonality_silhouette(records);  // b is a singleton
  CHECK(result.excluded_labels == std::vector<std::string>{"b"});
}

TEST_CASE("kindwise profile: single-kind rows, zeros, hand computation") {
  std::vector<EmbeddingRecord> records;
  records.push_back(skeleton_record("s0", {0.0}));
  records.push_back(realisation_record("p1", "s0", {3.0}, 1, {"passing"}));
  records.push_back(realisation_record("p2", "s0", {5.0}, 1, {"passing"}));
  records.push_back(realisation_record("n1", "s0", {0.0}, 1, {"neighbor"}));
  records.push_back(realisation_record("mix", "s0", {9.0}, 2,
                                       {"passing", "neighbor"}));  // excluded
  auto kinds = kindwise_profile(records);
  REQUIRE(kinds.size() == 2);
  CHECK(kinds[0].kind == "neighbor");
  CHECK(kinds[0].mean == 0.0);
  CHECK(kinds[1].kind == "passing");
  CHECK(kinds[1].count == 2);
  CHECK(kinds[1].mean == doctest::Approx(4.0));
}
