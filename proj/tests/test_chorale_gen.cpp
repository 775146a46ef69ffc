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

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "scorewave/chorale.hpp"
#include "scorewave/errors.hpp"
#include "scorewave/midi.hpp"
#include "scorewave/rng.hpp"

using namespace scorewave;

namespace {
const std::vector<NhtKind> kAllKinds(kAllNhtKinds.begin(), kAllNhtKinds.end());
}

TEST_CASE("skeleton: C major, 4 chords, seed 0 passes every invariant") {
  Skeleton s = generate_skeleton({0, Mode::kMajor}, 4, 0);
  CHECK(s.chords.size() == 4);
  CHECK(s.chords[0].degree == 0);  // starts on the tonic
  auto problems = validate_skeleton(s);
  for (const auto& p : problems) MESSAGE(p);
  CHECK(problems.empty());
}

TEST_CASE("skeleton: generation is deterministic per seed") {
  for (std::uint64_t seed : {1ULL, 7ULL, 1234567ULL}) {
    Skeleton a = generate_skeleton({7, Mode::kMinor}, 4, seed);
    Skeleton b = generate_skeleton({7, Mode::kMinor}, 4, seed);
    REQUIRE(a.chords.size() == b.chords.size());
    for (std::size_t i = 0; i < a.chords.size(); ++i) {
      CHECK(a.chords[i].degree == b.chords[i].degree);
      CHECK(a.chords[i].pitches == b.chords[i].pitches);
    }
  }
}

TEST_CASE("skeleton: 10k generations have zero parallel perfects by oracle") {
  Rng rng(1);
  int checked = 0, parallels = 0;
  for (int i = 0; i < 10000; ++i) {
    const Tonality key{rng.uniform(0, 11),
                       rng.chance(0.5) ? Mode::kMajor : Mode::kMinor};
    try {
      Skeleton s = generate_skeleton(key, 4, rng.next_u64());
      parallels += oracles::count_parallel_perfects(s);
      ++checked;
    } catch (const GenerationError&) {
      // reseeding is the documented recovery; rare
    }
  }
  CHECK(checked > 9000);
  CHECK(parallels == 0);
}

TEST_CASE("realize: zero ornaments reproduce the skeleton bar") {
  Skeleton s = generate_skeleton({2, Mode::kMajor}, 4, 5);
  Realisation r = realize_skeleton(s, 0, kAllKinds, 9);
  CHECK(r.nht_count() == 0);
  CHECK(r.bar.notes == skeleton_to_bar(s).notes);
  CHECK(verify_realisation(r, s).ok());
}

TEST_CASE("realize: passing tones verify and strip back to the skeleton") {
  // search a seed with passing-tone capacity
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Skeleton s = generate_skeleton({0, Mode::kMajor}, 4, seed);
    if (nht_capacity(s, {NhtKind::kPassing}) < 3) continue;
    Realisation r = realize_skeleton(s, 3, {NhtKind::kPassing}, seed);
    CHECK(r.nht_count() == 3);
    for (const auto& nht : r.nht_list) CHECK(nht.kind == NhtKind::kPassing);
    auto report = verify_realisation(r, s);
    for (const auto& v : report.violations) MESSAGE(v);
    CHECK(report.ok());
    return;
  }
  FAIL("no skeleton with passing capacity 3 found in 64 seeds");
}

TEST_CASE("realize: an impossible request names the deficit") {
  Skeleton s = generate_skeleton({4, Mode::kMajor}, 2, 3);
  const int capacity = nht_capacity(s, kAllKinds);
  try {
    realize_skeleton(s, capacity + 4, kAllKinds, 1);
    FAIL("expected GenerationError");
  } catch (const GenerationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(std::to_string(capacity)) != std::string::npos);
  }
}

TEST_CASE("realize: every kind that appears verifies against its pattern") {
  Rng rng(77);
  std::set<NhtKind> seen;
  for (int trial = 0; trial < 400; ++trial) {
    Skeleton s = generate_skeleton(
        {rng.uniform(0, 11), rng.chance(0.5) ? Mode::kMajor : Mode::kMinor}, 4,
        rng.next_u64());
    const int cap = nht_capacity(s, kAllKinds);
    if (cap == 0) continue;
    Realisation r =
        realize_skeleton(s, std::min(cap, rng.uniform(1, 6)), kAllKinds,
                         rng.next_u64());
    auto report = verify_realisation(r, s);
    for (const auto& v : report.violations) MESSAGE(v);
    CHECK(report.ok());
    for (const auto& nht : r.nht_list) seen.insert(nht.kind);
  }
  // the generator exercises the full catalogue over 400 draws
  CHECK(seen.size() == 6);
}

TEST_CASE("verify: tampering with a pitch is caught") {
  Skeleton s = generate_skeleton({9, Mode::kMinor}, 4, 21);
  const int cap = nht_capacity(s, kAllKinds);
  REQUIRE(cap >= 1);
  Realisation r = realize_skeleton(s, 1, kAllKinds, 2);
  REQUIRE(r.nht_count() == 1);

  Realisation tampered = r;
  for (auto& note : tampered.bar.notes) {
    if (note.pitch == tampered.nht_list[0].pitch &&
        note.onset == static_cast<std::int64_t>(tampered.nht_list[0].column) * 120) {
      note.pitch += 1;
      tampered.nht_list[0].pitch += 1;
      break;
    }
  }
  CHECK(!verify_realisation(tampered, s).ok());
}

TEST_CASE("verify: pairing with the wrong skeleton fails recovery") {
  Skeleton s1 = generate_skeleton({0, Mode::kMajor}, 4, 100);
  Skeleton s2 = generate_skeleton({5, Mode::kMinor}, 4, 101);
  Realisation r = realize_skeleton(s1, std::min(2, nht_capacity(s1, kAllKinds)),
                                   kAllKinds, 3);
  CHECK(verify_realisation(r, s1).ok());
  CHECK(!verify_realisation(r, s2).ok());
}

TEST_CASE("corpus: counts, determinism, and on-disk layout") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / "scorewave_test_corpus";
  fs::remove_all(dir);

  CorpusParams params;
  params.n_skeletons = 3;
  params.per_skeleton = 4;
  params.nht_min = 0;
  params.nht_max = 3;
  params.seed = 7;
  CorpusSummary summary = build_eval_corpus(params, dir);
  CHECK(summary.skeletons == 3);
  CHECK(summary.realisations == 12);
  CHECK(fs::exists(dir / "meta.jsonl"));
  CHECK(fs::exists(dir / "skeletons" / "skel_00000.mid"));
  CHECK(fs::exists(dir / "realisations" / "real_00002_0003.mid"));

  // the realisation MIDI parses back to a 4/4 bar
  auto [score, diag] =
      parse_midi(read_file((dir / "realisations" / "real_00000_0000.mid").string()));
  CHECK(!score.notes.empty());

  auto read_all = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  };
  const std::string meta_once = read_all(dir / "meta.jsonl");
  CHECK(std::count(meta_once.begin(), meta_once.end(), '\n') == 15);

  // regeneration with the same seed is byte-identical
  const fs::path dir2 = fs::temp_directory_path() / "scorewave_test_corpus2";
  fs::remove_all(dir2);
  build_eval_corpus(params, dir2);
  CHECK(read_all(dir2 / "meta.jsonl") == meta_once);
  CHECK(read_all(dir2 / "skeletons" / "skel_00001.mid") ==
        read_all(dir / "skeletons" / "skel_00001.mid"));

  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("corpus: per-item nht counts cycle through the requested range") {
  CorpusParams params;
  params.n_skeletons = 2;
  params.per_skeleton = 6;
  params.nht_min = 0;
  params.nht_max = 2;
  params.seed = 11;
  CorpusItems items = generate_corpus_items(params);
  REQUIRE(items.realisations.size() == 12);
  for (std::size_t j = 0; j < 6; ++j)
    CHECK(items.realisations[j].nht_count() == static_cast<int>(j % 3));
}
