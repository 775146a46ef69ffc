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

#ifndef SCOREWAVE_CHORALE_HPP_
#define SCOREWAVE_CHORALE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scorewave/core.hpp"

namespace scorewave {

// Synthetic chorale generator. A skeleton is a bar of quarter-note SATB
// chords drawn from a diatonic functional grammar (T -> S -> D -> T) and
// voiced under classical constraints (ranges, no crossing, no parallel
// fifths/octaves). A realisation decorates a skeleton with a requested
// number of verified non-harmonic tones; stripping them recovers the
// skeleton exactly. The grammar is a documented minimal stand-in: the
// corpus needs validity and labeled ornaments, not stylistic authenticity.

enum class Mode { kMajor, kMinor };

struct Tonality {
  int tonic_pc = 0;  // pitch class 0..11
  Mode mode = Mode::kMajor;

  friend bool operator==(const Tonality&, const Tonality&) = default;
};

std::string tonality_name(const Tonality& t);

/// Voices are indexed soprano=0, alto=1, tenor=2, bass=3.
inline constexpr int kNumVoices = 4;
inline constexpr int kColumnsPerBeat = 4;

struct Chord {
  std::array<int, kNumVoices> pitches{};  // S, A, T, B
  int degree = 0;                         // scale degree 0..6 of the root
};

struct Skeleton {
  std::string id;
  Tonality tonality;
  std::vector<Chord> chords;  // one per beat

  int steps() const { return static_cast<int>(chords.size()) * kColumnsPerBeat; }
};

enum class NhtKind {
  kPassing,
  kNeighbor,
  kSuspension,
  kAnticipation,
  kEscape,
  kAppoggiatura,
};

std::string nht_kind_name(NhtKind kind);
NhtKind nht_kind_from_name(const std::string& name);

inline constexpr std::array<NhtKind, 6> kAllNhtKinds = {
    NhtKind::kPassing,      NhtKind::kNeighbor, NhtKind::kSuspension,
    NhtKind::kAnticipation, NhtKind::kEscape,   NhtKind::kAppoggiatura,
};

struct NonHarmonicTone {
  NhtKind kind;
  int voice = 0;
  int column = 0;  // column where the ornament pitch starts
  int pitch = 0;

  friend bool operator==(const NonHarmonicTone&, const NonHarmonicTone&) = default;
};

struct Realisation {
  std::string id;
  std::string skeleton_id;
  Tonality tonality;
  Bar bar;
  std::vector<NonHarmonicTone> nht_list;

  int nht_count() const { return static_cast<int>(nht_list.size()); }
};

/// Chord progression from the functional grammar, voiced under SATB
/// constraints with bounded backtracking. Deterministic per seed; throws
/// GenerationError when no valid voicing is found.
Skeleton generate_skeleton(const Tonality& key, int n_chords, std::uint64_t seed);

/// Render a skeleton as a bar: one note per voice and beat, quantum 120.
Bar skeleton_to_bar(const Skeleton& s);

/// Insert exactly nht_count verified non-harmonic tones of the allowed
/// kinds. At most one ornament per (voice, beat) and never on adjacent
/// beats of the same voice, so every ornament's melodic pattern stays
/// intact in the rendered bar. Throws GenerationError naming the deficit
/// when the skeleton has too few insertion sites.
Realisation realize_skeleton(const Skeleton& s, int nht_count,
                             const std::vector<NhtKind>& allowed_kinds,
                             std::uint64_t seed);

/// Largest nht_count realize_skeleton can honor for this skeleton.
int nht_capacity(const Skeleton& s, const std::vector<NhtKind>& allowed_kinds);

struct RealisationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Re-check every Realisation invariant: each ornament's kind pattern and
/// placement, and exact skeleton recovery after stripping the ornaments.
RealisationReport verify_realisation(const Realisation& r, const Skeleton& s);

/// Skeleton invariant checks used by tests: diatonic chord tones, voice
/// ranges, no crossing, no parallel fifths/octaves.
std::vector<std::string> validate_skeleton(const Skeleton& s);

struct CorpusParams {
  int n_skeletons = 1;
  int per_skeleton = 1;  // realisations per skeleton
  int nht_min = 0;
  int nht_max = 0;
  std::uint64_t seed = 0;
  int n_chords = 4;
};

struct CorpusSummary {
  int skeletons = 0;
  int realisations = 0;
  std::filesystem::path meta_path;
};

/// Write corpus/skeletons/*.mid, corpus/realisations/*.mid and
/// corpus/meta.jsonl (one JSON object per item). Reproducible per seed:
/// every item derives its own child seed from (seed, indices).
CorpusSummary build_eval_corpus(const CorpusParams& params,
                                const std::filesystem::path& out_dir);

/// The corpus items in memory (used by evaluation without touching disk).
struct CorpusItems {
  std::vector<Skeleton> skeletons;
  std::vector<Realisation> realisations;
};
CorpusItems generate_corpus_items(const CorpusParams& params);

}  // namespace scorewave

#endif  // SCOREWAVE_CHORALE_HPP_
