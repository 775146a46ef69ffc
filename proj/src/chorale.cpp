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

#include "scorewave/chorale.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "scorewave/errors.hpp"
#include "scorewave/midi.hpp"
#include "scorewave/rng.hpp"

namespace scorewave {

namespace {

constexpr int kQuantum = 120;  // sixteenth note at ppq 480
constexpr int kBeatTicks = kQuantum * kColumnsPerBeat;

// inclusive [low, high] singing ranges, S A T B
constexpr int kVoiceLow[kNumVoices] = {60, 55, 48, 40};
constexpr int kVoiceHigh[kNumVoices] = {81, 74, 69, 64};

constexpr int kMajorScale[7] = {0, 2, 4, 5, 7, 9, 11};
constexpr int kMinorScale[7] = {0, 2, 3, 5, 7, 8, 10};  // natural

int pc(int pitch) { return ((pitch % 12) + 12) % 12; }

int leading_tone_pc(const Tonality& key) { return pc(key.tonic_pc + 11); }

/// Diatonic pitch-class set; minor includes the raised leading tone used
/// by the dominant.
std::set<int> diatonic_pcs(const Tonality& key) {
  std::set<int> pcs;
  const int* scale = key.mode == Mode::kMajor ? kMajorScale : kMinorScale;
  for (int i = 0; i < 7; ++i) pcs.insert(pc(key.tonic_pc + scale[i]));
  if (key.mode == Mode::kMinor) pcs.insert(leading_tone_pc(key));
  return pcs;
}

/// Triad pitch classes {root, third, fifth} of a 0-based scale degree.
/// The minor dominant carries the raised leading tone.
std::array<int, 3> triad_pcs(const Tonality& key, int degree) {
  const int* scale = key.mode == Mode::kMajor ? kMajorScale : kMinorScale;
  std::array<int, 3> out{};
  for (int i = 0; i < 3; ++i)
    out[i] = pc(key.tonic_pc + scale[(degree + 2 * i) % 7]);
  if (key.mode == Mode::kMinor && degree == 4) out[1] = leading_tone_pc(key);
  return out;
}

/// Successor scale degrees of the functional grammar (T -> S -> D -> T).
std::vector<int> successor_degrees(const Tonality& key, int degree) {
  const bool major = key.mode == Mode::kMajor;
  auto function_of = [major](int d) {
    if (d == 0 || d == 5) return 'T';
    if (d == 4) return 'D';
    return 'S';
  };
  std::vector<int> next;
  switch (function_of(degree)) {
    case 'T':
      next = major ? std::vector<int>{0, 5, 1, 3, 4} : std::vector<int>{0, 5, 3, 4};
      break;
    case 'S':
      next = major ? std::vector<int>{1, 3, 4} : std::vector<int>{4};
      break;
    case 'D':
      next = {0, 5};
      break;
  }
  std::erase(next, degree);  // no static repeats
  return next;
}

struct Voicing {
  std::array<int, kNumVoices> pitches{};  // S A T B
};

bool in_range(int voice, int pitch) {
  return pitch >= kVoiceLow[voice] && pitch <= kVoiceHigh[voice];
}

/// All SATB voicings of a root-position triad: bass takes the root, the
/// upper voices either complete the triad (root doubled with the bass) or
/// double the root and omit the fifth. The leading tone is never doubled.
std::vector<Voicing> enumerate_voicings(const Tonality& key, int degree) {
  const auto triad = triad_pcs(key, degree);
  const int root = triad[0], third = triad[1], fifth = triad[2];
  const int lead = leading_tone_pc(key);

  std::vector<std::array<int, 3>> upper_sets = {{root, third, fifth}};
  if (root != lead) upper_sets.push_back({root, root, third});

  std::vector<Voicing> out;
  for (int bass = kVoiceLow[3]; bass <= kVoiceHigh[3]; ++bass) {
    if (pc(bass) != root) continue;
    for (const auto& set : upper_sets) {
      std::array<int, 3> perm = set;
      std::sort(perm.begin(), perm.end());
      do {
        // perm = pitch classes for (T, A, S)
        for (int tenor = bass; tenor <= kVoiceHigh[2]; ++tenor) {
          if (pc(tenor) != perm[0] || !in_range(2, tenor)) continue;
          if (tenor - bass > 19) continue;
          for (int alto = tenor; alto <= kVoiceHigh[1]; ++alto) {
            if (pc(alto) != perm[1] || !in_range(1, alto)) continue;
            if (alto - tenor > 12) continue;
            for (int sop = alto; sop <= kVoiceHigh[0]; ++sop) {
              if (pc(sop) != perm[2] || !in_range(0, sop)) continue;
              if (sop - alto > 12) continue;
              out.push_back(Voicing{{sop, alto, tenor, bass}});
            }
          }
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  return out;
}

/// Parallel perfect fifths/octaves between consecutive chords: the same
/// voice pair holds a perfect interval class (unison/octave or fifth) in
/// both chords while both voices move.
bool has_parallel_perfect(const Voicing& prev, const Voicing& cur) {
  for (int i = 0; i < kNumVoices; ++i) {
    for (int j = i + 1; j < kNumVoices; ++j) {
      const int before = pc(prev.pitches[i] - prev.pitches[j]);
      const int after = pc(cur.pitches[i] - cur.pitches[j]);
      if (before != after || (after != 0 && after != 7)) continue;
      if (prev.pitches[i] != cur.pitches[i] && prev.pitches[j] != cur.pitches[j])
        return true;
    }
  }
  return false;
}

bool leaps_ok(const Voicing& prev, const Voicing& cur) {
  for (int v = 0; v < kNumVoices; ++v)
    if (std::abs(cur.pitches[v] - prev.pitches[v]) > 12) return false;
  return true;
}

int total_motion(const Voicing& prev, const Voicing& cur) {
  int sum = 0;
  for (int v = 0; v < kNumVoices; ++v)
    sum += std::abs(cur.pitches[v] - prev.pitches[v]);
  return sum;
}

int tone_at(const Skeleton& s, int voice, int beat) {
  return s.chords[beat].pitches[voice];
}

bool is_step(int a, int b) {
  const int d = std::abs(a - b);
  return d == 1 || d == 2;
}

bool on_beat_kind(NhtKind kind) {
  return kind == NhtKind::kSuspension || kind == NhtKind::kAppoggiatura;
}

/// All ornament pitches of a given kind available at (voice, beat). The
/// patterns reference the skeleton's own tones; candidates must be
/// diatonic (except the suspension, which re-sounds the preparation),
/// inside the voice range, and outside the prevailing chord.
std::vector<int> nht_candidates(const Skeleton& s, int voice, int beat,
                                NhtKind kind) {
  const int n = static_cast<int>(s.chords.size());
  const int tone = tone_at(s, voice, beat);
  const auto pcs = diatonic_pcs(s.tonality);
  const auto chord = triad_pcs(s.tonality, s.chords[beat].degree);
  auto non_chord = [&](int p) {
    return std::find(chord.begin(), chord.end(), pc(p)) == chord.end();
  };
  auto usable = [&](int p) {
    return p != tone && in_range(voice, p) && non_chord(p);
  };

  std::vector<int> out;
  switch (kind) {
    case NhtKind::kPassing: {
      if (beat + 1 >= n) break;
      const int next = tone_at(s, voice, beat + 1);
      const int d = next - tone;
      if (std::abs(d) != 3 && std::abs(d) != 4) break;
      const int dir = d > 0 ? 1 : -1;
      for (int step = 1; step <= 2; ++step) {
        const int p = tone + dir * step;
        if (pcs.count(pc(p)) && is_step(tone, p) && is_step(p, next) && usable(p))
          out.push_back(p);
      }
      break;
    }
    case NhtKind::kNeighbor: {
      if (beat + 1 >= n) break;
      if (tone_at(s, voice, beat + 1) != tone) break;
      for (int d : {-2, -1, 1, 2}) {
        const int p = tone + d;
        if (pcs.count(pc(p)) && usable(p)) out.push_back(p);
      }
      break;
    }
    case NhtKind::kSuspension: {
      if (beat < 1) break;
      const int prep = tone_at(s, voice, beat - 1);
      if (prep - tone == 1 || prep - tone == 2)  // resolves down by step
        if (usable(prep)) out.push_back(prep);
      break;
    }
    case NhtKind::kAnticipation: {
      if (beat + 1 >= n) break;
      const int next = tone_at(s, voice, beat + 1);
      if (next != tone && is_step(tone, next) && usable(next))
        out.push_back(next);
      break;
    }
    case NhtKind::kEscape: {
      if (beat + 1 >= n) break;
      const int next = tone_at(s, voice, beat + 1);
      for (int d : {-2, -1, 1, 2}) {
        const int p = tone + d;
        if (!pcs.count(pc(p)) || !usable(p)) continue;
        // step away, then leap in the opposite direction
        if ((d > 0) == (next - p > 0)) continue;
        if (std::abs(next - p) < 3) continue;
        out.push_back(p);
      }
      break;
    }
    case NhtKind::kAppoggiatura: {
      if (beat < 1) break;
      const int prev = tone_at(s, voice, beat - 1);
      for (int d : {-2, -1, 1, 2}) {
        const int p = tone + d;
        if (!pcs.count(pc(p)) || !usable(p)) continue;
        if (std::abs(p - prev) < 3) continue;  // approached by leap
        out.push_back(p);
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Site {
  int voice;
  int beat;
  std::vector<std::pair<NhtKind, int>> options;  // (kind, pitch)
};

std::vector<Site> enumerate_sites(const Skeleton& s,
                                  const std::vector<NhtKind>& kinds) {
  std::vector<Site> sites;
  const int n = static_cast<int>(s.chords.size());
  for (int v = 0; v < kNumVoices; ++v) {
    for (int b = 0; b < n; ++b) {
      Site site{v, b, {}};
      for (NhtKind kind : kinds)
        for (int p : nht_candidates(s, v, b, kind))
          site.options.emplace_back(kind, p);
      if (!site.options.empty()) sites.push_back(std::move(site));
    }
  }
  return sites;
}

/// Maximum number of pairwise non-adjacent beats selectable from a sorted
/// beat list (greedy is exact on an interval chain).
int max_non_adjacent(const std::vector<int>& beats) {
  int count = 0, last = -2;
  for (int b : beats) {
    if (b > last + 1) {
      ++count;
      last = b;
    }
  }
  return count;
}

void subsets_of_size(const std::vector<int>& beats, int want, std::size_t from,
                     std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == want) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < beats.size(); ++i) {
    if (!cur.empty() && beats[i] <= cur.back() + 1) continue;
    cur.push_back(beats[i]);
    subsets_of_size(beats, want, i + 1, cur, out);
    cur.pop_back();
  }
}

Note make_note(int pitch, int start_col, int len_cols, int voice) {
  Note n;
  n.pitch = pitch;
  n.onset = static_cast<std::int64_t>(start_col) * kQuantum;
  n.duration = static_cast<std::int64_t>(len_cols) * kQuantum;
  n.velocity = kDefaultVelocity;
  n.voice = voice;
  return n;
}

}  // namespace

std::string tonality_name(const Tonality& t) {
  static const char* names[12] = {"C",  "C#", "D",  "D#", "E",  "F",
                                  "F#", "G",  "G#", "A",  "A#", "B"};
  return std::string(names[pc(t.tonic_pc)]) +
         (t.mode == Mode::kMajor ? " major" : " minor");
}

std::string nht_kind_name(NhtKind kind) {
  switch (kind) {
    case NhtKind::kPassing: return "passing";
    case NhtKind::kNeighbor: return "neighbor";
    case NhtKind::kSuspension: return "suspension";
    case NhtKind::kAnticipation: return "anticipation";
    case NhtKind::kEscape: return "escape";
    case NhtKind::kAppoggiatura: return "appoggiatura";
  }
  return "unknown";
}

NhtKind nht_kind_from_name(const std::string& name) {
  for (NhtKind kind : kAllNhtKinds)
    if (nht_kind_name(kind) == name) return kind;
  throw ValidationError("unknown non-harmonic tone kind: " + name);
}

Skeleton generate_skeleton(const Tonality& key, int n_chords,
                           std::uint64_t seed) {
  if (n_chords < 2) throw ValidationError("a skeleton needs at least 2 chords");
  if (key.tonic_pc < 0 || key.tonic_pc > 11)
    throw ValidationError("tonic pitch class must be 0..11");
  Rng rng(seed);

  // degree progression from the grammar, tonic first
  std::vector<int> degrees{0};
  for (int i = 1; i < n_chords; ++i)
    degrees.push_back(rng.pick(successor_degrees(key, degrees.back())));

  // voice the progression left to right with bounded backtracking
  struct Frame {
    std::vector<Voicing> candidates;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  std::vector<Voicing> chosen;
  int attempts = 0;

  auto candidates_for = [&](int idx) {
    auto all = enumerate_voicings(key, degrees[idx]);
    std::vector<Voicing> valid;
    for (const auto& v : all) {
      if (idx > 0) {
        if (has_parallel_perfect(chosen[idx - 1], v)) continue;
        if (!leaps_ok(chosen[idx - 1], v)) continue;
      }
      valid.push_back(v);
    }
    if (idx > 0) {
      std::sort(valid.begin(), valid.end(), [&](const Voicing& a, const Voicing& b) {
        return total_motion(chosen[idx - 1], a) < total_motion(chosen[idx - 1], b);
      });
      // keep the smoothest candidates, shuffled for variety
      if (valid.size() > 8) valid.resize(8);
    }
    rng.shuffle(valid);
    return valid;
  };

  stack.push_back({candidates_for(0), 0});
  while (static_cast<int>(chosen.size()) < n_chords) {
    if (++attempts > 2000)
      throw GenerationError("voicing search exceeded its attempt budget for " +
                            tonality_name(key));
    Frame& frame = stack.back();
    if (frame.next >= frame.candidates.size()) {
      stack.pop_back();
      if (stack.empty())
        throw GenerationError("no valid voicing for the progression in " +
                              tonality_name(key));
      chosen.pop_back();
      continue;
    }
    chosen.push_back(frame.candidates[frame.next++]);
    if (static_cast<int>(chosen.size()) < n_chords)
      stack.push_back({candidates_for(static_cast<int>(chosen.size())), 0});
  }

  Skeleton s;
  s.tonality = key;
  for (int i = 0; i < n_chords; ++i)
    s.chords.push_back({chosen[i].pitches, degrees[i]});
  return s;
}

Bar skeleton_to_bar(const Skeleton& s) {
  Bar bar;
  bar.quantum = kQuantum;
  bar.steps = s.steps();
  for (int v = 0; v < kNumVoices; ++v)
    for (int b = 0; b < static_cast<int>(s.chords.size()); ++b)
      bar.notes.push_back(
          make_note(s.chords[b].pitches[v], b * kColumnsPerBeat,
                    kColumnsPerBeat, v));
  sort_notes(bar.notes);
  return bar;
}

int nht_capacity(const Skeleton& s, const std::vector<NhtKind>& allowed_kinds) {
  auto sites = enumerate_sites(s, allowed_kinds);
  int capacity = 0;
  for (int v = 0; v < kNumVoices; ++v) {
    std::vector<int> beats;
    for (const auto& site : sites)
      if (site.voice == v) beats.push_back(site.beat);
    std::sort(beats.begin(), beats.end());
    capacity += max_non_adjacent(beats);
  }
  return capacity;
}

Realisation realize_skeleton(const Skeleton& s, int nht_count,
                             const std::vector<NhtKind>& allowed_kinds,
                             std::uint64_t seed) {
  if (nht_count < 0) throw ValidationError("nht_count must be >= 0");
  Rng rng(seed);
  auto sites = enumerate_sites(s, allowed_kinds);

  // per-voice beats that can host an ornament
  std::array<std::vector<int>, kNumVoices> beats;
  for (const auto& site : sites) beats[site.voice].push_back(site.beat);
  std::array<int, kNumVoices> capacity{};
  int total_capacity = 0;
  for (int v = 0; v < kNumVoices; ++v) {
    std::sort(beats[v].begin(), beats[v].end());
    capacity[v] = max_non_adjacent(beats[v]);
    total_capacity += capacity[v];
  }
  if (nht_count > total_capacity)
    throw GenerationError("requested " + std::to_string(nht_count) +
                          " non-harmonic tones but only " +
                          std::to_string(total_capacity) +
                          " can be inserted into skeleton " +
                          (s.id.empty() ? "<unnamed>" : s.id));

  // distribute the count over voices, then choose non-adjacent beats
  std::array<int, kNumVoices> alloc{};
  for (int k = 0; k < nht_count; ++k) {
    std::vector<int> open;
    for (int v = 0; v < kNumVoices; ++v)
      if (alloc[v] < capacity[v]) open.push_back(v);
    ++alloc[rng.pick(open)];
  }

  Realisation r;
  r.skeleton_id = s.id;
  r.tonality = s.tonality;
  r.bar = skeleton_to_bar(s);

  for (int v = 0; v < kNumVoices; ++v) {
    if (alloc[v] == 0) continue;
    std::vector<std::vector<int>> choices;
    std::vector<int> cur;
    subsets_of_size(beats[v], alloc[v], 0, cur, choices);
    const auto& picked_beats = choices[rng.uniform(0, static_cast<int>(choices.size()) - 1)];
    for (int b : picked_beats) {
      const Site* site = nullptr;
      for (const auto& candidate : sites)
        if (candidate.voice == v && candidate.beat == b) site = &candidate;
      auto [kind, pitch] = site->options[rng.uniform(
          0, static_cast<int>(site->options.size()) - 1)];

      const int tone = tone_at(s, v, b);
      const int col0 = b * kColumnsPerBeat;
      const int half = kColumnsPerBeat / 2;
      // replace the full-beat tone note with the ornamented pair
      std::erase_if(r.bar.notes, [&](const Note& n) {
        return n.voice == v && n.onset == static_cast<std::int64_t>(col0) * kQuantum;
      });
      int column;
      if (on_beat_kind(kind)) {
        r.bar.notes.push_back(make_note(pitch, col0, half, v));
        r.bar.notes.push_back(make_note(tone, col0 + half, half, v));
        column = col0;
      } else {
        r.bar.notes.push_back(make_note(tone, col0, half, v));
        r.bar.notes.push_back(make_note(pitch, col0 + half, half, v));
        column = col0 + half;
      }
      r.nht_list.push_back({kind, v, column, pitch});
    }
  }

  sort_notes(r.bar.notes);
  std::sort(r.nht_list.begin(), r.nht_list.end(),
            [](const NonHarmonicTone& a, const NonHarmonicTone& b) {
              return std::tie(a.column, a.voice) < std::tie(b.column, b.voice);
            });
  return r;
}

RealisationReport verify_realisation(const Realisation& r, const Skeleton& s) {
  RealisationReport report;
  auto fail = [&](const std::string& msg) { report.violations.push_back(msg); };

  const int n_beats = static_cast<int>(s.chords.size());
  if (r.bar.steps != s.steps()) {
    fail("bar has " + std::to_string(r.bar.steps) + " columns, skeleton needs " +
         std::to_string(s.steps()));
    return report;
  }

  std::set<std::pair<int, int>> used;  // (voice, beat)
  for (const auto& nht : r.nht_list) {
    const std::string tag = nht_kind_name(nht.kind) + " at voice " +
                            std::to_string(nht.voice) + ", column " +
                            std::to_string(nht.column);
    if (nht.voice < 0 || nht.voice >= kNumVoices) {
      fail(tag + ": bad voice");
      continue;
    }
    const int beat = nht.column / kColumnsPerBeat;
    if (beat < 0 || beat >= n_beats) {
      fail(tag + ": column outside the bar");
      continue;
    }
    if (!used.insert({nht.voice, beat}).second)
      fail(tag + ": second ornament in the same voice and beat");

    const int expected_phase = on_beat_kind(nht.kind) ? 0 : kColumnsPerBeat / 2;
    if (nht.column % kColumnsPerBeat != expected_phase)
      fail(tag + ": wrong beat placement for its kind");

    const int tone = tone_at(s, nht.voice, beat);
    if (nht.pitch == tone) fail(tag + ": pitch equals the underlying chord tone");
    const auto chord = triad_pcs(s.tonality, s.chords[beat].degree);
    if (std::find(chord.begin(), chord.end(), pc(nht.pitch)) != chord.end())
      fail(tag + ": pitch belongs to the prevailing chord");

    auto candidates = nht_candidates(s, nht.voice, beat, nht.kind);
    if (std::find(candidates.begin(), candidates.end(), nht.pitch) ==
        candidates.end())
      fail(tag + ": melodic pattern does not match its kind");
  }

  // strip the ornaments and restore the underlying tones
  Bar restored = r.bar;
  for (const auto& nht : r.nht_list) {
    const int beat = nht.column / kColumnsPerBeat;
    if (beat < 0 || beat >= n_beats) continue;
    const int col0 = beat * kColumnsPerBeat;
    const int tone = tone_at(s, nht.voice, beat);
    const std::size_t before = restored.notes.size();
    std::erase_if(restored.notes, [&](const Note& n) {
      return n.voice == nht.voice &&
             n.onset >= static_cast<std::int64_t>(col0) * kQuantum &&
             n.onset < static_cast<std::int64_t>(col0 + kColumnsPerBeat) * kQuantum;
    });
    if (restored.notes.size() + 2 != before)
      fail("ornamented beat " + std::to_string(beat) + " of voice " +
           std::to_string(nht.voice) + " does not hold exactly two notes");
    restored.notes.push_back(make_note(tone, col0, kColumnsPerBeat, nht.voice));
  }
  sort_notes(restored.notes);

  const Bar expected = skeleton_to_bar(s);
  if (restored.notes != expected.notes)
    fail("stripping the ornaments does not recover the skeleton");
  return report;
}

std::vector<std::string> validate_skeleton(const Skeleton& s) {
  std::vector<std::string> problems;
  const auto pcs = diatonic_pcs(s.tonality);
  for (int b = 0; b < static_cast<int>(s.chords.size()); ++b) {
    const auto& chord = s.chords[b];
    const auto triad = triad_pcs(s.tonality, chord.degree);
    for (int v = 0; v < kNumVoices; ++v) {
      const int p = chord.pitches[v];
      if (!in_range(v, p))
        problems.push_back("chord " + std::to_string(b) + ": voice " +
                           std::to_string(v) + " out of range");
      if (std::find(triad.begin(), triad.end(), pc(p)) == triad.end())
        problems.push_back("chord " + std::to_string(b) + ": voice " +
                           std::to_string(v) + " is not a chord tone");
      if (!pcs.count(pc(p)))
        problems.push_back("chord " + std::to_string(b) + ": voice " +
                           std::to_string(v) + " is not diatonic");
      if (v + 1 < kNumVoices && chord.pitches[v] < chord.pitches[v + 1])
        problems.push_back("chord " + std::to_string(b) + ": voices " +
                           std::to_string(v) + "/" + std::to_string(v + 1) +
                           " crossed");
    }
    if (b > 0) {
      Voicing prev{s.chords[b - 1].pitches}, cur{chord.pitches};
      if (has_parallel_perfect(prev, cur))
        problems.push_back("chords " + std::to_string(b - 1) + "->" +
                           std::to_string(b) + ": parallel perfect interval");
    }
  }
  return problems;
}

namespace {

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

Score bar_to_score(const Bar& bar) {
  Score score;
  score.ppq = kDefaultPpq;
  score.time_signatures.push_back({0, 4, 4});
  score.tempo_events.push_back({0, 500000});
  score.notes = bar.notes;
  return score;
}

nlohmann::json tonality_json(const Tonality& t) {
  return {{"tonic_pc", t.tonic_pc},
          {"mode", t.mode == Mode::kMajor ? "major" : "minor"}};
}

constexpr std::uint64_t kSkeletonStream = 0x536b656cULL;  // skeleton seeds
constexpr std::uint64_t kRealisationStream = 0x5265616cULL;

}  // namespace

CorpusItems generate_corpus_items(const CorpusParams& params) {
  if (params.n_skeletons < 1 || params.per_skeleton < 1)
    throw ValidationError("corpus needs at least one skeleton and one realisation");
  if (params.nht_min < 0 || params.nht_max < params.nht_min)
    throw ValidationError("bad non-harmonic tone range");

  std::vector<Tonality> keys;
  for (int tonic = 0; tonic < 12; ++tonic)
    for (Mode mode : {Mode::kMajor, Mode::kMinor}) keys.push_back({tonic, mode});
  Rng key_rng(Rng::mix(params.seed, kSkeletonStream, 0));
  key_rng.shuffle(keys);

  const std::vector<NhtKind> all_kinds(kAllNhtKinds.begin(), kAllNhtKinds.end());
  CorpusItems items;
  for (int i = 0; i < params.n_skeletons; ++i) {
    const Tonality key = keys[static_cast<std::size_t>(i) % keys.size()];
    // retry until the skeleton can host the largest requested ornament count
    Skeleton skeleton;
    bool accepted = false;
    for (int attempt = 0; attempt < 200 && !accepted; ++attempt) {
      try {
        skeleton = generate_skeleton(
            key, params.n_chords,
            Rng::mix(params.seed, kSkeletonStream + 1 + attempt, i));
      } catch (const GenerationError&) {
        continue;
      }
      accepted = nht_capacity(skeleton, all_kinds) >= params.nht_max;
    }
    if (!accepted)
      throw GenerationError("could not generate a skeleton in " +
                            tonality_name(key) + " with capacity for " +
                            std::to_string(params.nht_max) +
                            " non-harmonic tones");
    skeleton.id = "skel_" + zero_pad(i, 5);
    items.skeletons.push_back(skeleton);

    const int span = params.nht_max - params.nht_min + 1;
    for (int j = 0; j < params.per_skeleton; ++j) {
      const int count = params.nht_min + (j % span);
      Realisation real = realize_skeleton(
          skeleton, count, all_kinds,
          Rng::mix(params.seed, kRealisationStream + i, j));
      real.id = "real_" + zero_pad(i, 5) + "_" + zero_pad(j, 4);
      real.skeleton_id = skeleton.id;
      items.realisations.push_back(std::move(real));
    }
  }
  return items;
}

CorpusSummary build_eval_corpus(const CorpusParams& params,
                                const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  CorpusItems items = generate_corpus_items(params);

  std::error_code ec;
  fs::create_directories(out_dir / "skeletons", ec);
  fs::create_directories(out_dir / "realisations", ec);
  if (ec) throw IoError("cannot create corpus directories under " + out_dir.string());

  auto write_bar = [](const fs::path& path, const Bar& bar) {
    auto bytes = write_midi(bar_to_score(bar));
    write_file(path.string(), bytes);
  };

  std::ofstream meta(out_dir / "meta.jsonl", std::ios::trunc);
  if (!meta) throw IoError("cannot open meta.jsonl for writing");

  for (const auto& s : items.skeletons) {
    const std::string file = "skeletons/" + s.id + ".mid";
    write_bar(out_dir / file, skeleton_to_bar(s));
    nlohmann::json j{{"item_id", s.id},
                     {"kind", "skeleton"},
                     {"skeleton_id", s.id},
                     {"tonality", tonality_json(s.tonality)},
                     {"nht_count", 0},
                     {"nhts", nlohmann::json::array()},
                     {"file", file}};
    meta << j.dump() << "\n";
  }
  for (const auto& r : items.realisations) {
    const std::string file = "realisations/" + r.id + ".mid";
    write_bar(out_dir / file, r.bar);
    nlohmann::json nhts = nlohmann::json::array();
    for (const auto& nht : r.nht_list)
      nhts.push_back({{"kind", nht_kind_name(nht.kind)},
                      {"voice", nht.voice},
                      {"column", nht.column},
                      {"pitch", nht.pitch}});
    nlohmann::json j{{"item_id", r.id},
                     {"kind", "realisation"},
                     {"skeleton_id", r.skeleton_id},
                     {"tonality", tonality_json(r.tonality)},
                     {"nht_count", r.nht_count()},
                     {"nhts", nhts},
                     {"file", file}};
    meta << j.dump() << "\n";
  }
  meta.close();
  if (!meta) throw IoError("write failure on meta.jsonl");

  CorpusSummary summary;
  summary.skeletons = static_cast<int>(items.skeletons.size());
  summary.realisations = static_cast<int>(items.realisations.size());
  summary.meta_path = out_dir / "meta.jsonl";
  return summary;
}

}  // namespace scorewave
