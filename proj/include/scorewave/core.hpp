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

#ifndef SCOREWAVE_CORE_HPP_
#define SCOREWAVE_CORE_HPP_

#include <cstdint>
#include <vector>

namespace scorewave {

inline constexpr int kNumPitches = 128;
inline constexpr int kDefaultVelocity = 80;
inline constexpr int kDefaultPpq = 480;

/// One note. Onset/duration are in ticks; inside a Bar the onset is
/// relative to the bar start.
struct Note {
  int pitch = 60;            // 0..127
  std::int64_t onset = 0;    // ticks
  std::int64_t duration = 1; // ticks, >= 1
  int velocity = kDefaultVelocity;  // 0..127
  int voice = 0;             // part index

  friend bool operator==(const Note&, const Note&) = default;
};

struct TimeSignature {
  std::int64_t tick = 0;
  int numerator = 4;
  int denominator = 4;

  friend bool operator==(const TimeSignature&, const TimeSignature&) = default;
};

struct TempoEvent {
  std::int64_t tick = 0;
  int usec_per_quarter = 500000;

  friend bool operator==(const TempoEvent&, const TempoEvent&) = default;
};

/// In-memory score. time_signatures are sorted by tick with the first at
/// tick 0 for any score produced by this library.
struct Score {
  int ppq = kDefaultPpq;
  std::vector<TimeSignature> time_signatures;
  std::vector<Note> notes;
  std::vector<TempoEvent> tempo_events;
};

/// One bar of music on a quantized grid of `steps` columns, each
/// `quantum` ticks long. Note onsets are relative to the bar start.
struct Bar {
  int index = 0;
  int quantum = 120;
  int steps = 16;
  std::vector<Note> notes;
};

/// Binary 128 x T activation matrix. Equality compares the grid content
/// (steps and cells); quantum is tick metadata carried along for bar
/// reconstruction and does not participate in equality.
class PianoRoll {
 public:
  explicit PianoRoll(int steps = 16, int quantum = 120);

  bool get(int pitch, int column) const {
    return cells_[static_cast<std::size_t>(pitch) * steps_ + column] != 0;
  }
  void set(int pitch, int column, bool value) {
    cells_[static_cast<std::size_t>(pitch) * steps_ + column] = value ? 1 : 0;
  }

  int steps() const { return steps_; }
  int quantum() const { return quantum_; }
  int active_cells() const;

  friend bool operator==(const PianoRoll& a, const PianoRoll& b) {
    return a.steps_ == b.steps_ && a.cells_ == b.cells_;
  }

 private:
  int steps_;
  int quantum_;
  std::vector<std::uint8_t> cells_;  // 128 x steps, pitch-major
};

/// Round-half-up snap of a tick position to the nearest column.
int snap_to_column(std::int64_t tick, int quantum);

/// Column span [begin, end) a note occupies after snapping. A note shorter
/// than half a quantum still occupies one column; spans are clamped to
/// [0, steps].
struct ColumnSpan {
  int begin = 0;
  int end = 0;
};
ColumnSpan note_column_span(const Note& note, int quantum, int steps);

/// Snap every note of a bar onto its column grid (onset and duration become
/// exact multiples of the quantum). Used by the fixed-size codecs so all
/// encoders share one snapping rule.
Bar quantize_bar(const Bar& bar);

/// Split a score into bars of `steps_per_bar` columns. Notes crossing a
/// barline are split into tied segments, one per bar. Throws
/// ValidationError when a time signature changes mid-bar or the bar length
/// is not divisible into steps_per_bar columns.
std::vector<Bar> slice_into_bars(const Score& score, int steps_per_bar);

PianoRoll bar_to_pianoroll(const Bar& bar);

/// Maximal runs of consecutive 1s become single notes (velocity
/// kDefaultVelocity, voice 0). bar_to_pianoroll(pianoroll_to_bar(r)) == r.
Bar pianoroll_to_bar(const PianoRoll& roll);

/// Shift all pitches by `semitones`; rhythm unchanged. Throws
/// ValidationError when any pitch would leave 0..127.
Bar transpose_bar(const Bar& bar, int semitones);

/// Canonical note order: (onset, voice, pitch, duration, velocity).
void sort_notes(std::vector<Note>& notes);

/// True when the two bars contain the same notes, ignoring voice
/// assignment. Codec round trips are checked with this.
bool same_notes(const Bar& a, const Bar& b);

}  // namespace scorewave

#endif  // SCOREWAVE_CORE_HPP_
