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

#include "scorewave/core.hpp"

#include <algorithm>
#include <tuple>

#include "scorewave/errors.hpp"

namespace scorewave {

PianoRoll::PianoRoll(int steps, int quantum)
    : steps_(steps), quantum_(quantum),
      cells_(static_cast<std::size_t>(kNumPitches) * steps, 0) {
  if (steps < 1) throw ValidationError("piano-roll needs at least one column");
  if (quantum < 1) throw ValidationError("piano-roll quantum must be >= 1");
}

int PianoRoll::active_cells() const {
  int n = 0;
  for (auto c : cells_) n += c;
  return n;
}

int snap_to_column(std::int64_t tick, int quantum) {
  // round half up; ticks are non-negative inside a bar
  return static_cast<int>((2 * tick + quantum) / (2 * quantum));
}

ColumnSpan note_column_span(const Note& note, int quantum, int steps) {
  int begin = snap_to_column(note.onset, quantum);
  int end = snap_to_column(note.onset + note.duration, quantum);
  begin = std::clamp(begin, 0, steps - 1);
  end = std::clamp(end, begin + 1, steps);
  return {begin, end};
}

Bar quantize_bar(const Bar& bar) {
  Bar out = bar;
  for (auto& n : out.notes) {
    ColumnSpan span = note_column_span(n, bar.quantum, bar.steps);
    n.onset = static_cast<std::int64_t>(span.begin) * bar.quantum;
    n.duration = static_cast<std::int64_t>(span.end - span.begin) * bar.quantum;
  }
  sort_notes(out.notes);
  return out;
}

std::vector<Bar> slice_into_bars(const Score& score, int steps_per_bar) {
  if (steps_per_bar < 1)
    throw ValidationError("steps_per_bar must be >= 1");
  if (score.time_signatures.empty())
    throw ValidationError("score has no time signature");
  if (score.notes.empty()) return {};

  std::int64_t score_end = 0;
  for (const auto& n : score.notes)
    score_end = std::max(score_end, n.onset + n.duration);

  // Walk time-signature regions, laying down bars; every signature change
  // must land exactly on a bar boundary.
  std::vector<Bar> bars;
  const auto& sigs = score.time_signatures;
  std::int64_t cursor = 0;
  std::size_t si = 0;
  while (cursor < score_end) {
    while (si + 1 < sigs.size() && sigs[si + 1].tick <= cursor) ++si;
    const TimeSignature& ts = sigs[si];
    const std::int64_t bar_num = static_cast<std::int64_t>(ts.numerator) * 4 *
                                 score.ppq;
    if (bar_num % ts.denominator != 0)
      throw ValidationError("time signature " + std::to_string(ts.numerator) +
                            "/" + std::to_string(ts.denominator) +
                            " does not give an integer bar length at ppq " +
                            std::to_string(score.ppq));
    const std::int64_t bar_len = bar_num / ts.denominator;
    if (bar_len % steps_per_bar != 0)
      throw ValidationError(
          "bar of " + std::to_string(bar_len) + " ticks is not divisible into " +
          std::to_string(steps_per_bar) + " columns");
    if (si + 1 < sigs.size()) {
      const std::int64_t next = sigs[si + 1].tick;
      if (next > cursor && (next - cursor) % bar_len != 0)
        throw ValidationError("time signature change mid-bar at tick " +
                              std::to_string(next));
    }

    Bar bar;
    bar.index = static_cast<int>(bars.size());
    bar.steps = steps_per_bar;
    bar.quantum = static_cast<int>(bar_len / steps_per_bar);
    const std::int64_t bar_begin = cursor;
    const std::int64_t bar_end = cursor + bar_len;
    for (const auto& n : score.notes) {
      const std::int64_t a = std::max(n.onset, bar_begin);
      const std::int64_t b = std::min(n.onset + n.duration, bar_end);
      if (a < b) {
        Note seg = n;
        seg.onset = a - bar_begin;
        seg.duration = b - a;
        bar.notes.push_back(seg);
      }
    }
    sort_notes(bar.notes);
    bars.push_back(std::move(bar));
    cursor = bar_end;
  }
  return bars;
}

PianoRoll bar_to_pianoroll(const Bar& bar) {
  PianoRoll roll(bar.steps, bar.quantum);
  for (const auto& n : bar.notes) {
    if (n.pitch < 0 || n.pitch >= kNumPitches) continue;
    ColumnSpan span = note_column_span(n, bar.quantum, bar.steps);
    for (int c = span.begin; c < span.end; ++c) roll.set(n.pitch, c, true);
  }
  return roll;
}

Bar pianoroll_to_bar(const PianoRoll& roll) {
  Bar bar;
  bar.quantum = roll.quantum();
  bar.steps = roll.steps();
  for (int p = 0; p < kNumPitches; ++p) {
    int c = 0;
    while (c < roll.steps()) {
      if (!roll.get(p, c)) {
        ++c;
        continue;
      }
      int start = c;
      while (c < roll.steps() && roll.get(p, c)) ++c;
      Note n;
      n.pitch = p;
      n.onset = static_cast<std::int64_t>(start) * roll.quantum();
      n.duration = static_cast<std::int64_t>(c - start) * roll.quantum();
      bar.notes.push_back(n);
    }
  }
  sort_notes(bar.notes);
  return bar;
}

Bar transpose_bar(const Bar& bar, int semitones) {
  Bar out = bar;
  for (auto& n : out.notes) {
    const int p = n.pitch + semitones;
    if (p < 0 || p >= kNumPitches)
      throw ValidationError("transposition by " + std::to_string(semitones) +
                            " moves pitch " + std::to_string(n.pitch) +
                            " out of range");
    n.pitch = p;
  }
  return out;
}

void sort_notes(std::vector<Note>& notes) {
  std::sort(notes.begin(), notes.end(), [](const Note& a, const Note& b) {
    return std::tie(a.onset, a.voice, a.pitch, a.duration, a.velocity) <
           std::tie(b.onset, b.voice, b.pitch, b.duration, b.velocity);
  });
}

bool same_notes(const Bar& a, const Bar& b) {
  if (a.notes.size() != b.notes.size()) return false;
  auto key = [](const Note& n) {
    return std::tuple(n.onset, n.pitch, n.duration, n.velocity);
  };
  std::vector<std::tuple<std::int64_t, int, std::int64_t, int>> ka, kb;
  ka.reserve(a.notes.size());
  kb.reserve(b.notes.size());
  for (const auto& n : a.notes) ka.push_back(key(n));
  for (const auto& n : b.notes) kb.push_back(key(n));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

}  // namespace scorewave
