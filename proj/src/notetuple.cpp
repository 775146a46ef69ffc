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

#include "scorewave/notetuple.hpp"

#include <algorithm>
#include <tuple>

#include "scorewave/errors.hpp"

namespace scorewave {

TupleSequence encode_notetuple(const Bar& bar, const TupleCodecConfig& cfg) {
  struct GridNote {
    int on_col, dur_cols, pitch, velocity;
  };
  std::vector<GridNote> grid;
  grid.reserve(bar.notes.size());
  for (const auto& n : bar.notes) {
    ColumnSpan span = note_column_span(n, bar.quantum, cfg.steps);
    grid.push_back({span.begin, span.end - span.begin, n.pitch, n.velocity});
  }
  if (static_cast<int>(grid.size()) > cfg.max_tuples)
    throw OverBudgetError("bar has " + std::to_string(grid.size()) +
                              " notes, tuple budget is " +
                              std::to_string(cfg.max_tuples),
                          static_cast<int>(grid.size()), cfg.max_tuples);
  std::sort(grid.begin(), grid.end(), [](const GridNote& a, const GridNote& b) {
    return std::tie(a.on_col, a.pitch, a.dur_cols) <
           std::tie(b.on_col, b.pitch, b.dur_cols);
  });

  TupleSequence seq;
  seq.tuples.resize(static_cast<std::size_t>(cfg.max_tuples));
  int prev_onset = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    NoteTuple t;
    t.time_offset = grid[i].on_col - prev_onset;
    t.pitch = grid[i].pitch;
    t.velocity = grid[i].velocity;
    t.duration = grid[i].dur_cols;
    t.is_empty = false;
    seq.tuples[i] = t;
    prev_onset = grid[i].on_col;
  }
  return seq;
}

TupleDecodeResult decode_notetuple(const TupleSequence& seq,
                                   const TupleCodecConfig& cfg) {
  TupleDecodeResult result;
  result.bar.quantum = cfg.quantum;
  result.bar.steps = cfg.steps;

  int onset = 0;
  bool saw_empty = false;
  for (int i = 0; i < static_cast<int>(seq.tuples.size()); ++i) {
    const NoteTuple& t = seq.tuples[i];
    if (t.is_empty) {
      saw_empty = true;
      continue;
    }
    if (saw_empty) {
      result.violations.push_back({ViolationKind::kInteriorPadding, i, t.pitch,
                                   "tuple after padding"});
      saw_empty = false;
    }
    onset += t.time_offset;
    if (onset >= cfg.steps) {
      result.violations.push_back(
          {ViolationKind::kTupleOverflow, i, t.pitch,
           "cumulative onset " + std::to_string(onset) + " at/past column " +
               std::to_string(cfg.steps)});
      continue;
    }
    int duration = t.duration;
    if (duration <= 0) {
      result.violations.push_back({ViolationKind::kZeroDuration, i, t.pitch,
                                   "non-empty tuple with duration 0"});
      duration = 1;
    }
    if (onset + duration > cfg.steps) {
      result.violations.push_back(
          {ViolationKind::kTupleClipped, i, t.pitch,
           "duration runs " + std::to_string(onset + duration - cfg.steps) +
               " column(s) past the bar end, clipped"});
      duration = cfg.steps - onset;
    }
    Note n;
    n.pitch = t.pitch;
    n.onset = static_cast<std::int64_t>(onset) * cfg.quantum;
    n.duration = static_cast<std::int64_t>(duration) * cfg.quantum;
    n.velocity = t.velocity;
    result.bar.notes.push_back(n);
  }
  sort_notes(result.bar.notes);
  return result;
}

}  // namespace scorewave
