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

#ifndef SCOREWAVE_NOTETUPLE_HPP_
#define SCOREWAVE_NOTETUPLE_HPP_

#include <vector>

#include "scorewave/core.hpp"
#include "scorewave/violations.hpp"

namespace scorewave {

/// One note as (time offset, pitch, velocity, duration). The offset is
/// measured onset-to-onset from the previous tuple in columns; chord
/// members therefore carry offset 0. A padding tuple is all zeros with
/// is_empty set (tensor layout: all-zero row).
struct NoteTuple {
  int time_offset = 0;
  int pitch = 0;
  int velocity = 0;
  int duration = 0;  // columns, >= 1 for real notes
  bool is_empty = true;

  friend bool operator==(const NoteTuple&, const NoteTuple&) = default;
};

struct TupleSequence {
  std::vector<NoteTuple> tuples;  // exactly max_tuples entries
};

struct TupleCodecConfig {
  int max_tuples = 16;
  int steps = 16;
  int quantum = 120;
};

struct TupleDecodeResult {
  Bar bar;
  std::vector<Violation> violations;
};

/// Encode a bar as a fixed-count tuple list: notes sorted by
/// (onset, pitch), first offset measured from the bar start, padded with
/// empty tuples. Throws OverBudgetError for bars with more than
/// max_tuples notes.
TupleSequence encode_notetuple(const Bar& bar, const TupleCodecConfig& cfg = {});

/// Inverse transform; cumulative onsets at/past the bar end and durations
/// running past it are reported as violations (the latter clipped).
TupleDecodeResult decode_notetuple(const TupleSequence& seq,
                                   const TupleCodecConfig& cfg = {});

}  // namespace scorewave

#endif  // SCOREWAVE_NOTETUPLE_HPP_
