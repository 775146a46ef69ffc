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

#ifndef SCOREWAVE_VIOLATIONS_HPP_
#define SCOREWAVE_VIOLATIONS_HPP_

#include <string>
#include <vector>

namespace scorewave {

/// Validity problems found while decoding a fixed-size representation.
/// Decoders report these instead of silently repairing the data.
enum class ViolationKind {
  kNeverStarted,     // NOTE_OFF without a sounding note
  kNeverEnded,       // note still open at bar end
  kTimeOverflow,     // time advanced past the last column
  kTimeUnderrun,     // sequence ended before the bar was filled
  kTupleOverflow,    // cumulative tuple onset at/past bar end
  kTupleClipped,     // tuple duration ran past bar end, clipped
  kZeroDuration,     // non-empty tuple with duration 0
  kInteriorPadding,  // padding followed by real content
};

struct Violation {
  ViolationKind kind;
  int position = 0;  // token or tuple index
  int pitch = -1;    // when pitch-related, else -1
  std::string message;
};

std::string violation_kind_name(ViolationKind kind);

}  // namespace scorewave

#endif  // SCOREWAVE_VIOLATIONS_HPP_
