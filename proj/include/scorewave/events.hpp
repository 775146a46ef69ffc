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

#ifndef SCOREWAVE_EVENTS_HPP_
#define SCOREWAVE_EVENTS_HPP_

#include <cstdint>
#include <vector>

#include "scorewave/core.hpp"
#include "scorewave/violations.hpp"

namespace scorewave {

// Event-stream representation of one bar.
//
// Polyphonic vocabulary (token ids documented in docs/formats.md):
//   PAD=0, NOTE_ON p -> 1+p, NOTE_OFF p -> 129+p,
//   TIME_SHIFT s -> 257+(s-1), SET_VELOCITY b -> 273+b.
// Monophonic vocabulary: REST=0, HOLD=1, NOTE p -> 2+p.

enum class EventKind : std::uint8_t {
  kPad,
  kNoteOn,       // value = pitch
  kNoteOff,      // value = pitch
  kTimeShift,    // value = columns, 1..steps
  kSetVelocity,  // value = velocity bin
  kMonoNote,     // value = pitch (mono variant)
  kMonoHold,
  kMonoRest,
};

struct MusicEvent {
  EventKind kind = EventKind::kPad;
  int value = 0;

  friend bool operator==(const MusicEvent&, const MusicEvent&) = default;
};

/// Fixed-length event list; entries past true_length are kPad.
struct EventSequence {
  std::vector<MusicEvent> events;
  int true_length = 0;
};

struct EventCodecConfig {
  int max_events = 64;
  int steps = 16;
  int quantum = 120;      // ticks per column of decoded bars
  int velocity_bins = 1;  // 1 disables SET_VELOCITY entirely
};

struct EventDecodeResult {
  Bar bar;
  std::vector<Violation> violations;
};

/// Encode a bar as a MIDI-like event sequence. Events at the same column
/// are ordered NOTE_OFFs, then SET_VELOCITY, then NOTE_ONs, pitch-ascending
/// within each group; TIME_SHIFTs are merged maximally and always sum to
/// exactly `steps`. Throws OverBudgetError when the bar needs more than
/// max_events events.
EventSequence encode_midilike(const Bar& bar, const EventCodecConfig& cfg = {});

/// Decode an event sequence back into a bar, collecting validity
/// violations (never-started, never-ended, time overflow/underrun) instead
/// of repairing them silently. Well-formed sequences round-trip exactly.
EventDecodeResult decode_midilike(const EventSequence& seq,
                                  const EventCodecConfig& cfg = {});

/// Monophonic per-column variant: one token per column over
/// {NOTE(pitch), HOLD, REST}. Throws NotMonophonicError when two pitches
/// sound in the same column.
EventSequence encode_mono(const Bar& bar, const EventCodecConfig& cfg = {});

/// Inverse of encode_mono (plumbing for round-trip reporting).
Bar decode_mono(const EventSequence& seq, const EventCodecConfig& cfg = {});

// Integer token ids (see vocabulary above).
int event_to_token(const MusicEvent& e);
MusicEvent token_to_event(int token, const EventCodecConfig& cfg);
int mono_event_to_token(const MusicEvent& e);
MusicEvent mono_token_to_event(int token);

/// Velocity representative of a bin (midpoint); with a single bin this is
/// kDefaultVelocity, so flat-velocity corpora round-trip exactly.
int velocity_bin_of(int velocity, int bins);
int velocity_of_bin(int bin, int bins);

}  // namespace scorewave

#endif  // SCOREWAVE_EVENTS_HPP_
