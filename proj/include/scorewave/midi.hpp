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

#ifndef SCOREWAVE_MIDI_HPP_
#define SCOREWAVE_MIDI_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scorewave/core.hpp"

namespace scorewave {

struct MidiWarning {
  std::size_t offset = 0;
  std::string message;
};

struct MidiDiagnostics {
  std::vector<MidiWarning> warnings;
  int track_count = 0;
  int format = 0;  // 0 or 1
};

/// Parse a Standard MIDI File (formats 0 and 1).
///
/// Note-on/note-off pairs are matched per (channel, pitch), earliest open
/// note first; note-on with velocity 0 counts as note-off; running status
/// is supported. Format-1 tracks are merged onto the shared tick timeline;
/// a note's voice is its track index (format 1) or channel (format 0).
/// Malformed input raises MidiError with the offending byte offset;
/// recoverable oddities (dangling note-ons, unknown meta events, missing
/// initial time signature) are reported as warnings.
std::pair<Score, MidiDiagnostics> parse_midi(std::span<const std::uint8_t> bytes);

/// Serialize a Score as SMF format 1: track 0 carries tempo and time
/// signature meta events, then one track per voice. parse_midi of the
/// result reproduces the score's ppq, notes and time signatures exactly.
std::vector<std::uint8_t> write_midi(const Score& score);

// Filesystem conveniences used by the pipeline and CLI.
std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace scorewave

#endif  // SCOREWAVE_MIDI_HPP_
