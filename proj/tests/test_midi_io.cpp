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

#include "oracles.hpp"
#include "scorewave/errors.hpp"
#include "scorewave/midi.hpp"
#include "scorewave/rng.hpp"

using namespace scorewave;

namespace {

// hand-assembled format-0 file: one C4 quarter at 120 BPM, ppq 480
const std::uint8_t kMinimalFile[] = {
    'M', 'T', 'h', 'd', 0, 0, 0, 6, 0, 0, 0, 1, 0x01, 0xe0,
    'M', 'T', 'r', 'k', 0, 0, 0, 26,
    0x00, 0xff, 0x51, 0x03, 0x07, 0xa1, 0x20,        // tempo 500000
    0x00, 0xff, 0x58, 0x04, 0x04, 0x02, 0x18, 0x08,  // 4/4
    0x00, 0x90, 0x3c, 0x50,                          // note on C4
    0x83, 0x60, 0x80, 0x3c, 0x00,                    // delta 480, note off
    0x00, 0xff, 0x2f, 0x00,                          // end of track
};

Score random_score(Rng& rng) {
  Score s;
  s.ppq = 480;
  s.time_signatures.push_back({0, 4, 4});
  s.tempo_events.push_back({0, 500000});
  const int n = rng.uniform(1, 40);
  for (int i = 0; i < n; ++i) {
    Note note;
    note.pitch = rng.uniform(20, 108);
    note.onset = rng.uniform(0, 8000);
    note.duration = rng.uniform(1, 2000);
    note.velocity = rng.uniform(1, 127);
    note.voice = rng.uniform(0, 3);
    s.notes.push_back(note);
  }
  sort_notes(s.notes);
  return s;
}

}  // namespace

TEST_CASE("parse: minimal file yields one C4 quarter at 120 BPM") {
  auto [score, diag] = parse_midi(kMinimalFile);
  CHECK(diag.format == 0);
  CHECK(diag.track_count == 1);
  CHECK(score.ppq == 480);
  REQUIRE(score.notes.size() == 1);
  CHECK(score.notes[0].pitch == 60);
  CHECK(score.notes[0].onset == 0);
  CHECK(score.notes[0].duration == 480);
  CHECK(score.notes[0].velocity == 0x50);
  REQUIRE(score.tempo_events.size() == 1);
  CHECK(score.tempo_events[0].usec_per_quarter == 500000);
  REQUIRE(!score.time_signatures.empty());
  CHECK(score.time_signatures[0].numerator == 4);
}

TEST_CASE("parse: zero-length input is a header error") {
  CHECK_THROWS_AS(parse_midi(std::span<const std::uint8_t>{}), MidiError);
}

TEST_CASE("parse: wrong magic is a header error") {
  const std::uint8_t bad[] = {'R', 'I', 'F', 'F', 0, 0, 0, 6};
  CHECK_THROWS_AS(parse_midi(bad), MidiError);
}

TEST_CASE("parse: running status carries across consecutive note-ons") {
  // byte-level file with one status byte shared by 4 note-ons (+offs)
  std::vector<std::uint8_t> track = {
      0x00, 0x90, 60, 64,  // explicit status
      0x00, 62, 64,        // running
      0x00, 64, 64,
      0x00, 65, 64,
      0x60, 60, 0,  // running-status note-offs via velocity 0
      0x00, 62, 0,
      0x00, 64, 0,
      0x00, 65, 0,
      0x00, 0xff, 0x2f, 0x00,
  };
  std::vector<std::uint8_t> file = {'M', 'T', 'h', 'd', 0, 0, 0, 6,
                                    0, 0, 0, 1, 0x01, 0xe0,
                                    'M', 'T', 'r', 'k', 0, 0, 0,
                                    static_cast<std::uint8_t>(track.size())};
  file.insert(file.end(), track.begin(), track.end());

  auto [score, diag] = parse_midi(file);
  REQUIRE(score.notes.size() == 4);
  CHECK(score.notes[0].pitch == 60);
  CHECK(score.notes[3].pitch == 65);
  for (const auto& n : score.notes) CHECK(n.duration == 0x60);
}

TEST_CASE("parse: dangling note-on closes at track end with a warning") {
  std::vector<std::uint8_t> track = {
      0x00, 0x90, 60, 64,
      0x81, 0x40, 0xff, 0x2f, 0x00,  // end of track at tick 192
  };
  std::vector<std::uint8_t> file = {'M', 'T', 'h', 'd', 0, 0, 0, 6,
                                    0, 0, 0, 1, 0x01, 0xe0,
                                    'M', 'T', 'r', 'k', 0, 0, 0,
                                    static_cast<std::uint8_t>(track.size())};
  file.insert(file.end(), track.begin(), track.end());
  auto [score, diag] = parse_midi(file);
  REQUIRE(score.notes.size() == 1);
  CHECK(score.notes[0].duration == 192);
  bool warned = false;
  for (const auto& w : diag.warnings)
    warned = warned || w.message.find("dangling") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("parse: overlapping identical pitches close earliest-first") {
  std::vector<std::uint8_t> track = {
      0x00, 0x90, 60, 64,        // on at 0
      0x81, 0x40, 0x90, 60, 64,  // on at 192
      0x81, 0x40, 0x80, 60, 0,   // off at 384 -> closes the tick-0 note
      0x81, 0x40, 0x80, 60, 0,   // off at 576
      0x00, 0xff, 0x2f, 0x00,
  };
  std::vector<std::uint8_t> file = {'M', 'T', 'h', 'd', 0, 0, 0, 6,
                                    0, 0, 0, 1, 0x01, 0xe0,
                                    'M', 'T', 'r', 'k', 0, 0, 0,
                                    static_cast<std::uint8_t>(track.size())};
  file.insert(file.end(), track.begin(), track.end());
  auto [score, diag] = parse_midi(file);
  REQUIRE(score.notes.size() == 2);
  CHECK(score.notes[0].onset == 0);
  CHECK(score.notes[0].duration == 384);
  CHECK(score.notes[1].onset == 192);
  CHECK(score.notes[1].duration == 384);
}

TEST_CASE("write: empty score still parses") {
  Score s;
  s.time_signatures.push_back({0, 4, 4});
  auto bytes = write_midi(s);
  auto [back, diag] = parse_midi(bytes);
  CHECK(back.notes.empty());
  CHECK(back.time_signatures.size() == 1);
}

TEST_CASE("write/parse identity on one-note score") {
  Score s;
  s.time_signatures.push_back({0, 4, 4});
  s.notes.push_back({60, 0, 480, 90, 0});
  auto [back, diag] = parse_midi(write_midi(s));
  CHECK(back.ppq == s.ppq);
  CHECK(back.notes == s.notes);
}

TEST_CASE("write/parse identity on 100 random multi-voice scores") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    Score s = random_score(rng);
    auto [back, diag] = parse_midi(write_midi(s));
    CHECK(back.ppq == s.ppq);
    CHECK(back.time_signatures == s.time_signatures);
    CHECK(back.notes == s.notes);
  }
}

TEST_CASE("fuzz: random byte strings produce structured errors only") {
  Rng rng(99);
  int parsed_ok = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(rng.uniform(0, 200)));
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.uniform(0, 255));
    try {
      parse_midi(bytes);
      ++parsed_ok;
    } catch (const MidiError&) {
      // structured failure is the expected outcome
    }
  }
  CHECK(parsed_ok >= 0);  // reaching here means no crash and no foreign throw
}

TEST_CASE("fuzz: mutated valid files do not crash the parser") {
  Rng rng(100);
  Score base = random_score(rng);
  auto bytes = write_midi(base);
  for (int trial = 0; trial < 2000; ++trial) {
    auto mutated = bytes;
    const int flips = rng.uniform(1, 8);
    for (int i = 0; i < flips; ++i)
      mutated[static_cast<std::size_t>(
          rng.uniform(0, static_cast<int>(mutated.size()) - 1))] =
          static_cast<std::uint8_t>(rng.uniform(0, 255));
    try {
      parse_midi(mutated);
    } catch (const MidiError&) {
    }
  }
}
