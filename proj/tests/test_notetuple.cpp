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
#include "scorewave/notetuple.hpp"
#include "scorewave/rng.hpp"

using namespace scorewave;

TEST_CASE("encode: empty bar is 16 empty tuples") {
  TupleSequence seq = encode_notetuple(Bar{});
  REQUIRE(seq.tuples.size() == 16);
  for (const auto& t : seq.tuples) {
    CHECK(t.is_empty);
    CHECK(t.duration == 0);
  }
}

TEST_CASE("encode: chord members share onset, so the second offset is zero") {
  Bar bar;
  bar.notes.push_back({60, 0, 480, 90, 0});
  bar.notes.push_back({64, 0, 480, 90, 1});
  TupleSequence seq = encode_notetuple(bar);
  CHECK(seq.tuples[0] == NoteTuple{0, 60, 90, 4, false});
  CHECK(seq.tuples[1] == NoteTuple{0, 64, 90, 4, false});
  for (std::size_t i = 2; i < 16; ++i) CHECK(seq.tuples[i].is_empty);
}

TEST_CASE("encode: 17 notes exceed the budget") {
  Bar bar;
  for (int i = 0; i < 17; ++i)
    bar.notes.push_back({40 + i, (i % 16) * 120, 120, 80, 0});
  CHECK_THROWS_AS(encode_notetuple(bar), OverBudgetError);
}

TEST_CASE("decode: all-pad sequence is an empty bar") {
  TupleSequence seq;
  seq.tuples.resize(16);
  TupleDecodeResult result = decode_notetuple(seq);
  CHECK(result.bar.notes.empty());
  CHECK(result.violations.empty());
}

TEST_CASE("round trip is exact for bars within the budget") {
  Rng rng(23);
  int done = 0;
  while (done < 300) {
    Bar bar = oracles::random_bar(rng, 8);
    if (bar.notes.size() > 16) continue;
    TupleSequence seq = encode_notetuple(bar);
    TupleDecodeResult result = decode_notetuple(seq);
    CHECK(result.violations.empty());
    CHECK(same_notes(result.bar, quantize_bar(bar)));
    ++done;
  }
}

TEST_CASE("offset prefix sums are non-decreasing and inside the bar") {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    Bar bar = oracles::random_bar(rng, 8);
    if (bar.notes.size() > 16) continue;
    TupleSequence seq = encode_notetuple(bar);
    int cum = 0;
    for (const auto& t : seq.tuples) {
      if (t.is_empty) continue;
      CHECK(t.time_offset >= 0);
      cum += t.time_offset;
      CHECK(cum < 16);
      CHECK(t.duration >= 1);
    }
  }
}

TEST_CASE("decode: duration past the bar end is clipped and reported") {
  // tick enumeration: onset column 14 + duration 4 runs 2 past the end
  TupleSequence seq;
  seq.tuples.resize(16);
  seq.tuples[0] = {14, 60, 80, 4, false};
  TupleDecodeResult result = decode_notetuple(seq);
  REQUIRE(result.bar.notes.size() == 1);
  CHECK(result.bar.notes[0].onset == 14 * 120);
  CHECK(result.bar.notes[0].duration == 2 * 120);
  REQUIRE(result.violations.size() == 1);
  CHECK(result.violations[0].kind == ViolationKind::kTupleClipped);
}

TEST_CASE("decode: cumulative onset past the bar is an overflow violation") {
  TupleSequence seq;
  seq.tuples.resize(16);
  seq.tuples[0] = {10, 60, 80, 2, false};
  seq.tuples[1] = {10, 62, 80, 2, false};  // cumulative 20 >= 16
  TupleDecodeResult result = decode_notetuple(seq);
  CHECK(result.bar.notes.size() == 1);
  REQUIRE(result.violations.size() == 1);
  CHECK(result.violations[0].kind == ViolationKind::kTupleOverflow);
}

TEST_CASE("decode: zero-duration non-empty tuple is flagged") {
  TupleSequence seq;
  seq.tuples.resize(16);
  seq.tuples[0] = {0, 60, 80, 0, false};
  TupleDecodeResult result = decode_notetuple(seq);
  REQUIRE(result.violations.size() == 1);
  CHECK(result.violations[0].kind == ViolationKind::kZeroDuration);
}
