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

#include "scorewave/events.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "scorewave/errors.hpp"

namespace scorewave {

namespace {

struct GridNote {
  int on_col;
  int off_col;
  int pitch;
  int vel_bin;
};

std::vector<GridNote> to_grid(const Bar& bar, int steps, int bins) {
  std::vector<GridNote> grid;
  grid.reserve(bar.notes.size());
  for (const auto& n : bar.notes) {
    ColumnSpan span = note_column_span(n, bar.quantum, steps);
    grid.push_back({span.begin, span.end, n.pitch, velocity_bin_of(n.velocity, bins)});
  }
  std::sort(grid.begin(), grid.end(), [](const GridNote& a, const GridNote& b) {
    return std::tie(a.on_col, a.pitch, a.off_col) <
           std::tie(b.on_col, b.pitch, b.off_col);
  });
  return grid;
}

void pad_to_length(EventSequence& seq, int max_events) {
  seq.true_length = static_cast<int>(seq.events.size());
  seq.events.resize(static_cast<std::size_t>(max_events), MusicEvent{});
}

}  // namespace

std::string violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNeverStarted: return "never_started";
    case ViolationKind::kNeverEnded: return "never_ended";
    case ViolationKind::kTimeOverflow: return "time_overflow";
    case ViolationKind::kTimeUnderrun: return "time_underrun";
    case ViolationKind::kTupleOverflow: return "tuple_overflow";
    case ViolationKind::kTupleClipped: return "tuple_clipped";
    case ViolationKind::kZeroDuration: return "zero_duration";
    case ViolationKind::kInteriorPadding: return "interior_padding";
  }
  return "unknown";
}

int velocity_bin_of(int velocity, int bins) {
  if (bins <= 1) return 0;
  const int width = (kNumPitches + bins - 1) / bins;  // 128 / bins
  return std::clamp(velocity / width, 0, bins - 1);
}

int velocity_of_bin(int bin, int bins) {
  if (bins <= 1) return kDefaultVelocity;
  const int width = (kNumPitches + bins - 1) / bins;
  return std::min(127, bin * width + width / 2);
}

EventSequence encode_midilike(const Bar& bar, const EventCodecConfig& cfg) {
  const int steps = cfg.steps;
  auto grid = to_grid(bar, steps, cfg.velocity_bins);

  EventSequence seq;
  int col = 0;
  int vel_state = 0;
  std::size_t next_on = 0;

  // active notes keyed by off column
  std::multimap<int, GridNote> sounding;

  auto emit_shift = [&](int target) {
    if (target > col) {
      seq.events.push_back({EventKind::kTimeShift, target - col});
      col = target;
    }
  };

  while (next_on < grid.size() || !sounding.empty()) {
    int next_col = steps;
    if (!sounding.empty()) next_col = std::min(next_col, sounding.begin()->first);
    if (next_on < grid.size())
      next_col = std::min(next_col, grid[next_on].on_col);
    emit_shift(next_col);

    // note-offs first, pitch ascending
    std::vector<int> offs;
    auto range = sounding.equal_range(col);
    for (auto it = range.first; it != range.second; ++it)
      offs.push_back(it->second.pitch);
    sounding.erase(range.first, range.second);
    std::sort(offs.begin(), offs.end());
    for (int p : offs) seq.events.push_back({EventKind::kNoteOff, p});

    // note-ons grouped by velocity bin (ascending), pitch ascending inside
    std::vector<GridNote> ons;
    while (next_on < grid.size() && grid[next_on].on_col == col)
      ons.push_back(grid[next_on++]);
    std::sort(ons.begin(), ons.end(), [](const GridNote& a, const GridNote& b) {
      return std::tie(a.vel_bin, a.pitch) < std::tie(b.vel_bin, b.pitch);
    });
    for (const auto& g : ons) {
      if (cfg.velocity_bins > 1 && g.vel_bin != vel_state) {
        seq.events.push_back({EventKind::kSetVelocity, g.vel_bin});
        vel_state = g.vel_bin;
      }
      seq.events.push_back({EventKind::kNoteOn, g.pitch});
      sounding.emplace(g.off_col, g);
    }
  }
  emit_shift(steps);

  if (static_cast<int>(seq.events.size()) > cfg.max_events)
    throw OverBudgetError("bar needs " + std::to_string(seq.events.size()) +
                              " events, budget is " +
                              std::to_string(cfg.max_events),
                          static_cast<int>(seq.events.size()), cfg.max_events);
  pad_to_length(seq, cfg.max_events);
  return seq;
}

EventDecodeResult decode_midilike(const EventSequence& seq,
                                  const EventCodecConfig& cfg) {
  EventDecodeResult result;
  result.bar.quantum = cfg.quantum;
  result.bar.steps = cfg.steps;

  int col = 0;
  int vel_bin = 0;
  bool saw_pad = false;
  std::map<int, std::deque<std::pair<int, int>>> open;  // pitch -> (col, bin)

  auto add_note = [&](int pitch, int on_col, int off_col, int bin) {
    Note n;
    n.pitch = pitch;
    n.onset = static_cast<std::int64_t>(on_col) * cfg.quantum;
    n.duration = static_cast<std::int64_t>(std::max(1, off_col - on_col)) *
                 cfg.quantum;
    n.velocity = velocity_of_bin(bin, cfg.velocity_bins);
    result.bar.notes.push_back(n);
  };

  for (int i = 0; i < static_cast<int>(seq.events.size()); ++i) {
    const MusicEvent& e = seq.events[i];
    if (e.kind == EventKind::kPad) {
      saw_pad = true;
      continue;
    }
    if (saw_pad) {
      result.violations.push_back({ViolationKind::kInteriorPadding, i, -1,
                                   "event after padding"});
      saw_pad = false;
    }
    switch (e.kind) {
      case EventKind::kTimeShift:
        col += e.value;
        if (col > cfg.steps) {
          result.violations.push_back(
              {ViolationKind::kTimeOverflow, i, -1,
               "time advanced to column " + std::to_string(col) + " of " +
                   std::to_string(cfg.steps)});
          col = cfg.steps;
        }
        break;
      case EventKind::kNoteOn:
        open[e.value].push_back({col, vel_bin});
        break;
      case EventKind::kNoteOff: {
        auto it = open.find(e.value);
        if (it == open.end() || it->second.empty()) {
          result.violations.push_back(
              {ViolationKind::kNeverStarted, i, e.value,
               "note-off for pitch " + std::to_string(e.value) +
                   " that never started"});
        } else {
          auto [on_col, bin] = it->second.front();
          it->second.pop_front();
          add_note(e.value, on_col, col, bin);
        }
        break;
      }
      case EventKind::kSetVelocity:
        vel_bin = e.value;
        break;
      default:
        // mono tokens are not valid in the polyphonic stream
        result.violations.push_back({ViolationKind::kInteriorPadding, i, -1,
                                     "unexpected mono token"});
        break;
    }
  }

  if (col < cfg.steps)
    result.violations.push_back(
        {ViolationKind::kTimeUnderrun, static_cast<int>(seq.events.size()), -1,
         "time shifts sum to " + std::to_string(col) + " of " +
             std::to_string(cfg.steps)});
  for (auto& [pitch, opens] : open) {
    for (auto [on_col, bin] : opens) {
      result.violations.push_back(
          {ViolationKind::kNeverEnded, static_cast<int>(seq.events.size()),
           pitch, "pitch " + std::to_string(pitch) + " never ended"});
      add_note(pitch, on_col, cfg.steps, bin);
    }
  }
  sort_notes(result.bar.notes);
  return result;
}

EventSequence encode_mono(const Bar& bar, const EventCodecConfig& cfg) {
  const int steps = cfg.steps;
  auto grid = to_grid(bar, steps, cfg.velocity_bins);

  // per-column sounding pitch and onset flag
  std::vector<int> pitch(steps, -1);
  std::vector<bool> onset(steps, false);
  for (const auto& g : grid) {
    for (int c = g.on_col; c < g.off_col; ++c) {
      if (pitch[c] != -1)
        throw NotMonophonicError("two pitches sound in column " +
                                 std::to_string(c));
      pitch[c] = g.pitch;
    }
    onset[g.on_col] = true;
  }

  EventSequence seq;
  for (int c = 0; c < steps; ++c) {
    if (pitch[c] == -1)
      seq.events.push_back({EventKind::kMonoRest, 0});
    else if (onset[c])
      seq.events.push_back({EventKind::kMonoNote, pitch[c]});
    else
      seq.events.push_back({EventKind::kMonoHold, 0});
  }
  seq.true_length = steps;
  return seq;
}

Bar decode_mono(const EventSequence& seq, const EventCodecConfig& cfg) {
  Bar bar;
  bar.quantum = cfg.quantum;
  bar.steps = cfg.steps;
  int cur_pitch = -1;
  int cur_start = 0;
  auto flush = [&](int end_col) {
    if (cur_pitch >= 0 && end_col > cur_start) {
      Note n;
      n.pitch = cur_pitch;
      n.onset = static_cast<std::int64_t>(cur_start) * cfg.quantum;
      n.duration = static_cast<std::int64_t>(end_col - cur_start) * cfg.quantum;
      bar.notes.push_back(n);
    }
    cur_pitch = -1;
  };
  const int n = std::min<int>(cfg.steps, static_cast<int>(seq.events.size()));
  for (int c = 0; c < n; ++c) {
    const MusicEvent& e = seq.events[c];
    if (e.kind == EventKind::kMonoNote) {
      flush(c);
      cur_pitch = e.value;
      cur_start = c;
    } else if (e.kind == EventKind::kMonoRest) {
      flush(c);
    }  // kMonoHold extends
  }
  flush(n);
  sort_notes(bar.notes);
  return bar;
}

int event_to_token(const MusicEvent& e) {
  switch (e.kind) {
    case EventKind::kPad: return 0;
    case EventKind::kNoteOn: return 1 + e.value;
    case EventKind::kNoteOff: return 129 + e.value;
    case EventKind::kTimeShift: return 257 + (e.value - 1);
    case EventKind::kSetVelocity: return 273 + e.value;
    default:
      throw ValidationError("mono token in polyphonic vocabulary");
  }
}

MusicEvent token_to_event(int token, const EventCodecConfig& cfg) {
  if (token == 0) return {EventKind::kPad, 0};
  if (token >= 1 && token <= 128) return {EventKind::kNoteOn, token - 1};
  if (token >= 129 && token <= 256) return {EventKind::kNoteOff, token - 129};
  if (token >= 257 && token <= 257 + cfg.steps - 1)
    return {EventKind::kTimeShift, token - 257 + 1};
  if (token >= 273 && token < 273 + cfg.velocity_bins)
    return {EventKind::kSetVelocity, token - 273};
  throw ValidationError("token " + std::to_string(token) +
                        " outside the vocabulary");
}

int mono_event_to_token(const MusicEvent& e) {
  switch (e.kind) {
    case EventKind::kMonoRest: return 0;
    case EventKind::kMonoHold: return 1;
    case EventKind::kMonoNote: return 2 + e.value;
    default:
      throw ValidationError("polyphonic token in mono vocabulary");
  }
}

MusicEvent mono_token_to_event(int token) {
  if (token == 0) return {EventKind::kMonoRest, 0};
  if (token == 1) return {EventKind::kMonoHold, 0};
  if (token >= 2 && token <= 129) return {EventKind::kMonoNote, token - 2};
  throw ValidationError("mono token " + std::to_string(token) +
                        " outside the vocabulary");
}

}  // namespace scorewave
