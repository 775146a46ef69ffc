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

#include "scorewave/midi.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>

#include "scorewave/errors.hpp"

namespace scorewave {

namespace {

class ByteCursor {
 public:
  ByteCursor(std::span<const std::uint8_t> data, std::size_t base)
      : data_(data), base_(base) {}

  std::size_t offset() const { return base_ + pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ >= data_.size(); }

  std::uint8_t peek() const {
    need(1);
    return data_[pos_];
  }
  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint16_t u16be() {
    need(2);
    std::uint16_t v = (std::uint16_t(data_[pos_]) << 8) | data_[pos_ + 1];
    pos_ += 2;
    return v;
  }
  std::uint32_t u32be() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 4;
    return v;
  }
  /// Variable-length quantity, at most 4 bytes per the SMF spec.
  std::uint32_t varint() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      std::uint8_t b = u8();
      v = (v << 7) | (b & 0x7f);
      if (!(b & 0x80)) return v;
    }
    throw MidiError("variable-length quantity longer than 4 bytes", offset());
  }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > data_.size())
      throw MidiError("truncated data, need " + std::to_string(n) +
                          " more byte(s)",
                      base_ + data_.size());
  }

  std::span<const std::uint8_t> data_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

struct OpenNote {
  std::int64_t start = 0;
  int velocity = 0;
};

// Meta types we understand (or deliberately ignore) without a warning.
bool known_meta(std::uint8_t type) {
  if (type <= 0x07) return true;  // sequence number + text family
  switch (type) {
    case 0x20:  // channel prefix
    case 0x21:  // port
    case 0x2f:  // end of track
    case 0x51:  // tempo
    case 0x54:  // SMPTE offset
    case 0x58:  // time signature
    case 0x59:  // key signature
      return true;
    default:
      return false;
  }
}

void parse_track(ByteCursor track, int track_index, int format, Score* score,
                 MidiDiagnostics* diag) {
  std::map<std::pair<int, int>, std::deque<OpenNote>> open;  // (ch, pitch)
  std::int64_t tick = 0;
  int running_status = -1;
  bool ended = false;

  while (!track.done() && !ended) {
    tick += track.varint();
    std::uint8_t status;
    if (track.peek() & 0x80) {
      status = track.u8();
      // sysex and meta events cancel running status
      running_status = status < 0xf0 ? status : -1;
    } else {
      if (running_status < 0)
        throw MidiError("data byte without a running status", track.offset());
      status = static_cast<std::uint8_t>(running_status);
    }

    if (status < 0xf0) {
      const int kind = status >> 4;
      const int channel = status & 0x0f;
      const int voice = format == 0 ? channel : track_index;
      switch (kind) {
        case 0x8:    // note off
        case 0x9: {  // note on (velocity 0 == off)
          const int pitch = track.u8() & 0x7f;
          const int velocity = track.u8() & 0x7f;
          const bool is_on = kind == 0x9 && velocity > 0;
          auto& q = open[{channel, pitch}];
          if (is_on) {
            q.push_back({tick, velocity});
          } else if (!q.empty()) {
            OpenNote on = q.front();
            q.pop_front();
            Note n;
            n.pitch = pitch;
            n.onset = on.start;
            n.duration = std::max<std::int64_t>(1, tick - on.start);
            n.velocity = on.velocity;
            n.voice = voice;
            score->notes.push_back(n);
          } else {
            diag->warnings.push_back(
                {track.offset(), "note-off without matching note-on (pitch " +
                                     std::to_string(pitch) + ")"});
          }
          break;
        }
        case 0xa:  // poly aftertouch
        case 0xb:  // control change
        case 0xe:  // pitch bend
          track.skip(2);
          break;
        case 0xc:  // program change
        case 0xd:  // channel aftertouch
          track.skip(1);
          break;
        default:
          throw MidiError("unexpected status byte", track.offset());
      }
    } else if (status == 0xf0 || status == 0xf7) {  // sysex: skip payload
      const std::uint32_t len = track.varint();
      track.skip(len);
    } else if (status == 0xff) {  // meta
      const std::uint8_t type = track.u8();
      const std::uint32_t len = track.varint();
      auto payload = track.take(len);
      switch (type) {
        case 0x2f:
          ended = true;
          break;
        case 0x51:
          if (len != 3)
            throw MidiError("tempo meta event must have 3 data bytes",
                            track.offset());
          score->tempo_events.push_back(
              {tick, (payload[0] << 16) | (payload[1] << 8) | payload[2]});
          break;
        case 0x58: {
          if (len != 4)
            throw MidiError("time signature meta event must have 4 data bytes",
                            track.offset());
          if (payload[1] > 12)
            throw MidiError("time signature denominator exponent too large",
                            track.offset());
          score->time_signatures.push_back(
              {tick, payload[0], 1 << payload[1]});
          break;
        }
        default:
          if (!known_meta(type))
            diag->warnings.push_back(
                {track.offset(), "unknown meta event 0x" + [type] {
                   const char* hex = "0123456789abcdef";
                   return std::string{hex[type >> 4], hex[type & 0xf]};
                 }() + " skipped"});
          break;
      }
    } else {
      throw MidiError("unsupported system realtime/common byte in track",
                      track.offset());
    }
  }

  // close dangling notes at track end
  for (auto& [key, q] : open) {
    for (const auto& on : q) {
      diag->warnings.push_back(
          {track.offset(), "dangling note-on (pitch " +
                               std::to_string(key.second) +
                               ") closed at track end"});
      Note n;
      n.pitch = key.second;
      n.onset = on.start;
      n.duration = std::max<std::int64_t>(1, tick - on.start);
      n.velocity = on.velocity;
      n.voice = format == 0 ? key.first : track_index;
      score->notes.push_back(n);
    }
  }
}

void put_u16be(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(v >> 8);
  out.push_back(v & 0xff);
}
void put_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back((v >> (8 * i)) & 0xff);
}
void put_varint(std::vector<std::uint8_t>& out, std::uint32_t v) {
  std::uint8_t buf[4];
  int n = 0;
  buf[n++] = v & 0x7f;
  while (v >>= 7) buf[n++] = 0x80 | (v & 0x7f);
  while (n--) out.push_back(buf[n]);
}

struct TrackEvent {
  std::int64_t tick;
  int order;  // stable ordering at equal tick: meta 0, note-off 1, note-on 2
  std::vector<std::uint8_t> bytes;
};

std::vector<std::uint8_t> render_track(std::vector<TrackEvent> events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const TrackEvent& a, const TrackEvent& b) {
                     return std::tie(a.tick, a.order) < std::tie(b.tick, b.order);
                   });
  std::vector<std::uint8_t> body;
  std::int64_t cursor = 0;
  for (const auto& e : events) {
    put_varint(body, static_cast<std::uint32_t>(e.tick - cursor));
    cursor = e.tick;
    body.insert(body.end(), e.bytes.begin(), e.bytes.end());
  }
  // end of track
  std::int64_t end_tick = cursor;
  put_varint(body, 0);
  body.insert(body.end(), {0xff, 0x2f, 0x00});
  (void)end_tick;

  std::vector<std::uint8_t> out;
  out.insert(out.end(), {'M', 'T', 'r', 'k'});
  put_u32be(out, static_cast<std::uint32_t>(body.size()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

}  // namespace

std::pair<Score, MidiDiagnostics> parse_midi(
    std::span<const std::uint8_t> bytes) {
  ByteCursor cur(bytes, 0);
  Score score;
  MidiDiagnostics diag;

  // header chunk
  std::uint8_t magic[4];
  for (auto& m : magic) m = cur.u8();
  if (!(magic[0] == 'M' && magic[1] == 'T' && magic[2] == 'h' &&
        magic[3] == 'd'))
    throw MidiError("missing MThd header", 0);
  const std::uint32_t hlen = cur.u32be();
  if (hlen < 6) throw MidiError("header chunk shorter than 6 bytes", cur.offset());
  const int format = cur.u16be();
  const int ntrks = cur.u16be();
  const std::uint16_t division = cur.u16be();
  cur.skip(hlen - 6);
  if (format != 0 && format != 1)
    throw MidiError("unsupported SMF format " + std::to_string(format),
                    cur.offset());
  if (division & 0x8000)
    throw MidiError("SMPTE time division is not supported", cur.offset());
  if (division == 0) throw MidiError("ppq of zero", cur.offset());
  if (format == 0 && ntrks > 1)
    diag.warnings.push_back({cur.offset(), "format 0 file declares more than one track"});
  score.ppq = division;
  diag.format = format;

  int parsed_tracks = 0;
  while (parsed_tracks < ntrks && !cur.done()) {
    std::uint8_t cmagic[4];
    for (auto& m : cmagic) m = cur.u8();
    const std::uint32_t clen = cur.u32be();
    if (cmagic[0] == 'M' && cmagic[1] == 'T' && cmagic[2] == 'r' &&
        cmagic[3] == 'k') {
      const std::size_t base = cur.offset();
      auto body = cur.take(clen);
      parse_track(ByteCursor(body, base), parsed_tracks, format, &score, &diag);
      ++parsed_tracks;
    } else {
      diag.warnings.push_back({cur.offset() - 8, "skipping unknown chunk"});
      cur.skip(clen);
    }
  }
  if (parsed_tracks < ntrks)
    throw MidiError("header declares " + std::to_string(ntrks) +
                        " tracks but only " + std::to_string(parsed_tracks) +
                        " present",
                    cur.offset());
  diag.track_count = parsed_tracks;

  std::sort(score.time_signatures.begin(), score.time_signatures.end(),
            [](const TimeSignature& a, const TimeSignature& b) {
              return a.tick < b.tick;
            });
  if (score.time_signatures.empty() || score.time_signatures.front().tick != 0) {
    diag.warnings.push_back({0, "no time signature at tick 0; assuming 4/4"});
    score.time_signatures.insert(score.time_signatures.begin(), {0, 4, 4});
  }
  std::sort(score.tempo_events.begin(), score.tempo_events.end(),
            [](const TempoEvent& a, const TempoEvent& b) {
              return a.tick < b.tick;
            });
  sort_notes(score.notes);
  return {std::move(score), std::move(diag)};
}

std::vector<std::uint8_t> write_midi(const Score& score) {
  if (score.ppq <= 0 || score.ppq > 0x7fff)
    throw ValidationError("ppq out of range for SMF: " + std::to_string(score.ppq));

  std::set<int> voices;
  for (const auto& n : score.notes) voices.insert(n.voice);

  // conductor track: time signatures + tempi
  std::vector<TrackEvent> conductor;
  for (const auto& ts : score.time_signatures) {
    int dd = 0;
    while ((1 << dd) < ts.denominator) ++dd;
    if ((1 << dd) != ts.denominator)
      throw ValidationError("time signature denominator must be a power of two");
    conductor.push_back({ts.tick, 0,
                         {0xff, 0x58, 0x04, static_cast<std::uint8_t>(ts.numerator),
                          static_cast<std::uint8_t>(dd), 24, 8}});
  }
  for (const auto& te : score.tempo_events) {
    conductor.push_back(
        {te.tick, 0,
         {0xff, 0x51, 0x03,
          static_cast<std::uint8_t>((te.usec_per_quarter >> 16) & 0xff),
          static_cast<std::uint8_t>((te.usec_per_quarter >> 8) & 0xff),
          static_cast<std::uint8_t>(te.usec_per_quarter & 0xff)}});
  }

  std::vector<std::uint8_t> out;
  out.insert(out.end(), {'M', 'T', 'h', 'd'});
  put_u32be(out, 6);
  put_u16be(out, 1);  // format
  put_u16be(out, static_cast<std::uint16_t>(1 + voices.size()));
  put_u16be(out, static_cast<std::uint16_t>(score.ppq));

  auto track0 = render_track(std::move(conductor));
  out.insert(out.end(), track0.begin(), track0.end());

  for (int voice : voices) {
    std::vector<TrackEvent> events;
    const std::uint8_t channel = static_cast<std::uint8_t>(voice & 0x0f);
    for (const auto& n : score.notes) {
      if (n.voice != voice) continue;
      const auto pitch = static_cast<std::uint8_t>(n.pitch & 0x7f);
      const auto vel = static_cast<std::uint8_t>(std::clamp(n.velocity, 1, 127));
      events.push_back({n.onset, 2,
                        {static_cast<std::uint8_t>(0x90 | channel), pitch, vel}});
      events.push_back({n.onset + n.duration, 1,
                        {static_cast<std::uint8_t>(0x80 | channel), pitch, 0}});
    }
    auto track = render_track(std::move(events));
    out.insert(out.end(), track.begin(), track.end());
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path);
  return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace scorewave
