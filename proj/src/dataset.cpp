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

#include "scorewave/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scorewave/errors.hpp"
#include "scorewave/events.hpp"
#include "scorewave/midi.hpp"
#include "scorewave/notetuple.hpp"
#include "scorewave/rng.hpp"
#include "scorewave/tensor.hpp"

namespace scorewave {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

EventCodecConfig event_config(const PipelineConfig& cfg, int quantum) {
  EventCodecConfig ec;
  ec.max_events = cfg.max_events;
  ec.steps = cfg.steps_per_bar;
  ec.quantum = quantum;
  ec.velocity_bins = cfg.velocity_bins;
  return ec;
}

TupleCodecConfig tuple_config(const PipelineConfig& cfg, int quantum) {
  return {cfg.max_tuples, cfg.steps_per_bar, quantum};
}

json bar_to_json(const Bar& bar, const std::string& source, int bar_index,
                 int transpose) {
  json notes = json::array();
  for (const auto& n : bar.notes)
    notes.push_back({n.onset, n.pitch, n.duration, n.velocity, n.voice});
  return json{{"source", source},     {"bar_index", bar_index},
              {"transpose", transpose}, {"quantum", bar.quantum},
              {"steps", bar.steps},   {"notes", notes}};
}

Bar bar_from_json(const json& j) {
  Bar bar;
  bar.quantum = j.at("quantum").get<int>();
  bar.steps = j.at("steps").get<int>();
  for (const auto& e : j.at("notes")) {
    Note n;
    n.onset = e.at(0).get<std::int64_t>();
    n.pitch = e.at(1).get<int>();
    n.duration = e.at(2).get<std::int64_t>();
    n.velocity = e.at(3).get<int>();
    n.voice = e.at(4).get<int>();
    bar.notes.push_back(n);
  }
  return bar;
}

struct SourcedBar {
  Bar bar;
  std::string source;
  int bar_index;
  int transpose;
};

/// Note equality in the information domain a representation carries:
/// pianoroll and the mono/flat-velocity event streams do not encode
/// velocity, so it is excluded there.
bool bars_match(const Bar& a, const Bar& b, bool compare_velocity) {
  if (a.notes.size() != b.notes.size()) return false;
  using Key = std::tuple<std::int64_t, int, std::int64_t, int>;
  auto keys = [&](const Bar& bar) {
    std::vector<Key> out;
    for (const auto& n : bar.notes)
      out.emplace_back(n.onset, n.pitch, n.duration,
                       compare_velocity ? n.velocity : 0);
    std::sort(out.begin(), out.end());
    return out;
  };
  return keys(a) == keys(b);
}

}  // namespace

std::string representation_name(Representation rep) {
  switch (rep) {
    case Representation::kPianoRoll: return "pianoroll";
    case Representation::kMidiLike: return "midilike";
    case Representation::kMidiLikeMono: return "midilike_mono";
    case Representation::kNoteTuple: return "notetuple";
    case Representation::kSignalLike: return "signallike";
  }
  return "unknown";
}

Representation representation_from_name(const std::string& name) {
  for (Representation rep :
       {Representation::kPianoRoll, Representation::kMidiLike,
        Representation::kMidiLikeMono, Representation::kNoteTuple,
        Representation::kSignalLike})
    if (representation_name(rep) == name) return rep;
  throw ValidationError("unknown representation: " + name);
}

std::string pipeline_config_to_json(const PipelineConfig& cfg) {
  json j{{"representation", representation_name(cfg.representation)},
         {"steps_per_bar", cfg.steps_per_bar},
         {"max_events", cfg.max_events},
         {"max_tuples", cfg.max_tuples},
         {"velocity_bins", cfg.velocity_bins},
         {"augment", cfg.augment},
         {"split_ratio", cfg.split_ratio},
         {"seed", cfg.seed},
         {"spectral", json::parse(spectral_config_to_json(cfg.spectral))}};
  return j.dump(2);
}

PipelineConfig pipeline_config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad pipeline config JSON: ") + e.what());
  }
  PipelineConfig cfg;
  if (j.contains("representation"))
    cfg.representation = representation_from_name(j["representation"]);
  cfg.steps_per_bar = j.value("steps_per_bar", cfg.steps_per_bar);
  cfg.max_events = j.value("max_events", cfg.max_events);
  cfg.max_tuples = j.value("max_tuples", cfg.max_tuples);
  cfg.velocity_bins = j.value("velocity_bins", cfg.velocity_bins);
  cfg.augment = j.value("augment", cfg.augment);
  cfg.split_ratio = j.value("split_ratio", cfg.split_ratio);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("spectral"))
    cfg.spectral = spectral_config_from_json(j["spectral"].dump());
  if (cfg.steps_per_bar < 1) throw ValidationError("steps_per_bar must be >= 1");
  if (!(cfg.split_ratio > 0.0 && cfg.split_ratio < 1.0))
    throw ValidationError("split_ratio must be in (0, 1)");
  return cfg;
}

std::vector<std::uint32_t> row_dims(const PipelineConfig& cfg) {
  switch (cfg.representation) {
    case Representation::kPianoRoll:
      return {kNumPitches, static_cast<std::uint32_t>(cfg.steps_per_bar)};
    case Representation::kMidiLike:
      return {static_cast<std::uint32_t>(cfg.max_events)};
    case Representation::kMidiLikeMono:
      return {static_cast<std::uint32_t>(cfg.steps_per_bar)};
    case Representation::kNoteTuple:
      return {static_cast<std::uint32_t>(cfg.max_tuples), 4};
    case Representation::kSignalLike: {
      const std::uint32_t len =
          static_cast<std::uint32_t>(cfg.steps_per_bar - 1) * cfg.spectral.hop +
          cfg.spectral.win_length;
      return {len};
    }
  }
  throw ValidationError("unknown representation");
}

EncodedBar encode_bar(const Bar& bar, const PipelineConfig& cfg,
                      const PrimeMap& map) {
  EncodedBar row;
  switch (cfg.representation) {
    case Representation::kPianoRoll: {
      PianoRoll roll = bar_to_pianoroll(bar);
      row.f32.reserve(static_cast<std::size_t>(kNumPitches) * roll.steps());
      for (int p = 0; p < kNumPitches; ++p)
        for (int t = 0; t < roll.steps(); ++t)
          row.f32.push_back(roll.get(p, t) ? 1.0f : 0.0f);
      break;
    }
    case Representation::kMidiLike: {
      EventSequence seq = encode_midilike(bar, event_config(cfg, bar.quantum));
      for (const auto& e : seq.events)
        row.i32.push_back(event_to_token(e));
      break;
    }
    case Representation::kMidiLikeMono: {
      EventSequence seq = encode_mono(bar, event_config(cfg, bar.quantum));
      for (const auto& e : seq.events)
        row.i32.push_back(mono_event_to_token(e));
      break;
    }
    case Representation::kNoteTuple: {
      TupleSequence seq = encode_notetuple(bar, tuple_config(cfg, bar.quantum));
      for (const auto& t : seq.tuples) {
        row.i32.push_back(t.is_empty ? 0 : t.time_offset);
        row.i32.push_back(t.is_empty ? 0 : t.pitch);
        row.i32.push_back(t.is_empty ? 0 : t.velocity);
        row.i32.push_back(t.is_empty ? 0 : t.duration);
      }
      break;
    }
    case Representation::kSignalLike: {
      SignalRep sig = encode_signal(bar_to_pianoroll(bar), map, cfg.spectral);
      row.f32.assign(sig.samples.begin(), sig.samples.end());
      break;
    }
  }
  return row;
}

Bar decode_row(const EncodedBar& row, const PipelineConfig& cfg,
               const PrimeMap& map) {
  const int steps = cfg.steps_per_bar;
  switch (cfg.representation) {
    case Representation::kPianoRoll: {
      PianoRoll roll(steps);
      for (int p = 0; p < kNumPitches; ++p)
        for (int t = 0; t < steps; ++t)
          roll.set(p, t, row.f32[static_cast<std::size_t>(p) * steps + t] >= 0.5f);
      return pianoroll_to_bar(roll);
    }
    case Representation::kMidiLike: {
      EventCodecConfig ec = event_config(cfg, 120);
      EventSequence seq;
      for (std::int32_t token : row.i32)
        seq.events.push_back(token_to_event(token, ec));
      return decode_midilike(seq, ec).bar;
    }
    case Representation::kMidiLikeMono: {
      EventCodecConfig ec = event_config(cfg, 120);
      EventSequence seq;
      for (std::int32_t token : row.i32)
        seq.events.push_back(mono_token_to_event(token));
      return decode_mono(seq, ec);
    }
    case Representation::kNoteTuple: {
      TupleSequence seq;
      for (std::size_t i = 0; i + 3 < row.i32.size(); i += 4) {
        NoteTuple t;
        t.time_offset = row.i32[i];
        t.pitch = row.i32[i + 1];
        t.velocity = row.i32[i + 2];
        t.duration = row.i32[i + 3];
        t.is_empty = t.time_offset == 0 && t.pitch == 0 && t.velocity == 0 &&
                     t.duration == 0;
        seq.tuples.push_back(t);
      }
      return decode_notetuple(seq, tuple_config(cfg, 120)).bar;
    }
    case Representation::kSignalLike: {
      SignalRep sig;
      sig.config = cfg.spectral;
      sig.samples.assign(row.f32.begin(), row.f32.end());
      PianoRoll roll = decode_signal(sig, map, cfg.spectral);
      return pianoroll_to_bar(roll);
    }
  }
  throw ValidationError("unknown representation");
}

BuildReport build_dataset(const fs::path& corpus_dir, const PipelineConfig& cfg,
                          const fs::path& out_dir) {
  if (!fs::is_directory(corpus_dir))
    throw IoError("corpus directory " + corpus_dir.string() + " does not exist");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".mid" || ext == ".midi") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  BuildReport report;
  report.config = cfg;
  report.files_total = static_cast<int>(files.size());

  json file_log = json::array();
  struct ParsedFile {
    fs::path path;
    std::vector<Bar> bars;
    int min_pitch = 127;
    int max_pitch = 0;
  };
  std::vector<ParsedFile> parsed;
  for (const auto& path : files) {
    json entry{{"path", path.filename().string()}};
    try {
      auto bytes = read_file(path.string());
      auto [score, diag] = parse_midi(bytes);
      ParsedFile pf;
      pf.path = path;
      pf.bars = slice_into_bars(score, cfg.steps_per_bar);
      for (const auto& n : score.notes) {
        pf.min_pitch = std::min(pf.min_pitch, n.pitch);
        pf.max_pitch = std::max(pf.max_pitch, n.pitch);
      }
      entry["status"] = "ok";
      entry["bars"] = pf.bars.size();
      entry["warnings"] = diag.warnings.size();
      parsed.push_back(std::move(pf));
    } catch (const ValidationError& e) {
      entry["status"] = "skipped";
      entry["error"] = e.what();
    }
    file_log.push_back(entry);
  }
  report.files_ok = static_cast<int>(parsed.size());

  // corpus-wide observed pitch range bounds the augmentation shifts
  int corpus_min = 127, corpus_max = 0;
  bool any_notes = false;
  for (const auto& pf : parsed)
    if (pf.min_pitch <= pf.max_pitch) {
      corpus_min = std::min(corpus_min, pf.min_pitch);
      corpus_max = std::max(corpus_max, pf.max_pitch);
      any_notes = true;
    }

  // chorale-level split
  std::vector<std::size_t> order(parsed.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng split_rng(Rng::mix(cfg.seed, 0x73706c69ULL, 0));  // split stream
  split_rng.shuffle(order);
  const int train_files = std::clamp(
      static_cast<int>(std::lround(cfg.split_ratio * static_cast<double>(parsed.size()))),
      parsed.size() >= 2 ? 1 : 0, std::max<int>(0, static_cast<int>(parsed.size()) - (parsed.size() >= 2 ? 1 : 0)));
  std::vector<bool> is_train(parsed.size(), false);
  for (int i = 0; i < train_files; ++i) is_train[order[i]] = true;
  if (parsed.size() == 1) is_train[0] = true;

  const PrimeMap map = build_prime_map();
  fs::create_directories(out_dir);

  struct SplitData {
    std::vector<float> f32;
    std::vector<std::int32_t> i32;
    std::int64_t rows = 0;
    std::ostringstream bars_jsonl;
  };
  SplitData splits[2];  // 0 = train, 1 = test

  for (std::size_t fi = 0; fi < parsed.size(); ++fi) {
    const auto& pf = parsed[fi];
    SplitData& split = splits[is_train[fi] ? 0 : 1];

    std::vector<int> shifts{0};
    if (cfg.augment && any_notes && pf.min_pitch <= pf.max_pitch) {
      shifts.clear();
      for (int k = corpus_min - pf.min_pitch; k <= corpus_max - pf.max_pitch; ++k)
        shifts.push_back(k);
      if (shifts.empty()) shifts.push_back(0);
    }

    for (int k : shifts) {
      for (const auto& bar : pf.bars) {
        ++report.bars_in;
        Bar shifted;
        try {
          shifted = k == 0 ? bar : transpose_bar(bar, k);
        } catch (const ValidationError&) {
          ++report.drops["transpose_out_of_range"];
          continue;
        }
        EncodedBar row;
        try {
          row = encode_bar(shifted, cfg, map);
        } catch (const OverBudgetError&) {
          ++report.drops[cfg.representation == Representation::kNoteTuple
                             ? "over_budget_tuples"
                             : "over_budget_events"];
          continue;
        } catch (const NotMonophonicError&) {
          ++report.drops["not_monophonic"];
          continue;
        }
        split.f32.insert(split.f32.end(), row.f32.begin(), row.f32.end());
        split.i32.insert(split.i32.end(), row.i32.begin(), row.i32.end());
        ++split.rows;
        ++report.bars_kept;
        split.bars_jsonl << bar_to_json(shifted, pf.path.filename().string(),
                                        bar.index, k)
                             .dump()
                         << "\n";
      }
    }
  }

  if (report.bars_kept == 0)
    throw ValidationError("empty dataset: no bar survived filtering");
  report.retention = static_cast<double>(report.bars_kept) /
                     static_cast<double>(report.bars_in);
  report.train_bars = splits[0].rows;
  report.test_bars = splits[1].rows;

  const std::string rep_name = representation_name(cfg.representation);
  const auto dims_tail = row_dims(cfg);
  for (int s = 0; s < 2; ++s) {
    const std::string split_name = s == 0 ? "train" : "test";
    Tensor tensor;
    tensor.dims.push_back(static_cast<std::uint32_t>(splits[s].rows));
    tensor.dims.insert(tensor.dims.end(), dims_tail.begin(), dims_tail.end());
    if (cfg.representation == Representation::kPianoRoll ||
        cfg.representation == Representation::kSignalLike) {
      tensor.dtype = TensorDType::kF32;
      tensor.f32 = std::move(splits[s].f32);
    } else {
      tensor.dtype = TensorDType::kI32;
      tensor.i32 = std::move(splits[s].i32);
    }
    write_tensor_file((out_dir / (rep_name + "_" + split_name + ".ptns")).string(),
                      tensor);
    std::ofstream bars(out_dir / ("bars_" + split_name + ".jsonl"),
                       std::ios::trunc);
    if (!bars) throw IoError("cannot write bar records");
    bars << splits[s].bars_jsonl.str();
  }

  json drops = json::object();
  for (const auto& [reason, count] : report.drops) drops[reason] = count;
  json manifest{{"config", json::parse(pipeline_config_to_json(cfg))},
                {"corpus_dir", corpus_dir.string()},
                {"files", file_log},
                {"bars_in", report.bars_in},
                {"bars_kept", report.bars_kept},
                {"drops", drops},
                {"retention", report.retention},
                {"train_bars", report.train_bars},
                {"test_bars", report.test_bars}};
  report.manifest_path = out_dir / "manifest.json";
  std::ofstream mf(report.manifest_path, std::ios::trunc);
  if (!mf) throw IoError("cannot write manifest.json");
  mf << manifest.dump(2) << "\n";
  return report;
}

RoundtripReport roundtrip_check(const fs::path& dataset_dir) {
  std::ifstream mf(dataset_dir / "manifest.json");
  if (!mf) throw IoError("no manifest.json under " + dataset_dir.string());
  json manifest;
  try {
    manifest = json::parse(mf);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad manifest: ") + e.what());
  }
  const PipelineConfig cfg =
      pipeline_config_from_json(manifest.at("config").dump());
  const PrimeMap map = build_prime_map();

  RoundtripReport report;
  report.representation = representation_name(cfg.representation);

  const bool velocity_carried =
      cfg.representation == Representation::kNoteTuple ||
      (cfg.representation == Representation::kMidiLike && cfg.velocity_bins > 1);

  for (const std::string split : {"train", "test"}) {
    const fs::path tensor_path =
        dataset_dir / (report.representation + "_" + split + ".ptns");
    const fs::path bars_path = dataset_dir / ("bars_" + split + ".jsonl");
    Tensor tensor = read_tensor_file(tensor_path.string());
    std::ifstream bars_in(bars_path);
    if (!bars_in) throw IoError("missing " + bars_path.string());

    const std::size_t row_elems =
        tensor.dims.empty() ? 0 : tensor.element_count() / std::max<std::size_t>(1, tensor.dims[0]);
    std::string line;
    std::int64_t row = 0;
    while (std::getline(bars_in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      const Bar source = bar_from_json(j);
      EncodedBar enc;
      if (tensor.dtype == TensorDType::kF32)
        enc.f32.assign(tensor.f32.begin() + row * row_elems,
                       tensor.f32.begin() + (row + 1) * row_elems);
      else
        enc.i32.assign(tensor.i32.begin() + row * row_elems,
                       tensor.i32.begin() + (row + 1) * row_elems);

      ++report.total;
      if (cfg.representation == Representation::kSignalLike) {
        // compare at activation level: the roll is the codec's domain
        SignalRep sig;
        sig.config = cfg.spectral;
        sig.samples.assign(enc.f32.begin(), enc.f32.end());
        const PianoRoll decoded = decode_signal(sig, map, cfg.spectral);
        if (decoded == bar_to_pianoroll(source)) {
          ++report.exact;
        } else {
          report.mismatches.push_back(
              {split, row, j.value("source", ""), "other"});
        }
      } else {
        const Bar decoded = decode_row(enc, cfg, map);
        const Bar want = quantize_bar(source);
        if (bars_match(decoded, want, velocity_carried)) {
          ++report.exact;
        } else if (bar_to_pianoroll(decoded) == bar_to_pianoroll(want)) {
          report.mismatches.push_back(
              {split, row, j.value("source", ""), "hold_merge"});
        } else {
          report.mismatches.push_back(
              {split, row, j.value("source", ""), "other"});
        }
      }
      ++row;
    }
    if (row != static_cast<std::int64_t>(tensor.dims.empty() ? 0 : tensor.dims[0]))
      throw ValidationError("bar records and tensor rows disagree in " + split);
  }
  return report;
}

}  // namespace scorewave
