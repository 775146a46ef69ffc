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

#ifndef SCOREWAVE_DATASET_HPP_
#define SCOREWAVE_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scorewave/core.hpp"
#include "scorewave/signal.hpp"

namespace scorewave {

enum class Representation {
  kPianoRoll,
  kMidiLike,
  kMidiLikeMono,
  kNoteTuple,
  kSignalLike,
};

std::string representation_name(Representation rep);
Representation representation_from_name(const std::string& name);

struct PipelineConfig {
  Representation representation = Representation::kSignalLike;
  int steps_per_bar = 16;
  int max_events = 64;
  int max_tuples = 16;
  int velocity_bins = 1;
  bool augment = false;
  double split_ratio = 0.8;  // chorale-level train share, in (0,1)
  std::uint64_t seed = 0;
  SpectralConfig spectral;
};

std::string pipeline_config_to_json(const PipelineConfig& cfg);
PipelineConfig pipeline_config_from_json(const std::string& json_text);

/// Manifest accounting: bars_in == bars_kept + sum of drops by reason.
struct BuildReport {
  PipelineConfig config;
  int files_total = 0;
  int files_ok = 0;
  std::int64_t bars_in = 0;
  std::int64_t bars_kept = 0;
  std::map<std::string, std::int64_t> drops;
  double retention = 0.0;
  std::int64_t train_bars = 0;
  std::int64_t test_bars = 0;
  std::filesystem::path manifest_path;
};

/// Ingest every *.mid under corpus_dir (sorted by name), slice into bars,
/// apply transposition augmentation when enabled, encode into the selected
/// representation and write per-split tensors, source-bar records and a
/// manifest under out_dir. Unreadable files are logged and skipped; a
/// dataset with zero kept bars is a hard error.
BuildReport build_dataset(const std::filesystem::path& corpus_dir,
                          const PipelineConfig& cfg,
                          const std::filesystem::path& out_dir);

struct MismatchRecord {
  std::string split;
  std::int64_t row = 0;
  std::string source;
  std::string category;  // "hold_merge" or "other"
};

struct RoundtripReport {
  std::string representation;
  std::int64_t total = 0;
  std::int64_t exact = 0;
  std::vector<MismatchRecord> mismatches;

  double exact_rate() const {
    return total == 0 ? 1.0 : static_cast<double>(exact) / static_cast<double>(total);
  }
};

/// Decode every encoded bar of a built dataset and compare it to its
/// source bar; mismatches caused only by re-articulated repeated notes
/// merging on the grid are categorized as hold_merge.
RoundtripReport roundtrip_check(const std::filesystem::path& dataset_dir);

// Encoded-row plumbing shared by the pipeline, the roundtrip checker and
// the converter CLI.
struct EncodedBar {
  std::vector<float> f32;
  std::vector<std::int32_t> i32;
};
EncodedBar encode_bar(const Bar& bar, const PipelineConfig& cfg,
                      const PrimeMap& map);
Bar decode_row(const EncodedBar& row, const PipelineConfig& cfg,
               const PrimeMap& map);
std::vector<std::uint32_t> row_dims(const PipelineConfig& cfg);

}  // namespace scorewave

#endif  // SCOREWAVE_DATASET_HPP_
