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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scorewave/chorale.hpp"
#include "scorewave/dataset.hpp"
#include "scorewave/errors.hpp"
#include "scorewave/events.hpp"
#include "scorewave/metrics.hpp"
#include "scorewave/midi.hpp"
#include "scorewave/notetuple.hpp"
#include "scorewave/tensor.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 64;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw scorewave::IoError("cannot open " + path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::string zero_pad(std::int64_t value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

scorewave::PipelineConfig load_pipeline_config(const std::string& config_path) {
  if (config_path.empty()) return {};
  return scorewave::pipeline_config_from_json(read_text(config_path));
}

int cmd_convert(const std::string& input, const std::string& rep_name,
                const fs::path& out_dir, const std::string& config_path,
                std::uint64_t seed) {
  scorewave::PipelineConfig cfg = load_pipeline_config(config_path);
  cfg.representation = scorewave::representation_from_name(rep_name);
  cfg.seed = seed;

  auto [score, diag] = scorewave::parse_midi(scorewave::read_file(input));
  for (const auto& w : diag.warnings)
    std::cerr << "warning: " << input << ": " << w.message << "\n";
  auto bars = scorewave::slice_into_bars(score, cfg.steps_per_bar);
  const auto map = scorewave::build_prime_map();

  fs::create_directories(out_dir);
  const std::string stem = fs::path(input).stem().string();
  int written = 0, dropped = 0;
  for (const auto& bar : bars) {
    scorewave::EncodedBar row;
    try {
      row = scorewave::encode_bar(bar, cfg, map);
    } catch (const scorewave::ValidationError& e) {
      std::cerr << "dropping bar " << bar.index << ": " << e.what() << "\n";
      ++dropped;
      continue;
    }
    scorewave::Tensor tensor;
    tensor.dims = scorewave::row_dims(cfg);
    if (!row.f32.empty()) {
      tensor.dtype = scorewave::TensorDType::kF32;
      tensor.f32 = row.f32;
    } else {
      tensor.dtype = scorewave::TensorDType::kI32;
      tensor.i32 = row.i32;
    }
    const std::string base = stem + "_bar" + zero_pad(bar.index, 4);
    scorewave::write_tensor_file((out_dir / (base + ".ptns")).string(), tensor);
    if (cfg.representation == scorewave::Representation::kSignalLike) {
      scorewave::SignalRep sig;
      sig.config = cfg.spectral;
      sig.samples.assign(row.f32.begin(), row.f32.end());
      auto wav = scorewave::export_wav(sig);
      scorewave::write_file((out_dir / (base + ".wav")).string(), wav);
    }
    ++written;
  }
  std::cout << "wrote " << written << " bar(s) to " << out_dir.string()
            << ", dropped " << dropped << "\n";
  return kExitOk;
}

int cmd_build_dataset(const std::string& corpus, const std::string& rep_name,
                      const fs::path& out_dir, const std::string& config_path,
                      bool augment, std::optional<double> split,
                      std::optional<std::uint64_t> seed) {
  scorewave::PipelineConfig cfg = load_pipeline_config(config_path);
  if (!rep_name.empty())
    cfg.representation = scorewave::representation_from_name(rep_name);
  if (augment) cfg.augment = true;
  if (split) cfg.split_ratio = *split;
  if (seed) cfg.seed = *seed;

  auto report = scorewave::build_dataset(corpus, cfg, out_dir);
  std::cout << "files: " << report.files_ok << "/" << report.files_total
            << " parsed\n"
            << "bars:  " << report.bars_kept << "/" << report.bars_in
            << " kept (retention " << report.retention << ")\n"
            << "split: " << report.train_bars << " train, " << report.test_bars
            << " test\n"
            << "manifest: " << report.manifest_path.string() << "\n";
  for (const auto& [reason, count] : report.drops)
    std::cout << "dropped " << count << " bar(s): " << reason << "\n";
  return kExitOk;
}

int cmd_roundtrip(const std::string& dataset_dir) {
  auto report = scorewave::roundtrip_check(dataset_dir);
  std::cout << report.representation << ": " << report.exact << "/"
            << report.total << " exact (" << report.exact_rate() * 100.0
            << "%)\n";
  for (const auto& m : report.mismatches)
    std::cout << "  mismatch " << m.split << "[" << m.row << "] from "
              << m.source << ": " << m.category << "\n";
  return kExitOk;
}

int cmd_gen_chorales(int skeletons, int per, const std::string& nht_range,
                     std::uint64_t seed, const fs::path& out_dir) {
  scorewave::CorpusParams params;
  params.n_skeletons = skeletons;
  params.per_skeleton = per;
  params.seed = seed;
  const auto sep = nht_range.find("..");
  if (sep == std::string::npos) {
    params.nht_min = params.nht_max = std::stoi(nht_range);
  } else {
    params.nht_min = std::stoi(nht_range.substr(0, sep));
    params.nht_max = std::stoi(nht_range.substr(sep + 2));
  }
  auto summary = scorewave::build_eval_corpus(params, out_dir);
  std::cout << "wrote " << summary.skeletons << " skeleton(s) and "
            << summary.realisations << " realisation(s) under "
            << out_dir.string() << "\n";
  return kExitOk;
}

std::vector<scorewave::EmbeddingRecord> load_embeddings(
    const std::string& tensor_path, const std::string& meta_path) {
  scorewave::Tensor tensor = scorewave::read_tensor_file(tensor_path);
  if (tensor.dims.size() != 2 ||
      tensor.dtype != scorewave::TensorDType::kF32)
    throw scorewave::ValidationError(
        "embeddings must be a rank-2 f32 tensor [items, dim]");
  const std::size_t rows = tensor.dims[0];
  const std::size_t dim = tensor.dims[1];

  std::ifstream meta(meta_path);
  if (!meta) throw scorewave::IoError("cannot open " + meta_path);
  std::vector<scorewave::EmbeddingRecord> records;
  std::string line;
  while (std::getline(meta, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw scorewave::ValidationError(std::string("bad meta.jsonl line: ") +
                                       e.what());
    }
    scorewave::EmbeddingRecord r;
    r.item_id = j.at("item_id").get<std::string>();
    r.skeleton_id = j.value("skeleton_id", "");
    r.is_skeleton = j.value("kind", "") == "skeleton";
    r.nht_count = j.value("nht_count", 0);
    if (j.contains("tonality"))
      r.tonality = j["tonality"].value("mode", "") + "_" +
                   std::to_string(j["tonality"].value("tonic_pc", -1));
    for (const auto& nht : j.value("nhts", json::array()))
      r.nht_kinds.push_back(nht.value("kind", ""));
    records.push_back(std::move(r));
  }
  if (records.size() != rows)
    throw scorewave::ValidationError(
        "meta.jsonl has " + std::to_string(records.size()) +
        " items but the tensor has " + std::to_string(rows) + " rows");
  for (std::size_t i = 0; i < rows; ++i)
    records[i].vec.assign(tensor.f32.begin() + static_cast<std::ptrdiff_t>(i * dim),
                          tensor.f32.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
  return records;
}

int cmd_eval(const std::string& embeddings_path, const std::string& meta_path,
             const fs::path& out_dir) {
  auto records = load_embeddings(embeddings_path, meta_path);
  const auto profile = scorewave::distance_profile(records);

  json out;
  std::string csv = "nht_count,count,mean_l2,stddev,normalized\n";
  json buckets = json::array();
  for (const auto& b : profile.buckets) {
    csv += std::to_string(b.nht_count) + "," + std::to_string(b.count) + "," +
           std::to_string(b.mean) + "," + std::to_string(b.stddev) + "," +
           std::to_string(b.normalized) + "\n";
    buckets.push_back({{"nht_count", b.nht_count},
                       {"count", b.count},
                       {"mean_l2", b.mean},
                       {"stddev", b.stddev},
                       {"normalized", b.normalized}});
  }
  out["distance_profile"] = buckets;

  if (profile.buckets.size() >= 3) {
    const auto lin = scorewave::linearity_score(profile);
    out["linearity"] = {{"pearson_r", lin.pearson_r},
                        {"spearman_rho", lin.spearman_rho},
                        {"degenerate", lin.degenerate}};
    std::cout << "linearity: pearson r = " << lin.pearson_r
              << ", spearman rho = " << lin.spearman_rho << "\n";
  }
  try {
    const auto sil = scorewave::tonality_silhouette(records);
    out["tonality_silhouette"] = sil.score;
    for (const auto& label : sil.excluded_labels)
      std::cerr << "warning: tonality " << label
                << " has fewer than two members, excluded\n";
    std::cout << "tonality silhouette: " << sil.score << "\n";
  } catch (const scorewave::ValidationError& e) {
    std::cerr << "silhouette skipped: " << e.what() << "\n";
  }
  json kinds = json::array();
  for (const auto& kd : scorewave::kindwise_profile(records))
    kinds.push_back(
        {{"kind", kd.kind}, {"count", kd.count}, {"mean_l2", kd.mean}});
  out["kindwise_profile"] = kinds;

  fs::create_directories(out_dir);
  std::ofstream csv_out(out_dir / "distance_profile.csv", std::ios::trunc);
  csv_out << csv;
  std::ofstream json_out(out_dir / "metrics.json", std::ios::trunc);
  json_out << out.dump(2) << "\n";
  if (!csv_out || !json_out)
    throw scorewave::IoError("cannot write metric reports");
  std::cout << "reports written to " << out_dir.string() << "\n";
  return kExitOk;
}

int cmd_export_wav(const std::string& input, const fs::path& out_dir,
                   int rate) {
  auto [score, diag] = scorewave::parse_midi(scorewave::read_file(input));
  auto bars = scorewave::slice_into_bars(score, 16);
  const auto map = scorewave::build_prime_map();
  fs::create_directories(out_dir);
  const std::string stem = fs::path(input).stem().string();
  for (const auto& bar : bars) {
    auto sig = scorewave::encode_signal(scorewave::bar_to_pianoroll(bar), map);
    auto wav = scorewave::export_wav(sig, rate);
    scorewave::write_file(
        (out_dir / (stem + "_bar" + zero_pad(bar.index, 4) + ".wav")).string(),
        wav);
  }
  std::cout << "wrote " << bars.size() << " wav file(s) to " << out_dir.string()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scorewave: symbolic music representation codecs and datasets"};
  app.require_subcommand(1);

  std::string input, rep, config_path, dataset_dir, embeddings, meta, nht = "0..0";
  std::string out = "out";
  bool augment = false;
  std::optional<double> split;
  std::optional<std::uint64_t> seed_opt;
  std::uint64_t seed = 0;
  int skeletons = 1, per = 1, rate = scorewave::kDefaultWavRate;

  auto* convert = app.add_subcommand("convert", "encode one MIDI file bar by bar");
  convert->add_option("input", input, "input .mid file")->required();
  convert->add_option("--rep", rep, "representation")->required();
  convert->add_option("--out", out, "output directory");
  convert->add_option("--config", config_path, "pipeline config JSON file");
  convert->add_option("--seed", seed, "random seed");

  auto* build = app.add_subcommand("build-dataset", "build tensors from a MIDI corpus");
  build->add_option("corpus", input, "corpus directory")->required();
  build->add_option("--rep", rep, "representation");
  build->add_option("--out", out, "output directory");
  build->add_option("--config", config_path, "pipeline config JSON file");
  build->add_flag("--augment", augment, "transposition augmentation");
  build->add_option("--split", split, "train share in (0,1)");
  build->add_option("--seed", seed_opt, "random seed");

  auto* roundtrip = app.add_subcommand("roundtrip", "decode a dataset and compare to sources");
  roundtrip->add_option("dataset", dataset_dir, "dataset directory")->required();

  auto* gen = app.add_subcommand("gen-chorales", "generate the synthetic evaluation corpus");
  gen->add_option("--skeletons", skeletons, "number of skeletons")->required();
  gen->add_option("--per", per, "realisations per skeleton")->required();
  gen->add_option("--nht", nht, "ornament count range, e.g. 0..8");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--out", out, "output directory");

  auto* eval = app.add_subcommand("eval", "metrics over external embeddings");
  eval->add_option("--embeddings", embeddings, "PTNS tensor [items, dim]")->required();
  eval->add_option("--meta", meta, "meta.jsonl aligned with tensor rows")->required();
  eval->add_option("--out", out, "output directory");

  auto* wav = app.add_subcommand("export-wav", "render each bar's signal as WAV");
  wav->add_option("input", input, "input .mid file")->required();
  wav->add_option("--out", out, "output directory");
  wav->add_option("--rate", rate, "sample rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (convert->parsed()) return cmd_convert(input, rep, out, config_path, seed);
    if (build->parsed())
      return cmd_build_dataset(input, rep, out, config_path, augment, split, seed_opt);
    if (roundtrip->parsed()) return cmd_roundtrip(dataset_dir);
    if (gen->parsed()) return cmd_gen_chorales(skeletons, per, nht, seed, out);
    if (eval->parsed()) return cmd_eval(embeddings, meta, out);
    if (wav->parsed()) return cmd_export_wav(input, out, rate);
  } catch (const scorewave::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const scorewave::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
