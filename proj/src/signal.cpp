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

#include "scorewave/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <nlohmann/json.hpp>

#include "fft_backend.hpp"
#include "scorewave/errors.hpp"

namespace scorewave {

namespace {

using cd = std::complex<double>;

std::vector<bool> prime_sieve(int n) {
  std::vector<bool> is_prime(static_cast<std::size_t>(n) + 1, true);
  is_prime[0] = false;
  if (n >= 1) is_prime[1] = false;
  for (int i = 2; static_cast<std::int64_t>(i) * i <= n; ++i)
    if (is_prime[i])
      for (int j = i * i; j <= n; j += i) is_prime[j] = false;
  return is_prime;
}

std::vector<double> make_window(WindowShape shape, int length) {
  std::vector<double> w(static_cast<std::size_t>(length), 1.0);
  if (shape == WindowShape::kHann && length > 1) {
    for (int n = 0; n < length; ++n)
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / (length - 1));
  }
  return w;
}

void validate_config(const SpectralConfig& cfg) {
  if (cfg.n_fft < 2 || cfg.n_fft % 2 != 0)
    throw ValidationError("n_fft must be even and >= 2");
  if (cfg.win_length < 1 || cfg.win_length > cfg.n_fft)
    throw ValidationError("win_length must be in [1, n_fft]");
  if (cfg.hop < 1) throw ValidationError("hop must be >= 1");
  if (!(cfg.detection_threshold > 0.0))
    throw ValidationError("detection_threshold must be positive");
}

// Per-(config, map) decoding calibration: the unit baseline spectrum
// (response of an all-zero roll), the unit activation response at each
// prime bin, and the calibration bins used to estimate the per-frame
// baseline scale.
struct Calibration {
  std::vector<cd> baseline;           // one-sided, unit baseline scale
  std::array<cd, kNumPitches> unit{}; // activation response at prime bins
  std::vector<int> calib_bins;
  double calib_norm = 0.0;            // sum |baseline[k]|^2 over calib bins
};

ComplexMatrix single_frame_matrix(const SpectralConfig& cfg) {
  ComplexMatrix m(cfg.bins(), 1);
  for (int k = 0; k < m.bins; ++k) m.at(k, 0) = cd(0.0, 1.0);
  return m;
}

std::shared_ptr<const Calibration> compute_calibration(
    const SpectralConfig& cfg, const PrimeMap& map) {
  auto cal = std::make_shared<Calibration>();

  ComplexMatrix base = single_frame_matrix(cfg);
  SignalRep base_sig = inverse_stft(base, cfg);
  ComplexMatrix base_spec = forward_stft(base_sig.samples, cfg);
  cal->baseline.resize(static_cast<std::size_t>(base_spec.bins));
  for (int k = 0; k < base_spec.bins; ++k) cal->baseline[k] = base_spec.at(k, 0);

  for (int p = 0; p < kNumPitches; ++p) {
    ComplexMatrix m = single_frame_matrix(cfg);
    m.at(map.table[p], 0) += 1.0;
    ComplexMatrix spec = forward_stft(inverse_stft(m, cfg).samples, cfg);
    cal->unit[p] = spec.at(map.table[p], 0) - cal->baseline[map.table[p]];
  }

  // Calibration bins: away from every selected bin, with a usable baseline
  // response; evenly subsampled.
  std::vector<bool> near_selected(static_cast<std::size_t>(cfg.bins()), false);
  for (int p = 0; p < kNumPitches; ++p)
    for (int d = -2; d <= 2; ++d) {
      int k = map.table[p] + d;
      if (k >= 0 && k < cfg.bins()) near_selected[k] = true;
    }
  std::vector<int> candidates;
  for (int k = 1; k < cfg.bins() - 1; ++k)
    if (!near_selected[k] && std::abs(cal->baseline[k]) > 1e-9)
      candidates.push_back(k);
  const std::size_t want = 128;
  if (candidates.size() <= want) {
    cal->calib_bins = candidates;
  } else {
    for (std::size_t i = 0; i < want; ++i)
      cal->calib_bins.push_back(
          candidates[i * (candidates.size() - 1) / (want - 1)]);
  }
  for (int k : cal->calib_bins) cal->calib_norm += std::norm(cal->baseline[k]);
  return cal;
}

struct CalibKey {
  SpectralConfig cfg;
  std::array<int, kNumPitches> table;

  friend bool operator<(const CalibKey& a, const CalibKey& b) {
    auto tie = [](const CalibKey& k) {
      return std::tuple(k.cfg.n_fft, k.cfg.win_length, k.cfg.hop,
                        static_cast<int>(k.cfg.window),
                        k.cfg.detection_threshold, k.table);
    };
    return tie(a) < tie(b);
  }
};

std::shared_ptr<const Calibration> get_calibration(const SpectralConfig& cfg,
                                                   const PrimeMap& map) {
  static std::mutex mutex;
  static std::map<CalibKey, std::shared_ptr<const Calibration>> cache;
  CalibKey key{cfg, map.table};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto cal = compute_calibration(cfg, map);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(std::move(key), cal);
  return cal;
}

void put_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back(v >> 8);
}
void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

}  // namespace

PrimeMap build_prime_map(const PrimeMapConfig& cfg) {
  if (cfg.first < 2 || cfg.last <= cfg.first)
    throw ValidationError("prime map bounds must satisfy 2 <= first < last");
  auto is_prime = prime_sieve(cfg.last);
  if (!is_prime[cfg.first] || !is_prime[cfg.last])
    throw ValidationError("prime map endpoints must both be prime");

  std::vector<int> kept;
  for (int p = cfg.first; p <= cfg.last; ++p) {
    if (!is_prime[p]) continue;
    if (kept.empty() || p - kept.back() >= cfg.min_gap) kept.push_back(p);
  }
  if (static_cast<int>(kept.size()) < kNumPitches)
    throw ValidationError("only " + std::to_string(kept.size()) +
                          " primes survive the gap filter; need 128");

  PrimeMap map;
  const std::size_t n = kept.size();
  for (int i = 0; i < kNumPitches; ++i) {
    // round(i * (n-1) / 127), evaluated in integers
    const std::size_t idx =
        (static_cast<std::size_t>(i) * (n - 1) + 63) / (kNumPitches - 1);
    map.table[i] = kept[idx];
  }
  map.table[0] = kept.front();
  map.table[kNumPitches - 1] = kept.back();
  return map;
}

std::string spectral_config_to_json(const SpectralConfig& cfg) {
  nlohmann::json j{
      {"n_fft", cfg.n_fft},
      {"win_length", cfg.win_length},
      {"hop", cfg.hop},
      {"window", cfg.window == WindowShape::kHann ? "hann" : "rectangular"},
      {"detection_threshold", cfg.detection_threshold},
  };
  return j.dump();
}

SpectralConfig spectral_config_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad spectral config JSON: ") + e.what());
  }
  SpectralConfig cfg;
  cfg.n_fft = j.value("n_fft", cfg.n_fft);
  cfg.win_length = j.value("win_length", cfg.win_length);
  cfg.hop = j.value("hop", cfg.hop);
  cfg.detection_threshold =
      j.value("detection_threshold", cfg.detection_threshold);
  const std::string window = j.value("window", "rectangular");
  if (window == "hann")
    cfg.window = WindowShape::kHann;
  else if (window == "rectangular")
    cfg.window = WindowShape::kRectangular;
  else
    throw ValidationError("unknown window shape: " + window);
  validate_config(cfg);
  return cfg;
}

ComplexMatrix roll_to_complex(const PianoRoll& roll, const PrimeMap& map,
                              const SpectralConfig& cfg) {
  validate_config(cfg);
  if (map.max_bin() >= cfg.bins())
    throw ValidationError("n_fft " + std::to_string(cfg.n_fft) +
                          " cannot index prime bin " +
                          std::to_string(map.max_bin()));
  ComplexMatrix m(cfg.bins(), roll.steps());
  for (int k = 0; k < m.bins; ++k)
    for (int t = 0; t < m.frames; ++t) m.at(k, t) = cd(0.0, 1.0);
  for (int p = 0; p < kNumPitches; ++p)
    for (int t = 0; t < roll.steps(); ++t)
      if (roll.get(p, t)) m.at(map.table[p], t) += 1.0;
  return m;
}

SignalRep inverse_stft(const ComplexMatrix& matrix, const SpectralConfig& cfg) {
  validate_config(cfg);
  if (matrix.bins != cfg.bins())
    throw ShapeError("matrix has " + std::to_string(matrix.bins) +
                     " bins, config expects " + std::to_string(cfg.bins()));
  if (matrix.frames < 1) throw ShapeError("matrix has no frames");

  const int n = cfg.n_fft;
  const int win = cfg.win_length;
  const auto window = make_window(cfg.window, win);
  const std::size_t total =
      static_cast<std::size_t>(matrix.frames - 1) * cfg.hop + win;

  std::vector<double> num(total, 0.0), den(total, 0.0);
  std::vector<cd> frame(static_cast<std::size_t>(n));
  for (int t = 0; t < matrix.frames; ++t) {
    // mirror the one-sided spectrum; imaginary parts of DC and Nyquist are
    // ignored so the synthesis frame is real
    frame[0] = cd(matrix.at(0, t).real(), 0.0);
    frame[n / 2] = cd(matrix.at(n / 2, t).real(), 0.0);
    for (int k = 1; k < n / 2; ++k) {
      frame[k] = matrix.at(k, t);
      frame[n - k] = std::conj(matrix.at(k, t));
    }
    detail::fft_inverse(frame);
    const std::size_t base = static_cast<std::size_t>(t) * cfg.hop;
    for (int i = 0; i < win; ++i) {
      num[base + i] += window[i] * frame[i].real();
      den[base + i] += window[i] * window[i];
    }
  }

  SignalRep sig;
  sig.config = cfg;
  sig.samples.resize(total);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < total; ++i)
    sig.samples[i] = den[i] > eps ? num[i] / den[i] : 0.0;
  return sig;
}

ComplexMatrix forward_stft(std::span<const double> samples,
                           const SpectralConfig& cfg) {
  validate_config(cfg);
  const int win = cfg.win_length;
  if (static_cast<int>(samples.size()) < win)
    throw ShapeError("signal of " + std::to_string(samples.size()) +
                     " samples is shorter than one window of " +
                     std::to_string(win));
  const std::size_t span = samples.size() - static_cast<std::size_t>(win);
  if (span % static_cast<std::size_t>(cfg.hop) != 0) {
    const std::size_t frames = span / cfg.hop + 1;
    throw ShapeError(
        "signal does not tile into frames: expected " +
        std::to_string(static_cast<std::size_t>(win) + (frames - 1) * cfg.hop) +
        " or " +
        std::to_string(static_cast<std::size_t>(win) + frames * cfg.hop) +
        " samples, got " + std::to_string(samples.size()));
  }
  const int frames = static_cast<int>(span / cfg.hop) + 1;

  const auto window = make_window(cfg.window, win);
  ComplexMatrix out(cfg.bins(), frames);
  std::vector<cd> frame(static_cast<std::size_t>(cfg.n_fft));
  for (int t = 0; t < frames; ++t) {
    std::fill(frame.begin(), frame.end(), cd(0.0, 0.0));
    const std::size_t base = static_cast<std::size_t>(t) * cfg.hop;
    for (int i = 0; i < win; ++i)
      frame[i] = cd(samples[base + i] * window[i], 0.0);
    detail::fft_forward(frame);
    for (int k = 0; k < out.bins; ++k) out.at(k, t) = frame[k];
  }
  return out;
}

ComplexMatrix forward_stft(const SignalRep& sig) {
  return forward_stft(sig.samples, sig.config);
}

SignalRep encode_signal(const PianoRoll& roll, const PrimeMap& map,
                        const SpectralConfig& cfg) {
  return inverse_stft(roll_to_complex(roll, map, cfg), cfg);
}

PianoRoll decode_signal(const SignalRep& sig, const PrimeMap& map,
                        const SpectralConfig& cfg) {
  validate_config(cfg);
  if (map.max_bin() >= cfg.bins())
    throw ValidationError("n_fft cannot index the prime map's largest bin");
  ComplexMatrix spec = forward_stft(sig.samples, cfg);
  auto cal = get_calibration(cfg, map);

  PianoRoll roll(spec.frames);
  for (int t = 0; t < spec.frames; ++t) {
    // least-squares estimate of the baseline scale in this frame
    double beta = 0.0;
    if (cal->calib_norm > 0.0) {
      double acc = 0.0;
      for (int k : cal->calib_bins)
        acc += (std::conj(cal->baseline[k]) * spec.at(k, t)).real();
      beta = acc / cal->calib_norm;
    }
    for (int p = 0; p < kNumPitches; ++p) {
      const double unit = std::abs(cal->unit[p]);
      if (unit <= 0.0) continue;
      const cd residual =
          spec.at(map.table[p], t) - beta * cal->baseline[map.table[p]];
      roll.set(p, t, std::abs(residual) >= cfg.detection_threshold * unit);
    }
  }
  return roll;
}

PianoRoll decode_signal(const SignalRep& sig, const PrimeMap& map) {
  return decode_signal(sig, map, sig.config);
}

std::vector<std::uint8_t> export_wav(const SignalRep& sig, int sample_rate) {
  if (sample_rate < 1) throw ValidationError("sample rate must be >= 1");
  double peak = 0.0;
  for (double s : sig.samples) {
    if (!std::isfinite(s)) throw ValidationError("signal contains non-finite samples");
    peak = std::max(peak, std::abs(s));
  }
  const double scale = peak > 0.0 ? 32767.0 / peak : 0.0;

  const std::uint32_t n = static_cast<std::uint32_t>(sig.samples.size());
  const std::uint32_t data_bytes = n * 2;
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32le(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32le(out, 16);
  put_u16le(out, 1);  // PCM
  put_u16le(out, 1);  // mono
  put_u32le(out, static_cast<std::uint32_t>(sample_rate));
  put_u32le(out, static_cast<std::uint32_t>(sample_rate) * 2);
  put_u16le(out, 2);   // block align
  put_u16le(out, 16);  // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32le(out, data_bytes);
  for (double s : sig.samples) {
    const long v = std::lround(s * scale);
    const std::int16_t q =
        static_cast<std::int16_t>(std::clamp<long>(v, -32768, 32767));
    out.push_back(static_cast<std::uint8_t>(q & 0xff));
    out.push_back(static_cast<std::uint8_t>((q >> 8) & 0xff));
  }
  return out;
}

WavData read_wav(std::span<const std::uint8_t> bytes) {
  auto u16 = [&](std::size_t off) -> std::uint32_t {
    return bytes[off] | (bytes[off + 1] << 8);
  };
  auto u32 = [&](std::size_t off) -> std::uint32_t {
    return bytes[off] | (bytes[off + 1] << 8) | (bytes[off + 2] << 16) |
           (static_cast<std::uint32_t>(bytes[off + 3]) << 24);
  };
  auto tag = [&](std::size_t off, const char* t) {
    return off + 4 <= bytes.size() && std::equal(t, t + 4, bytes.begin() + off);
  };
  if (bytes.size() < 12 || !tag(0, "RIFF") || !tag(8, "WAVE"))
    throw ValidationError("not a RIFF/WAVE file");

  WavData wav;
  bool got_fmt = false;
  std::size_t off = 12;
  while (off + 8 <= bytes.size()) {
    const std::uint32_t size = u32(off + 4);
    if (off + 8 + size > bytes.size())
      throw ValidationError("truncated WAV chunk");
    if (tag(off, "fmt ")) {
      if (size < 16) throw ValidationError("fmt chunk too small");
      if (u16(off + 8) != 1) throw ValidationError("only PCM WAV is supported");
      if (u16(off + 10) != 1) throw ValidationError("only mono WAV is supported");
      if (u16(off + 22) != 16)
        throw ValidationError("only 16-bit WAV is supported");
      wav.sample_rate = static_cast<int>(u32(off + 12));
      got_fmt = true;
    } else if (tag(off, "data")) {
      if (!got_fmt) throw ValidationError("data chunk before fmt chunk");
      wav.samples.resize(size / 2);
      for (std::size_t i = 0; i < wav.samples.size(); ++i)
        wav.samples[i] =
            static_cast<std::int16_t>(u16(off + 8 + 2 * i));
      return wav;
    }
    off += 8 + size + (size & 1);
  }
  throw ValidationError("WAV file has no data chunk");
}

}  // namespace scorewave
