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

#ifndef SCOREWAVE_SIGNAL_HPP_
#define SCOREWAVE_SIGNAL_HPP_

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scorewave/core.hpp"

namespace scorewave {

// Signal-like codec: piano-roll -> prime-bin complex spectrogram -> inverse
// STFT, and back. Each MIDI pitch owns one prime-numbered frequency bin
// (43 for pitch 0 up to 2063 for pitch 127), an artificial phase is written
// as a constant imaginary part of 1 in every matrix entry, and the frames
// are resynthesized by overlap-add.
//
// The default framing is orthogonal: win_length == hop == n_fft with a
// rectangular window, so each piano-roll column owns one disjoint,
// fully-resolved DFT frame and thresholded analysis recovers the roll
// exactly (machine precision) for every binary roll. Other framings are
// supported for experimentation but only the orthogonal one carries the
// exact-inversion guarantee; see docs/formats.md.

/// Injective MIDI pitch -> prime frequency-bin table.
struct PrimeMap {
  std::array<int, kNumPitches> table{};

  int max_bin() const { return table[kNumPitches - 1]; }
};

struct PrimeMapConfig {
  int first = 43;    // bin of pitch 0
  int last = 2063;   // bin of pitch 127
  int min_gap = 3;   // drop primes closer than this to the previous kept one
};

/// Sieve primes in [first, last], drop any prime within min_gap of the
/// previously kept one, then uniformly subsample the survivors to 128
/// entries keeping both endpoints. Deterministic; the result is strictly
/// increasing with gaps >= min_gap.
PrimeMap build_prime_map(const PrimeMapConfig& cfg = {});

enum class WindowShape { kRectangular, kHann };

struct SpectralConfig {
  int n_fft = 4128;        // covers one-sided bins up to 2064
  int win_length = 4128;   // == n_fft by default: orthogonal frames
  int hop = 4128;          // == win_length by default: disjoint frames
  WindowShape window = WindowShape::kRectangular;
  double detection_threshold = 0.5;  // fraction of the unit response

  int bins() const { return n_fft / 2 + 1; }
  friend bool operator==(const SpectralConfig&, const SpectralConfig&) = default;
};

std::string spectral_config_to_json(const SpectralConfig& cfg);
SpectralConfig spectral_config_from_json(const std::string& json_text);

/// One-sided complex spectrogram, bins x frames.
struct ComplexMatrix {
  int bins = 0;
  int frames = 0;
  std::vector<std::complex<double>> values;  // bin-major

  ComplexMatrix() = default;
  ComplexMatrix(int bins_, int frames_)
      : bins(bins_), frames(frames_),
        values(static_cast<std::size_t>(bins_) * frames_) {}

  std::complex<double>& at(int bin, int frame) {
    return values[static_cast<std::size_t>(bin) * frames + frame];
  }
  const std::complex<double>& at(int bin, int frame) const {
    return values[static_cast<std::size_t>(bin) * frames + frame];
  }
};

/// Real-valued waveform encoding of one bar.
struct SignalRep {
  std::vector<double> samples;
  SpectralConfig config;

  std::size_t length() const { return samples.size(); }
};

/// Place roll activations as the real part at prime bins (one frame per
/// column) and set the imaginary part to 1 in every entry. Requires
/// n_fft/2 >= the map's largest bin.
ComplexMatrix roll_to_complex(const PianoRoll& roll, const PrimeMap& map,
                              const SpectralConfig& cfg = {});

/// Overlap-add ISTFT: each one-sided frame spectrum is mirrored
/// conjugate-symmetrically (imaginary parts of DC and Nyquist ignored),
/// inverse-transformed, windowed, and accumulated; the result is divided by
/// the summed squared window envelope, guarded below machine epsilon.
SignalRep inverse_stft(const ComplexMatrix& matrix, const SpectralConfig& cfg = {});

/// Windowed, zero-padded forward STFT. The signal must tile exactly into
/// frames (length == win_length + k*hop); otherwise a ShapeError reports
/// the expected and actual sample counts.
ComplexMatrix forward_stft(std::span<const double> samples,
                           const SpectralConfig& cfg = {});
ComplexMatrix forward_stft(const SignalRep& sig);

/// roll_to_complex then inverse_stft.
SignalRep encode_signal(const PianoRoll& roll, const PrimeMap& map,
                        const SpectralConfig& cfg = {});

/// Thresholding analysis: per frame, the artificial-phase baseline level is
/// estimated from non-selected calibration bins and removed, and a pitch is
/// active iff the remaining magnitude at its prime bin reaches
/// detection_threshold x the analytically known unit-activation response.
/// Total on any real signal; exact on encode_signal output under the
/// orthogonal default framing.
PianoRoll decode_signal(const SignalRep& sig, const PrimeMap& map,
                        const SpectralConfig& cfg = {});
PianoRoll decode_signal(const SignalRep& sig, const PrimeMap& map);

// ---- WAV plumbing (auditioning aid) ----

inline constexpr int kDefaultWavRate = 8192;

/// 16-bit PCM mono RIFF/WAVE bytes, peak-normalized.
std::vector<std::uint8_t> export_wav(const SignalRep& sig,
                                     int sample_rate = kDefaultWavRate);

struct WavData {
  int sample_rate = 0;
  std::vector<std::int16_t> samples;
};

/// Reader for the subset of WAV this project writes (PCM16 mono).
WavData read_wav(std::span<const std::uint8_t> bytes);

}  // namespace scorewave

#endif  // SCOREWAVE_SIGNAL_HPP_
