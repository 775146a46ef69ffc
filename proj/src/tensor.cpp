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

#include "scorewave/tensor.hpp"

#include <bit>
#include <cstring>

#include "scorewave/errors.hpp"
#include "scorewave/midi.hpp"  // read_file / write_file

namespace scorewave {

namespace {

constexpr std::uint16_t kVersion = 1;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back(v >> 8);
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = bytes_[pos_] | (bytes_[pos_ + 1] << 8);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  const std::uint8_t* raw(std::size_t n) {
    need(n);
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size())
      throw ValidationError("truncated tensor file");
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
void append_le(std::vector<std::uint8_t>& out, T value) {
  static_assert(sizeof(T) == 4);
  std::uint32_t bits;
  std::memcpy(&bits, &value, 4);
  put_u32(out, bits);
}

template <typename T>
T read_le(const std::uint8_t* p) {
  static_assert(sizeof(T) == 4);
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i)
    bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  T value;
  std::memcpy(&value, &bits, 4);
  return value;
}

}  // namespace

std::vector<std::uint8_t> tensor_to_bytes(const Tensor& tensor) {
  const std::size_t n = tensor.element_count();
  if (tensor.dtype == TensorDType::kF32 && tensor.f32.size() != n)
    throw ValidationError("f32 payload size does not match dims");
  if (tensor.dtype == TensorDType::kI32 && tensor.i32.size() != n)
    throw ValidationError("i32 payload size does not match dims");

  std::vector<std::uint8_t> out;
  out.reserve(12 + 4 * tensor.dims.size() + 4 * n);
  out.insert(out.end(), {'P', 'T', 'N', 'S'});
  put_u16(out, kVersion);
  put_u16(out, static_cast<std::uint16_t>(tensor.dtype));
  put_u32(out, static_cast<std::uint32_t>(tensor.dims.size()));
  for (auto d : tensor.dims) put_u32(out, d);
  if (tensor.dtype == TensorDType::kF32)
    for (float v : tensor.f32) append_le(out, v);
  else
    for (std::int32_t v : tensor.i32) append_le(out, v);
  return out;
}

Tensor tensor_from_bytes(const std::vector<std::uint8_t>& bytes) {
  Reader reader(bytes);
  const std::uint8_t* magic = reader.raw(4);
  if (!(magic[0] == 'P' && magic[1] == 'T' && magic[2] == 'N' &&
        magic[3] == 'S'))
    throw ValidationError("not a PTNS tensor file");
  const std::uint16_t version = reader.u16();
  if (version != kVersion)
    throw ValidationError("unsupported tensor version " +
                          std::to_string(version));
  const std::uint16_t dtype = reader.u16();
  if (dtype > 1)
    throw ValidationError("unknown tensor dtype code " + std::to_string(dtype));

  Tensor tensor;
  tensor.dtype = static_cast<TensorDType>(dtype);
  const std::uint32_t rank = reader.u32();
  if (rank > 8) throw ValidationError("tensor rank too large");
  for (std::uint32_t i = 0; i < rank; ++i) tensor.dims.push_back(reader.u32());

  const std::size_t n = tensor.element_count();
  if (reader.remaining() != 4 * n)
    throw ValidationError("tensor payload is " +
                          std::to_string(reader.remaining()) +
                          " bytes, dims require " + std::to_string(4 * n));
  if (tensor.dtype == TensorDType::kF32) {
    tensor.f32.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      tensor.f32[i] = read_le<float>(reader.raw(4));
  } else {
    tensor.i32.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      tensor.i32[i] = read_le<std::int32_t>(reader.raw(4));
  }
  return tensor;
}

void write_tensor_file(const std::string& path, const Tensor& tensor) {
  auto bytes = tensor_to_bytes(tensor);
  write_file(path, bytes);
}

Tensor read_tensor_file(const std::string& path) {
  return tensor_from_bytes(read_file(path));
}

}  // namespace scorewave
