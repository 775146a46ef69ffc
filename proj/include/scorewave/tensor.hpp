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

#ifndef SCOREWAVE_TENSOR_HPP_
#define SCOREWAVE_TENSOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace scorewave {

// Minimal binary tensor container ("PTNS", documented bit-exactly in
// docs/formats.md). Everything is little-endian:
//   magic "PTNS" | version u16 (=1) | dtype u16 (0=f32, 1=i32) |
//   rank u32 | dims u32[rank] | payload, row-major.

enum class TensorDType : std::uint16_t { kF32 = 0, kI32 = 1 };

struct Tensor {
  TensorDType dtype = TensorDType::kF32;
  std::vector<std::uint32_t> dims;
  std::vector<float> f32;
  std::vector<std::int32_t> i32;

  std::size_t element_count() const {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return dims.empty() ? 0 : n;
  }
};

std::vector<std::uint8_t> tensor_to_bytes(const Tensor& tensor);
Tensor tensor_from_bytes(const std::vector<std::uint8_t>& bytes);

void write_tensor_file(const std::string& path, const Tensor& tensor);
Tensor read_tensor_file(const std::string& path);

}  // namespace scorewave

#endif  // SCOREWAVE_TENSOR_HPP_
