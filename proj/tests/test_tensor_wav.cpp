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
#include "scorewave/rng.hpp"
#include "scorewave/tensor.hpp"

using namespace scorewave;

TEST_CASE("tensor: header layout is bit-exact little-endian") {
  Tensor t;
  t.dtype = TensorDType::kI32;
  t.dims = {2, 3};
  t.i32 = {1, -1, 2, -2, 3, 0x01020304};
  auto bytes = tensor_to_bytes(t);

  CHECK(bytes[0] == 'P');
  CHECK(bytes[1] == 'T');
  CHECK(bytes[2] == 'N');
  CHECK(bytes[3] == 'S');
  CHECK(bytes[4] == 1);  // version lo
  CHECK(bytes[5] == 0);
  CHECK(bytes[6] == 1);  // dtype i32
  CHECK(bytes[7] == 0);
  CHECK(bytes[8] == 2);  // rank
  CHECK(bytes[12] == 2);  // dims[0]
  CHECK(bytes[16] == 3);  // dims[1]
  // last payload word, little-endian
  const std::size_t off = bytes.size() - 4;
  CHECK(bytes[off] == 0x04);
  CHECK(bytes[off + 1] == 0x03);
  CHECK(bytes[off + 2] == 0x02);
  CHECK(bytes[off + 3] == 0x01);
}

TEST_CASE("tensor: f32 and i32 round-trip through bytes") {
  Rng rng(3);
  Tensor t;
  t.dtype = TensorDType::kF32;
  t.dims = {4, 5, 2};
  for (int i = 0; i < 40; ++i)
    t.f32.push_back(static_cast<float>(rng.uniform01() * 100 - 50));
  Tensor back = tensor_from_bytes(tensor_to_bytes(t));
  CHECK(back.dtype == t.dtype);
  CHECK(back.dims == t.dims);
  CHECK(back.f32 == t.f32);

  Tensor ti;
  ti.dtype = TensorDType::kI32;
  ti.dims = {7};
  for (int i = 0; i < 7; ++i) ti.i32.push_back(rng.uniform(-100000, 100000));
  Tensor backi = tensor_from_bytes(tensor_to_bytes(ti));
  CHECK(backi.i32 == ti.i32);
}

TEST_CASE("tensor: malformed inputs are structured errors") {
  Tensor t;
  t.dims = {2};
  t.f32 = {1.0f, 2.0f};
  auto good = tensor_to_bytes(t);

  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(tensor_from_bytes(bad_magic), ValidationError);

  auto truncated = good;
  truncated.pop_back();
  CHECK_THROWS_AS(tensor_from_bytes(truncated), ValidationError);

  auto wrong_payload = good;
  wrong_payload.insert(wrong_payload.end(), {0, 0, 0, 0});
  CHECK_THROWS_AS(tensor_from_bytes(wrong_payload), ValidationError);

  auto bad_dtype = good;
  bad_dtype[6] = 9;
  CHECK_THROWS_AS(tensor_from_bytes(bad_dtype), ValidationError);

  CHECK_THROWS_AS(tensor_from_bytes({'P', 'T'}), ValidationError);
}

TEST_CASE("tensor: payload size must match dims on write too") {
  Tensor t;
  t.dims = {3};
  t.f32 = {1.0f};  // wrong
  CHECK_THROWS_AS(tensor_to_bytes(t), ValidationError);
}

TEST_CASE("tensor: file round trip") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "scorewave_tensor_test.ptns")
          .string();
  Tensor t;
  t.dtype = TensorDType::kI32;
  t.dims = {2, 2};
  t.i32 = {9, 8, 7, 6};
  write_tensor_file(path, t);
  Tensor back = read_tensor_file(path);
  CHECK(back.i32 == t.i32);
  std::filesystem::remove(path);
}
