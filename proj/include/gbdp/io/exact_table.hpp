// Copyright 2026 The GBDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Binary layout of an exact value table, all little-endian:
//   uint32 n, uint32 t_bar, n x uint32 x_bar,
//   then (t_bar + 1) * |X| doubles, t = 1..t_bar+1, states in index order.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "gbdp/exact.hpp"
#include "gbdp/io/checkpoint.hpp"

namespace gbdp::io {

static_assert(std::endian::native == std::endian::little, "exact table I/O assumes a little-endian host");

inline void save_exact(const std::string& path, const ExactValueTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write " + path);
  const StateSpace& space = table.space();
  std::vector<std::uint32_t> header{static_cast<std::uint32_t>(space.dim()), static_cast<std::uint32_t>(table.t_bar())};
  for (int u : space.upper()) header.push_back(static_cast<std::uint32_t>(u));
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size() * sizeof(std::uint32_t)));
  const auto raw = table.raw();
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size_bytes()));
  if (!out) throw CheckpointError("failed writing " + path);
}

inline ExactValueTable load_exact(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read " + path);
  auto read_u32 = [&]() {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw CheckpointError(path + ": truncated header");
    return v;
  };
  const std::uint32_t n = read_u32();
  const std::uint32_t t_bar = read_u32();
  if (n == 0 || n > 64 || t_bar == 0) throw CheckpointError(path + ": implausible header");
  std::vector<int> upper(n);
  for (auto& u : upper) u = static_cast<int>(read_u32());
  ExactValueTable table(StateSpace(StateVec(std::move(upper))), static_cast<int>(t_bar));
  auto raw = table.raw();
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size_bytes()))) {
    throw CheckpointError(path + ": truncated value block");
  }
  if (in.peek() != std::ifstream::traits_type::eof()) throw CheckpointError(path + ": trailing bytes");
  return table;
}

}  // namespace gbdp::io
