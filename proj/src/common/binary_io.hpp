// Copyright 2026 The pcgil Authors
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

#ifndef PCGIL_COMMON_BINARY_IO_HPP_
#define PCGIL_COMMON_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "common/error.hpp"

namespace pcgil::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats are written little-endian; add byte swapping for this target");

template <typename T>
  requires std::is_arithmetic_v<T>
void write(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
  requires std::is_arithmetic_v<T>
T read(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  require(static_cast<bool>(in), ErrorCode::kFormat, "unexpected end of file");
  return value;
}

inline void write_string(std::ostream& out, const std::string& s) {
  write<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in, std::uint32_t max_len = 1u << 20) {
  const auto n = read<std::uint32_t>(in);
  require(n <= max_len, ErrorCode::kFormat, "string field too long");
  std::string s(n, '\0');
  in.read(s.data(), n);
  require(static_cast<bool>(in), ErrorCode::kFormat, "unexpected end of file");
  return s;
}

inline void expect_magic(std::istream& in, const char* magic, std::size_t n) {
  std::string got(n, '\0');
  in.read(got.data(), static_cast<std::streamsize>(n));
  require(static_cast<bool>(in) && std::memcmp(got.data(), magic, n) == 0,
          ErrorCode::kFormat, std::string("bad magic, expected ") + magic);
}

}  // namespace pcgil::io

#endif  // PCGIL_COMMON_BINARY_IO_HPP_
