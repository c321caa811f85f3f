// Copyright 2026 The btcurate Authors.
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

#ifndef BTCURATE_COMMON_HPP_
#define BTCURATE_COMMON_HPP_

#include <array>
#include <charconv>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/crc.hpp>

namespace btcurate {

inline constexpr std::string_view kVersion = "0.3.0";

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller violated an operation's precondition (bad sizes, empty inputs, ...).
struct PreconditionError : Error {
  using Error::Error;
};

// A tilt produced (numerically) zero total mass.
struct DegenerateStateError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

using Rng = std::mt19937_64;

inline std::uint32_t crc32(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

inline std::string hex32(std::uint32_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(8, '0');
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[v & 0xfu];
    v >>= 4;
  }
  return out;
}

// Stable sub-seed for a labelled stage of a run. The mapping is
//   seed_seq{lo32(root), hi32(root), crc32(label), lo32(index), hi32(index)}
// -> two 32-bit words -> (w1 << 32) | w0.
// std::seed_seq::generate is fully specified by the standard, so the
// derived seeds are identical across platforms and library versions.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label,
                                 std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(root),
                    static_cast<std::uint32_t>(root >> 32), crc32(label),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

// Shortest round-trip decimal form; locale independent.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw Error("format_double: conversion failed");
  return std::string(buf.data(), end);
}

}  // namespace btcurate

#endif  // BTCURATE_COMMON_HPP_
