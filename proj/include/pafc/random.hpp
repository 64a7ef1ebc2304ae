/**
 * @file random.hpp
 * Seeded randomness. Every random stream in the library is derived from a
 * single master seed plus a component tag and an index, so results never
 * depend on scheduling or on how many streams were created before.
 */
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pafc {

using Rng = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index = 0) noexcept {
  return detail::splitmix64(detail::splitmix64(master ^ detail::fnv1a(tag)) + index);
}

inline Rng make_rng(std::uint64_t master, std::string_view tag, std::uint64_t index = 0) {
  return Rng{derive_seed(master, tag, index)};
}

}  // namespace pafc
