#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

namespace cbt {

// Time is counted in integer slots; one span is `mu` slots.
using SlotTime = std::int64_t;

// Dense secondary-user index in [0, n).
struct UserId {
  std::uint32_t value{0};

  constexpr UserId() = default;
  constexpr explicit UserId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(UserId, UserId) = default;
};

inline std::ostream& operator<<(std::ostream& os, UserId id) { return os << id.value; }

// Identifies one transaction: who issued it, when, and the issuer's sequence
// number (which disambiguates several requests in the same slot).
struct SatId {
  UserId origin;
  SlotTime generated_at{0};
  std::uint64_t sequence{0};

  friend constexpr auto operator<=>(const SatId&, const SatId&) = default;
};

inline std::string to_string(const SatId& id) {
  return std::to_string(id.origin.value) + ':' + std::to_string(id.generated_at) + ':' +
         std::to_string(id.sequence);
}

inline std::ostream& operator<<(std::ostream& os, const SatId& id) { return os << to_string(id); }

}  // namespace cbt

template <>
struct std::hash<cbt::UserId> {
  std::size_t operator()(cbt::UserId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

template <>
struct std::hash<cbt::SatId> {
  std::size_t operator()(const cbt::SatId& id) const noexcept {
    std::uint64_t h = id.origin.value;
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(id.generated_at);
    h = h * 0x9E3779B97F4A7C15ULL ^ id.sequence;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};
