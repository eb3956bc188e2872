#pragma once

#include <cbt/types.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cbt {

using Bytes = std::vector<std::byte>;

struct KeyPair {
  Bytes public_key;
  Bytes private_key;
};

// Signing interface used when issuing and verifying transactions. A real
// public-key scheme can be dropped in behind it.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;

  virtual KeyPair keypair(UserId user) const = 0;
  virtual Bytes sign(std::span<const std::byte> private_key, std::span<const std::byte> message) const = 0;
  virtual bool verify(std::span<const std::byte> public_key, std::span<const std::byte> message,
                      std::span<const std::byte> signature) const = 0;
};

namespace detail {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline void put_u64_be(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::byte>((v >> shift) & 0xFF));
}

inline std::uint64_t get_u64_be(std::span<const std::byte> in) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | std::to_integer<std::uint64_t>(in[i]);
  return v;
}

}  // namespace detail

// Deterministic stand-in for a public-key signature: a keyed hash with a
// per-user secret derived from the scheme seed. The "public" key equals the
// secret, so this authenticates but is not asymmetric; it exists to make the
// validity path real while keeping simulations fast and reproducible.
class KeyedHashScheme final : public SignatureScheme {
 public:
  explicit KeyedHashScheme(std::uint64_t seed = 0x5EC0'DA7A'0000'0001ULL) : seed_(seed) {}

  KeyPair keypair(UserId user) const override {
    Bytes secret;
    secret.reserve(16);
    const std::uint64_t k0 = detail::mix64(seed_ ^ detail::mix64(user.value + 1));
    const std::uint64_t k1 = detail::mix64(k0 ^ 0xA5A5A5A5A5A5A5A5ULL);
    detail::put_u64_be(secret, k0);
    detail::put_u64_be(secret, k1);
    return {secret, secret};
  }

  Bytes sign(std::span<const std::byte> private_key, std::span<const std::byte> message) const override {
    const auto [h0, h1] = digest(private_key, message);
    Bytes sig;
    sig.reserve(16);
    detail::put_u64_be(sig, h0);
    detail::put_u64_be(sig, h1);
    return sig;
  }

  bool verify(std::span<const std::byte> public_key, std::span<const std::byte> message,
              std::span<const std::byte> signature) const override {
    if (signature.size() != 16) return false;
    const auto [h0, h1] = digest(public_key, message);
    return detail::get_u64_be(signature.first(8)) == h0 && detail::get_u64_be(signature.subspan(8)) == h1;
  }

 private:
  static std::array<std::uint64_t, 2> digest(std::span<const std::byte> key, std::span<const std::byte> message) {
    std::uint64_t k0 = 0, k1 = 0;
    if (key.size() >= 16) {
      k0 = detail::get_u64_be(key.first(8));
      k1 = detail::get_u64_be(key.subspan(8, 8));
    }
    std::uint64_t a = k0 ^ 0x736F6D6570736575ULL;
    std::uint64_t b = k1 ^ 0x646F72616E646F6DULL;
    std::uint64_t word = 0;
    std::size_t filled = 0;
    auto absorb = [&](std::uint64_t w) {
      a = detail::mix64(a ^ w) + b;
      b = detail::mix64(b + w) ^ a;
    };
    for (std::byte byte : message) {
      word = (word << 8) | std::to_integer<std::uint64_t>(byte);
      if (++filled == 8) {
        absorb(word);
        word = 0;
        filled = 0;
      }
    }
    absorb(word ^ (static_cast<std::uint64_t>(message.size()) << 56));
    return {detail::mix64(a ^ k1), detail::mix64(b ^ k0)};
  }

  std::uint64_t seed_;
};

}  // namespace cbt
