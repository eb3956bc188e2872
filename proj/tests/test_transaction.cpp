#include <catch_amalgamated.hpp>

#include <cbt/transaction.hpp>

#include <set>

using namespace cbt;

TEST_CASE("generate_sat fills the identity and signs it", "[transaction]") {
  const KeyedHashScheme scheme(42);
  TransactionIssuer issuer(scheme);
  const auto sat = issuer.generate(UserId{1}, 0);
  CHECK(sat.origin() == UserId{1});
  CHECK(sat.generated_at() == 0);
  CHECK(sat.verifications.empty());
  CHECK(signature_valid(sat, scheme));

  const auto again = issuer.generate(UserId{1}, 0);
  CHECK(again.id != sat.id);
  CHECK(again.id.sequence == sat.id.sequence + 1);
}

TEST_CASE("canonical encoding is 24 big-endian bytes", "[transaction]") {
  const Bytes enc = canonical_encoding(SatId{UserId{0x0102}, 0x0304, 5});
  REQUIRE(enc.size() == 24);
  CHECK(enc[6] == std::byte{0x01});
  CHECK(enc[7] == std::byte{0x02});
  CHECK(enc[14] == std::byte{0x03});
  CHECK(enc[15] == std::byte{0x04});
  CHECK(enc[23] == std::byte{0x05});
  for (int i : {0, 1, 2, 3, 4, 5, 8, 16, 22}) CHECK(enc[static_cast<std::size_t>(i)] == std::byte{0});
}

TEST_CASE("verify_sat records the verifier once", "[transaction]") {
  const KeyedHashScheme scheme(7);
  auto sat = generate_sat(UserId{1}, 0, 0, scheme);
  sat = verify_sat(UserId{2}, sat, 3, scheme);
  CHECK(sat.verifications == std::map<UserId, SlotTime>{{UserId{2}, 3}});
  sat = verify_sat(UserId{2}, sat, 5, scheme);
  CHECK(sat.verifications == std::map<UserId, SlotTime>{{UserId{2}, 3}});
  CHECK_FALSE(record_verification(sat, UserId{2}, 6, scheme));
  CHECK(record_verification(sat, UserId{4}, 6, scheme));
  CHECK(sat.verifications.size() == 2);
}

TEST_CASE("verification rejects tampering and bad arguments", "[transaction]") {
  const KeyedHashScheme scheme(7);
  auto sat = generate_sat(UserId{1}, 10, 0, scheme);

  auto tampered = sat;
  tampered.id.generated_at = 0;
  CHECK_FALSE(signature_valid(tampered, scheme));
  CHECK_THROWS_AS(verify_sat(UserId{2}, tampered, 11, scheme), ValidityError);

  auto forged = sat;
  forged.id.origin = UserId{3};
  CHECK_THROWS_AS(verify_sat(UserId{2}, forged, 11, scheme), ValidityError);

  auto truncated = sat;
  truncated.signature.pop_back();
  CHECK_THROWS_AS(verify_sat(UserId{2}, truncated, 11, scheme), ValidityError);

  CHECK_THROWS_AS(verify_sat(UserId{1}, sat, 11, scheme), ParameterError);
  CHECK_THROWS_AS(verify_sat(UserId{2}, sat, 9, scheme), ParameterError);
  // Same-slot verification is allowed.
  CHECK(verify_sat(UserId{2}, sat, 10, scheme).verifications.at(UserId{2}) == 10);
}

TEST_CASE("keyed-hash signatures depend on key and message", "[transaction][signature]") {
  const KeyedHashScheme a(1);
  const KeyedHashScheme b(2);
  const auto sat = generate_sat(UserId{5}, 3, 0, a);
  CHECK(signature_valid(sat, a));
  CHECK_FALSE(signature_valid(sat, b));

  std::set<Bytes> seen;
  for (std::uint64_t seq = 0; seq < 200; ++seq) seen.insert(generate_sat(UserId{5}, 3, seq, a).signature);
  CHECK(seen.size() == 200);
}
