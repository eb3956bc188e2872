#pragma once

#include <cbt/errors.hpp>
#include <cbt/signature.hpp>
#include <cbt/types.hpp>

#include <map>
#include <string>
#include <unordered_map>

namespace cbt {

// One spectrum access request: the issuer's generation timestamp, its
// signature, and the verification timestamps accumulated while the
// transaction is gossiped. Verifications only ever gain entries.
struct SpectrumAccessTransaction {
  SatId id;
  Bytes signature;
  std::map<UserId, SlotTime> verifications;

  UserId origin() const { return id.origin; }
  SlotTime generated_at() const { return id.generated_at; }
};

// Canonical byte layout that is signed: origin, generation slot and sequence
// number, each as a 64-bit big-endian integer (24 bytes total).
inline Bytes canonical_encoding(const SatId& id) {
  Bytes out;
  out.reserve(24);
  detail::put_u64_be(out, id.origin.value);
  detail::put_u64_be(out, static_cast<std::uint64_t>(id.generated_at));
  detail::put_u64_be(out, id.sequence);
  return out;
}

inline SpectrumAccessTransaction generate_sat(UserId user, SlotTime now, std::uint64_t sequence,
                                              const SignatureScheme& scheme) {
  SpectrumAccessTransaction sat;
  sat.id = SatId{user, now, sequence};
  const KeyPair keys = scheme.keypair(user);
  sat.signature = scheme.sign(keys.private_key, canonical_encoding(sat.id));
  return sat;
}

inline bool signature_valid(const SpectrumAccessTransaction& sat, const SignatureScheme& scheme) {
  const KeyPair keys = scheme.keypair(sat.origin());
  return scheme.verify(keys.public_key, canonical_encoding(sat.id), sat.signature);
}

// Checks the signature and records `verifier`'s timestamp in place. Returns
// false when the verifier had already stamped this transaction (re-receipt is
// a no-op). Throws ValidityError on a bad signature.
inline bool record_verification(SpectrumAccessTransaction& sat, UserId verifier, SlotTime now,
                                const SignatureScheme& scheme) {
  detail::require(verifier != sat.origin(), "the issuer cannot verify its own transaction");
  detail::require(now >= sat.generated_at(), "verification cannot precede generation");
  if (!signature_valid(sat, scheme)) {
    throw ValidityError("invalid signature on transaction " + to_string(sat.id));
  }
  return sat.verifications.try_emplace(verifier, now).second;
}

inline SpectrumAccessTransaction verify_sat(UserId verifier, SpectrumAccessTransaction sat, SlotTime now,
                                            const SignatureScheme& scheme) {
  record_verification(sat, verifier, now, scheme);
  return sat;
}

// Hands out per-user sequence numbers so that two requests from the same
// user in the same slot still get distinct ids.
class TransactionIssuer {
 public:
  explicit TransactionIssuer(const SignatureScheme& scheme) : scheme_(&scheme) {}

  SpectrumAccessTransaction generate(UserId user, SlotTime now) {
    return generate_sat(user, now, next_sequence_[user]++, *scheme_);
  }

 private:
  const SignatureScheme* scheme_;
  std::unordered_map<UserId, std::uint64_t> next_sequence_;
};

}  // namespace cbt
