/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_TRUST_CRYPTO_HPP
#define NDVR_TRUST_CRYPTO_HPP

#include "ndvr/common.hpp"

#include <sodium.h>

#include <array>
#include <string_view>

namespace ndvr::trust {

class CryptoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline void
ensureSodium()
{
  static const bool ok = sodium_init() >= 0;
  if (!ok)
    throw CryptoError("libsodium initialisation failed");
}

constexpr size_t PUBLIC_KEY_SIZE = crypto_sign_PUBLICKEYBYTES;
constexpr size_t SECRET_KEY_SIZE = crypto_sign_SECRETKEYBYTES;
constexpr size_t SIGNATURE_SIZE = crypto_sign_BYTES;

/// Ed25519 key pair.
struct KeyPair
{
  Buffer publicKey;
  std::array<uint8_t, SECRET_KEY_SIZE> secretKey{};
};

/// Key pair from SHA-256(seed || label), so every run with the same seed gets the same keys.
inline KeyPair
deriveKeyPair(uint64_t seed, std::string_view label)
{
  ensureSodium();
  Buffer material(8);
  for (int i = 0; i < 8; ++i)
    material[i] = static_cast<uint8_t>(seed >> (56 - 8 * i));
  material.insert(material.end(), label.begin(), label.end());

  std::array<uint8_t, crypto_hash_sha256_BYTES> kseed{};
  crypto_hash_sha256(kseed.data(), material.data(), material.size());

  KeyPair kp;
  kp.publicKey.resize(PUBLIC_KEY_SIZE);
  crypto_sign_seed_keypair(kp.publicKey.data(), kp.secretKey.data(), kseed.data());
  sodium_memzero(kseed.data(), kseed.size());
  return kp;
}

inline Buffer
sign(BufferView message, const KeyPair& key)
{
  ensureSodium();
  Buffer sig(SIGNATURE_SIZE);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), key.secretKey.data());
  return sig;
}

inline bool
verify(BufferView message, BufferView signature, BufferView publicKey)
{
  ensureSodium();
  if (signature.size() != SIGNATURE_SIZE || publicKey.size() != PUBLIC_KEY_SIZE)
    return false;
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                     publicKey.data()) == 0;
}

} // namespace ndvr::trust

#endif // NDVR_TRUST_CRYPTO_HPP
