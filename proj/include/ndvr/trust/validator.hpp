/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_TRUST_VALIDATOR_HPP
#define NDVR_TRUST_VALIDATOR_HPP

#include "ndvr/routing/ehlo.hpp"
#include "ndvr/trust/trust-store.hpp"

namespace ndvr::trust {

enum class Verdict {
  Accepted,
  NeedKey,
  NameMismatch,
  BadSignature,
  Expired,
  UntrustedKey,
  NoRule,
  Malformed,
};

/// Codes as written to trace files.
inline const char*
toString(Verdict v)
{
  switch (v) {
  case Verdict::Accepted: return "ACCEPTED";
  case Verdict::NeedKey: return "NEED_KEY";
  case Verdict::NameMismatch: return "NAME_MISMATCH";
  case Verdict::BadSignature: return "BAD_SIGNATURE";
  case Verdict::Expired: return "EXPIRED";
  case Verdict::UntrustedKey: return "UNTRUSTED_KEY";
  case Verdict::NoRule: return "NO_RULE";
  case Verdict::Malformed: return "MALFORMED";
  }
  return "UNKNOWN";
}

enum class RuleId {
  None,
  DvInfo,
  RouterKey,
  Anchor,
};

inline const char*
toString(RuleId r)
{
  switch (r) {
  case RuleId::None: return "NONE";
  case RuleId::DvInfo: return "DVINFO_RULE";
  case RuleId::RouterKey: return "ROUTER_KEY_RULE";
  case RuleId::Anchor: return "ANCHOR_RULE";
  }
  return "UNKNOWN";
}

struct ValidationResult
{
  Verdict verdict;
  RuleId rule = RuleId::None;
  Name keyName; ///< key to fetch when verdict is NeedKey

  bool
  accepted() const
  {
    return verdict == Verdict::Accepted;
  }

  bool
  rejected() const
  {
    return verdict != Verdict::Accepted && verdict != Verdict::NeedKey;
  }
};

namespace detail {

inline ValidationResult
checkSignature(const Data& data, const KeyRecord& key, RuleId rule, SimTime now)
{
  if (key.expiry && now > *key.expiry)
    return {Verdict::Expired, rule, key.keyName};
  if (!verify(data.signedPortion(), data.signature, key.publicKey))
    return {Verdict::BadSignature, rule, key.keyName};
  return {Verdict::Accepted, rule, key.keyName};
}

inline bool
isAnchorKeyName(const Name& name)
{
  return name.size() >= 2 && name.at(-1) == "KEY" && !routerOfKeyName(name);
}

} // namespace detail

/**
 * @brief Evaluates the three trust rules against @p data.
 *
 * DVINFO Data must be signed by the key of the router named inside it; a
 * router key must be signed by its network's anchor; an anchor is trusted
 * only if it equals a pre-installed one. Rules are tried in that order.
 */
inline ValidationResult
validate(const Data& data, const TrustStore& store, SimTime now)
{
  if (routing::dvinfoPrefix().isPrefixOf(data.name)) {
    auto parsed = routing::tryParseDvInfoName(data.name);
    if (!parsed)
      return {Verdict::Malformed, RuleId::DvInfo, {}};
    Name expected = parsed->router.keyName();
    if (data.keyLocator != expected)
      return {Verdict::NameMismatch, RuleId::DvInfo, data.keyLocator};
    const KeyRecord* key = store.findCached(expected);
    if (key == nullptr)
      return {Verdict::NeedKey, RuleId::DvInfo, expected};
    return detail::checkSignature(data, *key, RuleId::DvInfo, now);
  }

  if (auto router = routerOfKeyName(data.name)) {
    Name expected = anchorKeyName(router->network);
    if (data.keyLocator != expected)
      return {Verdict::NameMismatch, RuleId::RouterKey, data.keyLocator};
    const KeyRecord* anchor = store.findAnchor(expected);
    if (anchor == nullptr)
      return {Verdict::UntrustedKey, RuleId::RouterKey, expected};
    KeyRecord self;
    try {
      self = KeyRecord::fromData(data);
    }
    catch (const ndn::DecodeError&) {
      return {Verdict::Malformed, RuleId::RouterKey, {}};
    }
    if (self.expiry && now > *self.expiry)
      return {Verdict::Expired, RuleId::RouterKey, data.name};
    return detail::checkSignature(data, *anchor, RuleId::RouterKey, now);
  }

  if (detail::isAnchorKeyName(data.name)) {
    const KeyRecord* anchor = store.findAnchor(data.name);
    if (anchor == nullptr)
      return {Verdict::UntrustedKey, RuleId::Anchor, data.name};
    KeyRecord offered;
    try {
      offered = KeyRecord::fromData(data);
    }
    catch (const ndn::DecodeError&) {
      return {Verdict::Malformed, RuleId::Anchor, {}};
    }
    if (offered.publicKey != anchor->publicKey)
      return {Verdict::UntrustedKey, RuleId::Anchor, data.name};
    return {Verdict::Accepted, RuleId::Anchor, data.name};
  }

  return {Verdict::NoRule, RuleId::None, {}};
}

struct Resumed
{
  Data data;
  ValidationResult result;
};

struct KeyArrival
{
  ValidationResult keyResult;
  std::vector<Resumed> resumed;
};

/**
 * @brief Handles a fetched key Data.
 *
 * An accepted router key is cached and every validation suspended on it is
 * re-run. If the key is rejected the suspended Data fail with UNTRUSTED_KEY.
 */
inline KeyArrival
onKeyData(const Data& keyData, TrustStore& store, SimTime now)
{
  KeyArrival out;
  out.keyResult = validate(keyData, store, now);
  if (out.keyResult.accepted() && out.keyResult.rule == RuleId::RouterKey)
    store.cacheTrustedKey(KeyRecord::fromData(keyData));

  for (auto& p : store.takePending(keyData.name)) {
    ValidationResult r = out.keyResult.accepted() && out.keyResult.rule == RuleId::RouterKey
                         ? validate(p.data, store, now)
                         : ValidationResult{Verdict::UntrustedKey, RuleId::DvInfo, keyData.name};
    out.resumed.push_back({std::move(p.data), r});
  }
  return out;
}

} // namespace ndvr::trust

#endif // NDVR_TRUST_VALIDATOR_HPP
