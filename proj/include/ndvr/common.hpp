/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_COMMON_HPP
#define NDVR_COMMON_HPP

#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ndvr {

using Buffer = std::vector<uint8_t>;
using BufferView = std::span<const uint8_t>;

/// Simulation time, measured from the start of a run.
using SimTime = std::chrono::microseconds;
using std::chrono::microseconds;
using std::chrono::milliseconds;
using std::chrono::seconds;

using FaceId = uint64_t;
using NodeId = uint32_t;

constexpr FaceId INVALID_FACE = 0;

/// Raised when a runtime invariant is found broken; the CLI maps it to exit code 3.
class InvariantError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

inline std::string
toHex(BufferView bytes)
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0F]);
  }
  return out;
}

inline Buffer
toBuffer(std::string_view s)
{
  return Buffer(s.begin(), s.end());
}

} // namespace ndvr

#endif // NDVR_COMMON_HPP
