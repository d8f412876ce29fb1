#pragma once

#include <random>

#include "wsn/frame.hpp"

namespace wsn::test {

/// Uniform over kinds; DATA lists sized to fit the 128-byte frame.
inline Frame random_frame(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2), byte(0, 255), addr(0, 0xFFFF);
  const auto src = static_cast<std::uint16_t>(addr(rng));
  switch (kind(rng)) {
    case 0:
      return Frame::micro(static_cast<PreambleKind>(std::uniform_int_distribution<int>(0, 2)(rng)),
                          std::uniform_int_distribution<unsigned>(0, kMaxRemaining)(rng), src,
                          static_cast<std::uint8_t>(byte(rng)));
    case 1:
      return Frame::ack(src, static_cast<std::uint8_t>(byte(rng)));
    default: {
      // payload budget: 128 - 9 frame bytes - 2 length bytes
      const std::size_t room = kMaxFrameBytes - kHeaderBytes - kFcsBytes - 2;
      const std::size_t nt = std::uniform_int_distribution<std::size_t>(0, room)(rng);
      const std::size_t nn = std::uniform_int_distribution<std::size_t>(0, room - nt)(rng);
      DataPayload p;
      for (std::size_t i = 0; i < nt; ++i) p.traversed.push_back(static_cast<NodeId>(byte(rng)));
      for (std::size_t i = 0; i < nn; ++i) p.neighbors.push_back(static_cast<NodeId>(byte(rng)));
      return Frame::data(src, encode_data_payload(p), static_cast<std::uint8_t>(byte(rng)));
    }
  }
}

}  // namespace wsn::test
