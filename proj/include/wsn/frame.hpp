#pragma once

// MAC-level packet formats: micro-frame, ACK and DATA, plus the DATA payload.
//
// Layout (one byte per cell, multi-byte fields big-endian):
//
//   micro-frame  62 22 | seq | ff ff | src(2) | payload(1) | fcs(2)   10 bytes
//   ACK          42 22 | seq | ff ff | src(2) |              fcs(2)    9 bytes
//   DATA         22 22 | seq | ff ff | src(2) | payload(n) | fcs(2)   9+n bytes
//
// A micro-frame seq byte carries the preamble type in its two top bits and
// the number of micro-frames still to come in the low six bits.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wsn/core.hpp"

namespace wsn {

enum class FrameKind : std::uint8_t { MicroFrame, Ack, Data };

enum class PreambleKind : std::uint8_t { DRp = 0b00, BRp = 0b01, RRp = 0b10 };

inline const char* to_string(FrameKind k) {
  switch (k) {
    case FrameKind::MicroFrame: return "micro";
    case FrameKind::Ack: return "ack";
    case FrameKind::Data: return "data";
  }
  return "?";
}

inline const char* to_string(PreambleKind k) {
  switch (k) {
    case PreambleKind::DRp: return "DRp";
    case PreambleKind::BRp: return "BRp";
    case PreambleKind::RRp: return "RRp";
  }
  return "?";
}

inline constexpr std::uint16_t kBroadcastAddress = 0xFFFF;
inline constexpr std::size_t kMaxFrameBytes = 128;   // radio transmit queue
inline constexpr std::size_t kMaxListedAddresses = 118;  // traversed + neighbors must stay below 119
inline constexpr unsigned kMaxRemaining = 63;
inline constexpr std::size_t kHeaderBytes = 7;  // magic, seq, dest, src
inline constexpr std::size_t kFcsBytes = 2;
inline constexpr std::size_t kMicroFrameBytes = kHeaderBytes + 1 + kFcsBytes;
inline constexpr std::size_t kAckBytes = kHeaderBytes + kFcsBytes;

inline constexpr std::uint16_t magic_of(FrameKind k) {
  switch (k) {
    case FrameKind::MicroFrame: return 0x6222;
    case FrameKind::Ack: return 0x4222;
    case FrameKind::Data: return 0x2222;
  }
  return 0;
}

/// CRC-16/CCITT as used for the 802.15.4 FCS (reflected 0x1021, init 0).
inline std::uint16_t crc16(std::span<const std::uint8_t> bytes) {
  static const auto table = [] {
    std::array<std::uint16_t, 256> t{};
    for (unsigned i = 0; i < 256; ++i) {
      std::uint16_t crc = static_cast<std::uint16_t>(i);
      for (int bit = 0; bit < 8; ++bit)
        crc = (crc & 1u) ? static_cast<std::uint16_t>((crc >> 1) ^ 0x8408u)
                         : static_cast<std::uint16_t>(crc >> 1);
      t[i] = crc;
    }
    return t;
  }();
  std::uint16_t crc = 0;
  for (std::uint8_t b : bytes) crc = static_cast<std::uint16_t>((crc >> 8) ^ table[(crc ^ b) & 0xFFu]);
  return crc;
}

struct Frame {
  FrameKind kind = FrameKind::Ack;
  /// Raw seq byte for ACK and DATA (unused by the protocol). Zero for micro-frames.
  std::uint8_t seq = 0;
  PreambleKind preamble = PreambleKind::DRp;  // micro-frames only
  unsigned remaining = 0;                     // micro-frames only
  std::uint16_t src = 0;
  /// 1 byte for micro-frames, empty for ACK, the encoded DataPayload for DATA.
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Frame&, const Frame&) = default;

  static Frame micro(PreambleKind kind, unsigned remaining, std::uint16_t src, std::uint8_t payload) {
    Frame f;
    f.kind = FrameKind::MicroFrame;
    f.preamble = kind;
    f.remaining = remaining;
    f.src = src;
    f.payload = {payload};
    return f;
  }

  static Frame ack(std::uint16_t src, std::uint8_t seq = 0) {
    Frame f;
    f.kind = FrameKind::Ack;
    f.src = src;
    f.seq = seq;
    return f;
  }

  static Frame data(std::uint16_t src, std::vector<std::uint8_t> payload, std::uint8_t seq = 0) {
    Frame f;
    f.kind = FrameKind::Data;
    f.src = src;
    f.seq = seq;
    f.payload = std::move(payload);
    return f;
  }
};

/// DATA payload: the route header followed by the source's neighbor list.
struct DataPayload {
  std::vector<NodeId> traversed;
  std::vector<NodeId> neighbors;

  friend bool operator==(const DataPayload&, const DataPayload&) = default;
};

namespace detail {

inline void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

inline std::uint16_t get16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

inline void check_list_bound(std::size_t traversed, std::size_t neighbors) {
  if (traversed + neighbors > kMaxListedAddresses)
    throw Error(ErrorCode::ListOverflow, std::to_string(traversed) + " traversed + " +
                                             std::to_string(neighbors) + " neighbors >= 119");
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_data_payload(const DataPayload& p) {
  detail::check_list_bound(p.traversed.size(), p.neighbors.size());
  std::vector<std::uint8_t> out;
  out.reserve(2 + p.traversed.size() + p.neighbors.size());
  out.push_back(static_cast<std::uint8_t>(p.traversed.size()));
  out.insert(out.end(), p.traversed.begin(), p.traversed.end());
  out.push_back(static_cast<std::uint8_t>(p.neighbors.size()));
  out.insert(out.end(), p.neighbors.begin(), p.neighbors.end());
  return out;
}

inline DataPayload decode_data_payload(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(ErrorCode::Truncated, "missing traversed length");
  const std::size_t nt = bytes[0];
  if (bytes.size() < 1 + nt + 1) throw Error(ErrorCode::Truncated, "traversed list");
  const std::size_t nn = bytes[1 + nt];
  if (bytes.size() != 2 + nt + nn) throw Error(ErrorCode::Truncated, "neighbor list length mismatch");
  detail::check_list_bound(nt, nn);
  DataPayload p;
  p.traversed.assign(bytes.begin() + 1, bytes.begin() + 1 + static_cast<std::ptrdiff_t>(nt));
  p.neighbors.assign(bytes.begin() + 2 + static_cast<std::ptrdiff_t>(nt), bytes.end());
  return p;
}

inline std::vector<std::uint8_t> encode_frame(const Frame& f) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + f.payload.size() + kFcsBytes);
  detail::put16(out, magic_of(f.kind));

  switch (f.kind) {
    case FrameKind::MicroFrame:
      if (f.remaining > kMaxRemaining)
        throw Error(ErrorCode::RemainingOverflow, std::to_string(f.remaining) + " > 63");
      if (f.payload.size() != 1)
        throw Error(ErrorCode::PayloadTooLarge, "micro-frame payload must be 1 byte");
      out.push_back(static_cast<std::uint8_t>((static_cast<unsigned>(f.preamble) << 6) | f.remaining));
      break;
    case FrameKind::Ack:
      if (!f.payload.empty()) throw Error(ErrorCode::PayloadTooLarge, "ACK carries no payload");
      out.push_back(f.seq);
      break;
    case FrameKind::Data:
      if (kHeaderBytes + f.payload.size() + kFcsBytes > kMaxFrameBytes)
        throw Error(ErrorCode::PayloadTooLarge,
                    std::to_string(kHeaderBytes + f.payload.size() + kFcsBytes) + " > 128 bytes");
      out.push_back(f.seq);
      break;
  }

  detail::put16(out, kBroadcastAddress);
  detail::put16(out, f.src);
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  detail::put16(out, crc16(out));
  return out;
}

inline Frame decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2) throw Error(ErrorCode::Truncated, "no magic");
  const std::uint16_t magic = detail::get16(bytes, 0);

  Frame f;
  if (magic == magic_of(FrameKind::MicroFrame)) {
    f.kind = FrameKind::MicroFrame;
    if (bytes.size() != kMicroFrameBytes) throw Error(ErrorCode::Truncated, "micro-frame is 10 bytes");
  } else if (magic == magic_of(FrameKind::Ack)) {
    f.kind = FrameKind::Ack;
    if (bytes.size() != kAckBytes) throw Error(ErrorCode::Truncated, "ACK is 9 bytes");
  } else if (magic == magic_of(FrameKind::Data)) {
    f.kind = FrameKind::Data;
    if (bytes.size() < kHeaderBytes + kFcsBytes) throw Error(ErrorCode::Truncated, "DATA header");
    if (bytes.size() > kMaxFrameBytes) throw Error(ErrorCode::PayloadTooLarge, "DATA > 128 bytes");
  } else {
    throw Error(ErrorCode::BadMagic, "unknown magic");
  }

  const std::size_t body = bytes.size() - kFcsBytes;
  if (crc16(bytes.first(body)) != detail::get16(bytes, body))
    throw Error(ErrorCode::BadChecksum, "fcs mismatch");

  const std::uint8_t seq = bytes[2];
  f.src = detail::get16(bytes, 5);
  f.payload.assign(bytes.begin() + kHeaderBytes, bytes.begin() + static_cast<std::ptrdiff_t>(body));

  if (f.kind == FrameKind::MicroFrame) {
    const unsigned type = seq >> 6;
    if (type == 0b11) throw Error(ErrorCode::BadPreambleType, "preamble type 11");
    f.preamble = static_cast<PreambleKind>(type);
    f.remaining = seq & 0x3Fu;
  } else {
    f.seq = seq;
  }
  return f;
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (i) s.push_back(' ');
    s.push_back(digits[bytes[i] >> 4]);
    s.push_back(digits[bytes[i] & 0xF]);
  }
  return s;
}

/// Parses whitespace-separated or contiguous hex digits. Text after '#' on a line is ignored.
inline std::vector<std::uint8_t> from_hex(const std::string& text) {
  std::vector<std::uint8_t> out;
  int pending = -1;
  bool comment = false;
  for (char ch : text) {
    if (ch == '\n') {
      comment = false;
      continue;
    }
    if (comment) continue;
    if (ch == '#') {
      comment = true;
      continue;
    }
    if ((ch == 'x' || ch == 'X') && pending == 0) {
      pending = -1;  // 0x prefix
      continue;
    }
    int v;
    if (ch >= '0' && ch <= '9') v = ch - '0';
    else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
    else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == ',') continue;
    else throw Error(ErrorCode::ConfigError, std::string("bad hex character '") + ch + "'");
    if (pending < 0) {
      pending = v;
    } else {
      out.push_back(static_cast<std::uint8_t>((pending << 4) | v));
      pending = -1;
    }
  }
  if (pending >= 0) throw Error(ErrorCode::ConfigError, "odd number of hex digits");
  return out;
}

}  // namespace wsn
