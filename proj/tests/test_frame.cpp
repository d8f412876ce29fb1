#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "wsn/frame.hpp"

using namespace wsn;
using wsn::test::random_frame;

namespace {

// Bit-serial reference: reflected 0x1021, init 0, one bit at a time.
std::uint16_t crc_bitwise(const std::vector<std::uint8_t>& bytes) {
  std::uint16_t crc = 0;
  for (std::uint8_t b : bytes)
    for (int i = 0; i < 8; ++i) {
      const bool bit = ((b >> i) & 1) ^ (crc & 1);
      crc >>= 1;
      if (bit) crc ^= 0x8408;
    }
  return crc;
}

std::map<std::string, std::string> fields(const std::string& desc) {
  std::map<std::string, std::string> out;
  std::istringstream in(desc);
  std::string tok;
  in >> out["type"];
  while (in >> tok) {
    auto eq = tok.find('=');
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

std::vector<NodeId> ids(const std::string& s) {
  std::vector<NodeId> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(static_cast<NodeId>(std::stoi(item)));
  return out;
}

Frame frame_of(const std::string& desc) {
  auto f = fields(desc);
  const auto src = static_cast<std::uint16_t>(std::stoi(f["src"]));
  if (f["type"] == "micro") {
    const PreambleKind k = f["kind"] == "DRp" ? PreambleKind::DRp : f["kind"] == "BRp" ? PreambleKind::BRp
                                                                                         : PreambleKind::RRp;
    return Frame::micro(k, std::stoul(f["remaining"]), src, static_cast<std::uint8_t>(std::stoi(f["payload"])));
  }
  const auto seq = static_cast<std::uint8_t>(std::stoi(f["seq"]));
  if (f["type"] == "ack") return Frame::ack(src, seq);
  return Frame::data(src, encode_data_payload({ids(f["traversed"]), ids(f["neighbors"])}), seq);
}

}  // namespace

TEST(Crc, CatalogCheckValue) {
  const std::string s = "123456789";
  const std::vector<std::uint8_t> v(s.begin(), s.end());
  EXPECT_EQ(crc16(v), 0x2189);
  EXPECT_EQ(crc_bitwise(v), 0x2189);
}

TEST(Crc, TableMatchesBitwise) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::uint8_t> v(rng() % 140);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng());
    ASSERT_EQ(crc16(v), crc_bitwise(v));
  }
}

TEST(Codec, GoldenVectors) {
  std::ifstream in(WSN_TEST_DATA "/golden_frames.txt");
  ASSERT_TRUE(in.good());
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto bar = line.find('|');
    const Frame f = frame_of(line.substr(0, bar));
    const auto expect = from_hex(line.substr(bar + 1));
    EXPECT_EQ(encode_frame(f), expect) << line;
    EXPECT_EQ(decode_frame(expect), f) << line;
    ++checked;
  }
  EXPECT_EQ(checked, 7);
}

TEST(Codec, LayoutOfMicroFrame) {
  const auto b = encode_frame(Frame::micro(PreambleKind::DRp, 5, 0x0003, 0x07));
  ASSERT_EQ(b.size(), kMicroFrameBytes);
  const std::vector<std::uint8_t> head{0x62, 0x22, 0x05, 0xFF, 0xFF, 0x00, 0x03, 0x07};
  EXPECT_TRUE(std::equal(head.begin(), head.end(), b.begin()));
  const std::vector<std::uint8_t> body(b.begin(), b.end() - 2);
  EXPECT_EQ((b[8] << 8) | b[9], crc_bitwise(body));
}

TEST(Codec, AckIsNineBytes) {
  const auto b = encode_frame(Frame::ack(1));
  ASSERT_EQ(b.size(), 9u);
  EXPECT_EQ(to_hex(std::span(b).first(7)), "42 22 00 ff ff 00 01");
}

TEST(Codec, EmptyDataRoundTrips) {
  const Frame f = Frame::data(9, encode_data_payload({}));
  EXPECT_EQ(encode_frame(f).size(), 11u);
  EXPECT_EQ(decode_frame(encode_frame(f)), f);
  EXPECT_EQ(decode_data_payload(decode_frame(encode_frame(f)).payload), DataPayload{});
}

TEST(Codec, RandomRoundTrip) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 20000; ++i) {
    const Frame f = random_frame(rng);
    const auto bytes = encode_frame(f);
    ASSERT_LE(bytes.size(), kMaxFrameBytes);
    ASSERT_EQ(decode_frame(bytes), f);
    if (f.kind == FrameKind::Data) {
      ASSERT_EQ(bytes.size(), 9 + f.payload.size());
      ASSERT_EQ(encode_data_payload(decode_data_payload(f.payload)), f.payload);
    }
  }
}

TEST(Codec, SingleBitFlipsAreDetected) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto good = encode_frame(random_frame(rng));
    for (std::size_t byte = 0; byte < good.size(); ++byte)
      for (int bit = 0; bit < 8; ++bit) {
        auto bad = good;
        bad[byte] ^= static_cast<std::uint8_t>(1u << bit);
        EXPECT_THROW(decode_frame(bad), Error);
      }
  }
}

TEST(Codec, DecodeErrors) {
  auto code = [](const std::vector<std::uint8_t>& b) {
    try {
      decode_frame(b);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ConfigError;
  };
  auto ack = encode_frame(Frame::ack(1));
  EXPECT_EQ(code({0x62}), ErrorCode::Truncated);
  EXPECT_EQ(code({0x12, 0x34, 0, 0, 0, 0, 0, 0, 0}), ErrorCode::BadMagic);
  ack.back() ^= 1;
  EXPECT_EQ(code(ack), ErrorCode::BadChecksum);
  ack.pop_back();
  EXPECT_EQ(code(ack), ErrorCode::Truncated);

  // preamble type 11 with a valid checksum
  std::vector<std::uint8_t> mf{0x62, 0x22, 0xC1, 0xFF, 0xFF, 0, 1, 0};
  const auto c = crc16(mf);
  mf.push_back(static_cast<std::uint8_t>(c >> 8));
  mf.push_back(static_cast<std::uint8_t>(c));
  EXPECT_EQ(code(mf), ErrorCode::BadPreambleType);
}

TEST(Codec, RemainingLimit) {
  EXPECT_NO_THROW(encode_frame(Frame::micro(PreambleKind::BRp, 63, 1, 0)));
  try {
    encode_frame(Frame::micro(PreambleKind::BRp, 64, 1, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RemainingOverflow);
  }
}

TEST(Codec, AddressListLimit) {
  DataPayload p;
  p.traversed.assign(118, 1);
  p.neighbors.push_back(2);
  try {
    encode_data_payload(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ListOverflow);
  }
  p.neighbors.clear();
  EXPECT_NO_THROW(encode_data_payload(p));

  // A hand-built payload claiming 119 entries is rejected on decode too.
  std::vector<std::uint8_t> raw{100};
  raw.insert(raw.end(), 100, 3);
  raw.push_back(19);
  raw.insert(raw.end(), 19, 4);
  EXPECT_THROW(decode_data_payload(raw), Error);
}

TEST(Codec, FrameByteLimit) {
  // 117 listed ids fill the 128-byte frame exactly; 118 pass the list check but not the frame.
  DataPayload p;
  p.traversed.assign(117, 1);
  EXPECT_EQ(encode_frame(Frame::data(1, encode_data_payload(p))).size(), 128u);
  p.traversed.push_back(2);
  try {
    encode_frame(Frame::data(1, encode_data_payload(p)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PayloadTooLarge);
  }
  std::vector<std::uint8_t> big(129, 0);
  big[0] = 0x22;
  big[1] = 0x22;
  EXPECT_THROW(decode_frame(big), Error);
}

TEST(Codec, HexParsing) {
  EXPECT_EQ(from_hex("0x62 22\n# note\nFF"), (std::vector<std::uint8_t>{0x62, 0x22, 0xFF}));
  EXPECT_EQ(from_hex("6222ff"), (std::vector<std::uint8_t>{0x62, 0x22, 0xFF}));
  EXPECT_THROW(from_hex("62 2"), Error);
  EXPECT_THROW(from_hex("zz"), Error);
}
