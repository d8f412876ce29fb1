#pragma once

// Shared domain types and the protocol timer table.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsn {

using namespace std::chrono_literals;

/// All protocol timers are integral microseconds.
using Duration = std::chrono::microseconds;

/// Simulated time since the start of a run.
using SimTime = std::chrono::microseconds;

/// Node identifiers fit in one byte; 2-byte on-air addresses carry them in the low byte.
using NodeId = std::uint8_t;

enum class ErrorCode {
  RemainingOverflow,
  PayloadTooLarge,
  ListOverflow,
  BadMagic,
  BadChecksum,
  Truncated,
  BadPreambleType,
  DuplicateId,
  UnknownNode,
  UnknownConfiguration,
  IsolatedNode,
  HeaderOverflow,
  RoundLimitExceeded,
  WindowTooSmall,
  ConfigError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RemainingOverflow: return "RemainingOverflow";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::ListOverflow: return "ListOverflow";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadChecksum: return "BadChecksum";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::BadPreambleType: return "BadPreambleType";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownConfiguration: return "UnknownConfiguration";
    case ErrorCode::IsolatedNode: return "IsolatedNode";
    case ErrorCode::HeaderOverflow: return "HeaderOverflow";
    case ErrorCode::RoundLimitExceeded: return "RoundLimitExceeded";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline bool is_finite(const Position& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Virtual distance to the sink. The sink itself always reports 0.
struct Metric {
  double value = 0.0;
};

/// Radio and protocol timers. Defaults are the deployed values.
struct ProtocolConstants {
  Duration D_mf = 512us;     // micro-frame on air
  Duration T_mf = 930us;     // micro-frame period
  Duration D_cca = 1442us;   // channel sample
  Duration T_cca = 140ms;    // sampling period
  Duration D_ACK = 480us;
  Duration D_DATA = 4ms;
  Duration D_DRp = 144ms;    // data request preamble
  Duration T_DR = 200ms;     // data request period
  Duration T_BRp = 300ms;    // broadcast request retry period
  Duration D_BRp = 144ms;    // broadcast request preamble
  Duration W_BR = 10ms;      // broadcast relay contention window
  Duration B_SRC = 1000ms;   // source wait before routing
  Duration D_RRp = 144ms;    // routing request preamble
  Duration W_RR = 30ms;      // ACK contention window
  Duration B_RR = 500us;     // relay watchdog
  Duration D_RxTx = 192us;   // Rx to Tx turnaround
  std::int64_t bitrate_bps = 250'000;
  int mf_count = 155;        // micro-frames per preamble
};

inline double to_ms(Duration d) { return static_cast<double>(d.count()) / 1000.0; }
inline double to_seconds(Duration d) { return static_cast<double>(d.count()) / 1e6; }

/// Idle radio-on fraction of preamble sampling.
inline double duty_cycle(const ProtocolConstants& c) {
  return static_cast<double>(c.D_cca.count()) / static_cast<double>(c.T_cca.count());
}

/// Relative slack accepted on the "one in a hundred" sampling ratio. The
/// deployed T_cca is 140 ms against 100 x 1442 us, so an exact equality
/// would reject the defaults.
inline constexpr double kSamplingRatioTolerance = 0.05;

struct ConstraintViolation {
  std::string constraint;
  std::string detail;
};

inline std::vector<ConstraintViolation> validate_constants(const ProtocolConstants& c) {
  std::vector<ConstraintViolation> out;
  auto fail = [&](std::string name, std::string detail) {
    out.push_back({std::move(name), std::move(detail)});
  };
  auto ms = [](Duration d) { return std::to_string(to_ms(d)) + " ms"; };

  const Duration durations[] = {c.D_mf, c.T_mf, c.D_cca, c.T_cca, c.D_ACK, c.D_DATA,
                                c.D_DRp, c.T_DR, c.T_BRp, c.D_BRp, c.W_BR, c.B_SRC,
                                c.D_RRp, c.W_RR, c.B_RR, c.D_RxTx};
  for (Duration d : durations) {
    if (d <= Duration::zero()) {
      fail("durations > 0", "found " + ms(d));
      break;
    }
  }
  if (c.bitrate_bps <= 0) fail("bitrate > 0", std::to_string(c.bitrate_bps));
  if (c.mf_count <= 0) fail("mf_count > 0", std::to_string(c.mf_count));

  if (c.D_cca < c.D_mf + c.T_mf)
    fail("D_cca >= D_mf + T_mf", ms(c.D_cca) + " < " + ms(c.D_mf + c.T_mf));

  const double ratio = static_cast<double>(c.T_cca.count()) /
                       static_cast<double>(std::max<std::int64_t>(c.D_cca.count(), 1));
  if (std::abs(ratio - 100.0) > 100.0 * kSamplingRatioTolerance)
    fail("T_cca = 100xD_cca", "T_cca/D_cca = " + std::to_string(ratio));

  if (c.T_DR <= c.D_DATA + c.D_DRp)
    fail("T_DR > D_DATA+D_DRp", ms(c.T_DR) + " <= " + ms(c.D_DATA + c.D_DRp));
  if (c.T_BRp <= 2 * c.D_BRp + c.W_BR)
    fail("T_BRp > 2*D_BRp+W_BR", ms(c.T_BRp) + " <= " + ms(2 * c.D_BRp + c.W_BR));
  if (c.B_SRC <= 6 * (c.D_BRp + c.W_BR))
    fail("B_SRC > 6*(D_BRp+W_BR)", ms(c.B_SRC) + " <= " + ms(6 * (c.D_BRp + c.W_BR)));
  if (c.W_RR <= c.D_ACK) fail("W_RR > D_ACK", ms(c.W_RR));
  if (c.W_BR <= c.D_RxTx) fail("W_BR > D_RxTx", ms(c.W_BR));
  return out;
}

}  // namespace wsn
