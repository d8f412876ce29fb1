#pragma once

// Closed-form energy, lifetime and speed bounds.

#include "wsn/core.hpp"
#include "wsn/radio.hpp"

namespace wsn {

/// Energy of one hop exchange, in mJ.
struct PhaseEnergy {
  double preamble_mJ = 0.0;  // measured, an input
  double tx_mJ = 0.0;        // sender: preamble, ACK window, DATA
  double comp_mJ = 0.0;      // every neighbor: sample, sleep, ACK
  double rx_mJ = 0.0;        // the elected neighbor also receives DATA

  double total_mJ() const { return tx_mJ + comp_mJ + rx_mJ; }
};

/// Measured preamble energy for each transmit power, mJ.
inline double measured_preamble_mJ(TxPower p) { return p == TxPower::Dbm0 ? 1.243 : 0.467; }

/// Sender listens through the ACK window and receives N ACKs; each neighbor
/// samples the preamble and sends one ACK; the elected one receives DATA.
inline PhaseEnergy phase_energy(const RadioPowerTable& pw, const ProtocolConstants& c, int contenders,
                                double preamble_mJ) {
  if (contenders < 1) throw Error(ErrorCode::ConfigError, "need at least one neighbor");
  const Duration acks = contenders * c.D_ACK;
  if (c.W_RR < acks)
    throw Error(ErrorCode::WindowTooSmall, "W_RR shorter than " + std::to_string(contenders) + " ACKs");
  auto s = [](Duration d) { return to_seconds(d); };  // mW * s = mJ

  PhaseEnergy e;
  e.preamble_mJ = preamble_mJ;
  e.tx_mJ = preamble_mJ + s(c.W_RR - acks) * pw.listen_mW + s(acks) * pw.rx_mW + s(c.D_DATA) * pw.tx_mW;
  const double wake = pw.rx_mW * s(c.D_cca) + pw.tx_mW * s(c.D_ACK);
  e.comp_mJ = s(c.D_RRp + c.W_RR + c.D_DATA - c.D_cca - c.D_ACK) * pw.sleep_mW + wake;
  e.rx_mJ = s(c.D_RRp + c.W_RR - c.D_cca - c.D_ACK) * pw.sleep_mW + wake + pw.rx_mW * s(c.D_DATA);
  return e;
}

inline PhaseEnergy phase_energy(TxPower p, const ProtocolConstants& c, int contenders = 5) {
  return phase_energy(power_table(p), c, contenders, measured_preamble_mJ(p));
}

inline double lifetime_hours(double battery_joules, double avg_power_mW) {
  if (battery_joules <= 0.0) return 0.0;
  if (avg_power_mW <= 0.0) throw Error(ErrorCode::ConfigError, "average power must be positive");
  return battery_joules / (avg_power_mW / 1000.0) / 3600.0;
}

/// Average draw when idle under duty-cycled sampling, as bursts of Rx over sleep.
inline double sampling_average_mW(const RadioPowerTable& pw, const ProtocolConstants& c) {
  const double d = duty_cycle(c);
  return d * pw.rx_mW + (1.0 - d) * pw.sleep_mW;
}

inline double mps_to_kmh(double v) { return v * 3.6; }
inline double kmh_to_mps(double v) { return v / 3.6; }

/// Worst plane speed for a DRp/DATA exchange with the base station over a
/// link chord of `chord_m` meters, km/h.
inline double v_max_bs(const ProtocolConstants& c, double chord_m = 50.0) {
  return mps_to_kmh(chord_m / to_seconds(c.T_DR + c.D_DRp + c.D_DATA));
}

struct RealTimeParams {
  double chord_m = 50.0;
  double traverse_m = 150.0;  // 190 for a diagonal crossing
  int worst_hops = 10;
  int flood_hops = 8;

  bool valid() const { return chord_m > 0 && traverse_m > 0 && worst_hops >= 0 && flood_hops >= 0; }
};

/// Time for flood, source wait and worst-case routing of one request.
inline Duration network_round_trip(const ProtocolConstants& c, const RealTimeParams& p) {
  return p.flood_hops * (c.W_BR + c.D_BRp) + c.B_SRC + p.worst_hops * (c.D_RRp + c.W_RR + c.D_DATA);
}

/// Worst plane speed that keeps it connected to the network for the whole
/// request, km/h.
inline double v_max_network(const ProtocolConstants& c, const RealTimeParams& p = {}) {
  if (!p.valid()) throw Error(ErrorCode::ConfigError, "invalid real-time parameters");
  return mps_to_kmh(p.traverse_m / to_seconds(network_round_trip(c, p)));
}

}  // namespace wsn
