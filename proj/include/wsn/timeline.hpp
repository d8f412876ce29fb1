#pragma once

// Per-node radio-state timelines.
//
// Activity is painted onto a node's timeline as it is scheduled; later paint
// wins where segments overlap. `finish` fills every unpainted gap with the
// idle pattern and returns segments that partition [0, end) exactly.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "wsn/core.hpp"
#include "wsn/radio.hpp"

namespace wsn {

struct RadioSegment {
  RadioState state = RadioState::Sleep;
  SimTime start{};
  SimTime end{};

  Duration length() const { return end - start; }
  friend bool operator==(const RadioSegment&, const RadioSegment&) = default;
};

/// How a node spends time with nothing scheduled.
enum class IdleModel {
  /// Sleep, waking every T_cca for a D_cca channel sample in Rx.
  SampleBursts,
  /// One Poll state whose draw is the average of the sampling cycle.
  PollAverage,
};

inline const char* to_string(IdleModel m) { return m == IdleModel::SampleBursts ? "bursts" : "poll"; }

class Timeline {
 public:
  Timeline() = default;
  /// `phase` is the offset of the node's first channel sample within T_cca.
  Timeline(Duration phase, Duration period, Duration sample) : phase_(phase), period_(period), sample_(sample) {}

  void paint(RadioState state, SimTime start, SimTime end) {
    if (end <= start) return;
    paint_.push_back({state, start, end});
  }

  /// First channel sample starting at or after `t`.
  SimTime next_sample(SimTime t) const {
    if (period_ <= Duration::zero()) return t;
    if (t <= phase_) return phase_;
    const std::int64_t k = (t - phase_ + period_ - Duration(1)) / period_;
    return phase_ + k * period_;
  }

  Duration phase() const { return phase_; }

  std::vector<RadioSegment> finish(SimTime end, IdleModel idle) const {
    // Elementary intervals between every paint boundary.
    std::vector<SimTime> cuts{SimTime::zero(), end};
    for (const RadioSegment& s : paint_) {
      if (s.start < end) cuts.push_back(std::max(s.start, SimTime::zero()));
      if (s.end < end) cuts.push_back(std::max(s.end, SimTime::zero()));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<RadioSegment> out;
    auto emit = [&out](RadioState st, SimTime a, SimTime b) {
      if (b <= a) return;
      if (!out.empty() && out.back().state == st && out.back().end == a) out.back().end = b;
      else out.push_back({st, a, b});
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const SimTime a = cuts[i];
      const SimTime b = cuts[i + 1];
      const RadioSegment* top = nullptr;
      for (const RadioSegment& s : paint_)
        if (s.start <= a && s.end >= b) top = &s;
      if (top) {
        emit(top->state, a, b);
      } else if (idle == IdleModel::PollAverage || period_ <= Duration::zero()) {
        emit(idle == IdleModel::PollAverage ? RadioState::Poll : RadioState::Sleep, a, b);
      } else {
        SimTime t = a;
        // A sample already under way at the gap start continues into it.
        SimTime s = next_sample(a - sample_ + Duration(1));
        while (t < b) {
          if (s >= b) {
            emit(RadioState::Sleep, t, b);
            break;
          }
          if (s > t) emit(RadioState::Sleep, t, s);
          const SimTime e = std::min(s + sample_, b);
          emit(RadioState::Rx, std::max(s, t), e);
          t = e;
          s += period_;
        }
      }
    }
    return out;
  }

 private:
  Duration phase_{};
  Duration period_{};
  Duration sample_{};
  std::vector<RadioSegment> paint_;
};

/// Draw of each state in mW; Preamble gets the measured preamble energy
/// spread over the preamble duration.
struct StatePowers {
  RadioPowerTable table;
  double preamble_mW = 0.0;

  double operator()(RadioState s) const {
    switch (s) {
      case RadioState::Sleep: return table.sleep_mW;
      case RadioState::Poll: return table.poll_mW;
      case RadioState::Listen: return table.listen_mW;
      case RadioState::Tx: return table.tx_mW;
      case RadioState::Rx: return table.rx_mW;
      case RadioState::Preamble: return preamble_mW;
    }
    return 0.0;
  }
};

inline StatePowers state_powers(const RadioPowerTable& table, double preamble_mJ, Duration preamble) {
  return {table, preamble > Duration::zero() ? preamble_mJ / (to_ms(preamble) / 1000.0) : 0.0};
}

/// Energy in mJ of the part of `segments` inside [from, to).
inline double energy_mJ(const std::vector<RadioSegment>& segments, const StatePowers& p, SimTime from,
                        SimTime to) {
  double e = 0.0;
  for (const RadioSegment& s : segments) {
    const SimTime a = std::max(s.start, from);
    const SimTime b = std::min(s.end, to);
    if (b > a) e += p(s.state) * to_seconds(b - a);
  }
  return e;
}

inline double energy_mJ(const std::vector<RadioSegment>& segments, const StatePowers& p) {
  if (segments.empty()) return 0.0;
  return energy_mJ(segments, p, segments.front().start, segments.back().end);
}

/// Total time per state.
inline std::map<RadioState, Duration> state_totals(const std::vector<RadioSegment>& segments) {
  std::map<RadioState, Duration> out;
  for (const RadioSegment& s : segments) out[s.state] += s.length();
  return out;
}

}  // namespace wsn
