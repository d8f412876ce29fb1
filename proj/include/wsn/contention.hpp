#pragma once

// 1-hop MAC contention: metric-proportional ACK backoffs, next-hop election,
// and the collision probability of the earliest reply.
//
// A collision is two transmissions whose start times are closer than the
// blocking width: the ACK duration for ACK contention, the Rx/Tx turnaround
// for broadcast relays (a competitor that fires during the turnaround cannot
// hear the first relay yet). With N independent uniform backoffs in [0, W],
// the gap between the earliest and the second earliest exceeds D with
// probability (1 - D/W)^N, which gives the closed form below.
//
// The broadcast relay formula is printed with the ACK window's subscript;
// it is applied here with the broadcast window.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "wsn/core.hpp"

namespace wsn {

inline constexpr int kHardwareBackoffLevels = 362;  // radio RNG range [0..361]

struct ContentionConfig {
  Duration window{};   // W
  Duration block{};    // D_block
  int contenders = 0;  // N
  std::optional<int> discrete_levels;
  /// Chance that the earliest message of a collision is still decoded. Off by default.
  double capture_probability = 0.0;

  bool valid() const {
    return window > block && block > Duration::zero() && contenders >= 0 &&
           (!discrete_levels || *discrete_levels >= 2) && capture_probability >= 0.0 &&
           capture_probability <= 1.0;
  }
};

inline ContentionConfig broadcast_contention(const ProtocolConstants& c, int n) {
  return {c.W_BR, c.D_RxTx, n, std::nullopt, 0.0};
}

inline ContentionConfig ack_contention(const ProtocolConstants& c, int n) {
  return {c.W_RR, c.D_ACK, n, std::nullopt, 0.0};
}

/// 1 - ((W - D) / W)^N.
inline double collision_probability(Duration window, Duration block, int contenders) {
  if (contenders <= 0) return 0.0;
  const double w = static_cast<double>(window.count());
  const double d = static_cast<double>(std::min(block, window).count());
  return 1.0 - std::pow((w - d) / w, contenders);
}

inline double collision_probability(const ContentionConfig& cfg) {
  return collision_probability(cfg.window, cfg.block, cfg.contenders);
}

/// Broadcast relay collisions (blocking width D_RxTx, window W_BR).
inline double p_br(const ContentionConfig& cfg) { return collision_probability(cfg); }

/// ACK collisions (blocking width D_ACK, window W_RR).
inline double p_rr(const ContentionConfig& cfg) { return collision_probability(cfg); }

struct CollisionEstimate {
  std::int64_t collisions = 0;
  std::int64_t runs = 0;

  double probability() const { return runs ? static_cast<double>(collisions) / static_cast<double>(runs) : 0.0; }

  /// Normal-approximation binomial interval, z standard errors wide.
  std::pair<double, double> interval(double z = 1.96) const {
    const double p = probability();
    const double half = runs ? z * std::sqrt(p * (1.0 - p) / static_cast<double>(runs)) : 0.0;
    return {std::max(0.0, p - half), std::min(1.0, p + half)};
  }

  CollisionEstimate& operator+=(const CollisionEstimate& o) {
    collisions += o.collisions;
    runs += o.runs;
    return *this;
  }
};

/// Draws N backoffs per run and counts runs where the earliest one is
/// within the blocking width of the next. Discrete mode draws integer levels
/// in [0, L-1] mapped linearly onto [0, W].
inline CollisionEstimate simulate_collision(const ContentionConfig& cfg, std::int64_t runs,
                                            std::uint64_t seed) {
  CollisionEstimate est;
  est.runs = std::max<std::int64_t>(runs, 0);
  if (cfg.contenders < 2) return est;

  std::mt19937_64 rng(seed);
  const double w = static_cast<double>(cfg.window.count());
  const double d = static_cast<double>(cfg.block.count());
  std::uniform_real_distribution<double> cont(0.0, w);
  std::uniform_int_distribution<int> disc(0, cfg.discrete_levels.value_or(2) - 1);
  std::bernoulli_distribution capture(cfg.capture_probability);
  const double step = cfg.discrete_levels ? w / (*cfg.discrete_levels - 1) : 0.0;

  for (std::int64_t r = 0; r < est.runs; ++r) {
    double first = std::numeric_limits<double>::infinity();
    double second = first;
    for (int i = 0; i < cfg.contenders; ++i) {
      const double b = cfg.discrete_levels ? disc(rng) * step : cont(rng);
      if (b < first) {
        second = first;
        first = b;
      } else if (b < second) {
        second = b;
      }
    }
    if (second - first < d) {
      if (cfg.capture_probability > 0.0 && capture(rng)) continue;
      ++est.collisions;
    }
  }
  return est;
}

/// Smallest window (1 us resolution) whose closed-form probability is at most `target`.
inline Duration min_window(double target_p, Duration block, int contenders) {
  if (contenders <= 0 || target_p >= 1.0) return block + 1us;
  std::int64_t lo = block.count() + 1;
  std::int64_t hi = lo;
  while (collision_probability(Duration(hi), block, contenders) > target_p) {
    if (hi > std::numeric_limits<std::int64_t>::max() / 4) return Duration(hi);
    hi *= 2;
  }
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (collision_probability(Duration(mid), block, contenders) <= target_p) hi = mid;
    else lo = mid + 1;
  }
  return Duration(lo);
}

/// Backoff proportional to the metric: 0 for the sink, the full window at metric_max.
inline Duration ack_backoff(Metric metric, double metric_max, Duration window) {
  if (metric_max <= 0.0 || metric.value <= 0.0) return Duration::zero();
  const double frac = std::min(metric.value / metric_max, 1.0);
  return Duration(static_cast<std::int64_t>(std::floor(frac * static_cast<double>(window.count()))));
}

struct AckEvent {
  NodeId node = 0;
  Metric metric;
  Duration backoff{};
  bool lost = false;
};

struct ElectionResult {
  std::optional<NodeId> winner;
  std::vector<AckEvent> acks;
  bool correct = false;  // winner carries the minimum metric of all repliers

  std::vector<NodeId> heard() const {
    std::vector<NodeId> out;
    for (const AckEvent& a : acks)
      if (!a.lost) out.push_back(a.node);
    return out;
  }
};

/// Collects every ACK, drops the ones whose start is within `block` of another
/// one, and elects the earliest survivor.
inline ElectionResult elect_next_hop(std::vector<AckEvent> acks, Duration block) {
  ElectionResult out;
  for (std::size_t i = 0; i < acks.size(); ++i)
    for (std::size_t j = i + 1; j < acks.size(); ++j)
      if (std::chrono::abs(acks[i].backoff - acks[j].backoff) < block) {
        acks[i].lost = true;
        acks[j].lost = true;
      }

  const AckEvent* best = nullptr;
  double min_metric = std::numeric_limits<double>::infinity();
  for (const AckEvent& a : acks) {
    min_metric = std::min(min_metric, a.metric.value);
    if (!a.lost && (!best || a.backoff < best->backoff)) best = &a;
  }
  if (best) {
    out.winner = best->node;
    out.correct = best->metric.value <= min_metric;
  }
  out.acks = std::move(acks);
  return out;
}

inline double preamble_duty_cycle(const ProtocolConstants& c) { return duty_cycle(c); }

}  // namespace wsn
