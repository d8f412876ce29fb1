#pragma once

// Backoff-based blind flooding of the broadcast request.
//
// The initiator transmits at t = 0 without backoff. A node completing its
// first reception draws a backoff uniformly in [0, W_BR]. If it hears a
// neighbor start transmitting while backing off, it drops the backoff and
// draws a fresh one D_BRp later, when that transmission is over. A node whose
// backoff fires is committed: it needs D_RxTx to turn its radio around before
// the transmission goes on air, and cannot hear a competitor during that time.
// Every node relays exactly once, except the designated source, which waits
// B_SRC after its first reception instead of relaying.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "wsn/core.hpp"
#include "wsn/radio.hpp"

namespace wsn {

struct FloodOptions {
  /// Receptions overlapping at a receiver are lost.
  bool collisions = false;
  /// Initiator repeats its request every T_BRp until it hears a relay.
  int initiator_retries = 0;
};

struct FloodNodeRecord {
  NodeId id = 0;
  std::optional<SimTime> first_rx;   // end of the first complete reception
  std::optional<SimTime> tx_start;   // start of the (single) relay on air
  int tx_count = 0;
  int copies_heard = 0;
  int backoff_restarts = 0;
};

struct Interval {
  SimTime start{};
  SimTime end{};
};

struct FloodReport {
  NodeId initiator = 0;
  std::optional<NodeId> source;
  std::vector<FloodNodeRecord> nodes;  // topology slot order
  std::vector<NodeId> reached;         // ascending ids, initiator included
  std::optional<SimTime> source_ready;  // source leaves its wait
  SimTime completion{};                 // last transmission ends
  int initiator_transmissions = 0;

  const FloodNodeRecord& at(const Topology& t, NodeId id) const { return nodes[t.index_of(id)]; }
};

/// Strict lower bound on B_SRC: every neighbor of the source relays in turn.
inline Duration b_src_min(std::size_t max_degree, const ProtocolConstants& c) {
  return static_cast<std::int64_t>(max_degree) * (c.W_BR + c.D_BRp);
}

/// Worst-case time for the request to cross `hops` transmissions.
inline Duration flood_bound(int hops, const ProtocolConstants& c) { return hops * (c.W_BR + c.D_BRp); }

namespace detail {

enum class FloodEventKind { TxStart, TxEnd, BackoffFire, BackoffResume, SourceReady, Retry };

struct FloodEvent {
  SimTime time;
  std::uint64_t order;
  FloodEventKind kind;
  std::size_t node;
  std::uint64_t token;

  bool operator>(const FloodEvent& o) const {
    if (time != o.time) return time > o.time;
    return order > o.order;
  }
};

enum class FloodPhase { Idle, Backoff, Deferred, Sent, SourceWait, SourceDone };

}  // namespace detail

/// Runs one flood. `transmissions` optionally receives every on-air interval, by slot.
inline FloodReport simulate_flood(const Topology& topo, NodeId initiator, std::optional<NodeId> source,
                                  const ProtocolConstants& c, std::uint64_t seed, const FloodOptions& opt = {},
                                  std::vector<std::vector<Interval>>* transmissions = nullptr) {
  using detail::FloodEvent;
  using detail::FloodEventKind;
  using detail::FloodPhase;

  const std::size_t n = topo.size();
  FloodReport rep;
  rep.initiator = initiator;
  rep.source = source;
  rep.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) rep.nodes[i].id = topo.node(i).id;

  std::vector<FloodPhase> phase(n, FloodPhase::Idle);
  std::vector<std::uint64_t> token(n, 0);
  std::vector<SimTime> resume_at(n, SimTime::zero());
  std::vector<std::vector<Interval>> on_air(n);
  // Receptions currently in progress at each node (transmitter slot, start).
  std::vector<std::vector<std::pair<std::size_t, SimTime>>> receiving(n);
  std::vector<std::vector<std::size_t>> garbled(n);  // transmitter slots lost at this receiver

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> backoff(0, c.W_BR.count());

  std::priority_queue<FloodEvent, std::vector<FloodEvent>, std::greater<>> q;
  std::uint64_t order = 0;
  auto post = [&](SimTime t, FloodEventKind k, std::size_t node, std::uint64_t tok = 0) {
    q.push({t, order++, k, node, tok});
  };

  const std::size_t init = topo.index_of(initiator);
  const std::size_t src = source ? topo.index_of(*source) : n;  // n: no source
  phase[init] = FloodPhase::Sent;
  post(SimTime::zero(), FloodEventKind::TxStart, init);
  int retries_left = opt.initiator_retries;
  bool relay_heard_by_initiator = false;

  auto arm_backoff = [&](std::size_t v, SimTime now) {
    phase[v] = FloodPhase::Backoff;
    post(now + Duration(backoff(rng)), FloodEventKind::BackoffFire, v, ++token[v]);
  };

  while (!q.empty()) {
    const FloodEvent ev = q.top();
    q.pop();
    const std::size_t u = ev.node;
    const SimTime now = ev.time;

    switch (ev.kind) {
      case FloodEventKind::TxStart: {
        on_air[u].push_back({now, now + c.D_BRp});
        if (u == init) ++rep.initiator_transmissions;
        else {
          ++rep.nodes[u].tx_count;
          rep.nodes[u].tx_start = rep.nodes[u].tx_start.value_or(now);
        }
        for (NodeId nb : topo.neighbors(topo.node(u).id)) {
          const std::size_t v = topo.index_of(nb);
          if (opt.collisions) {
            auto& g = garbled[v];
            auto mark = [&g](std::size_t tx) {
              if (std::find(g.begin(), g.end(), tx) == g.end()) g.push_back(tx);
            };
            for (const auto& r : receiving[v]) {
              mark(r.first);
              mark(u);
            }
          }
          receiving[v].push_back({u, now});
          if (v == init && u != init) relay_heard_by_initiator = true;
          if (phase[v] == FloodPhase::Backoff) {
            phase[v] = FloodPhase::Deferred;
            ++token[v];
            ++rep.nodes[v].backoff_restarts;
            resume_at[v] = now + c.D_BRp;
            post(resume_at[v], FloodEventKind::BackoffResume, v, token[v]);
          } else if (phase[v] == FloodPhase::Deferred && now + c.D_BRp > resume_at[v]) {
            ++token[v];
            resume_at[v] = now + c.D_BRp;
            post(resume_at[v], FloodEventKind::BackoffResume, v, token[v]);
          }
        }
        post(now + c.D_BRp, FloodEventKind::TxEnd, u);
        if (u == init && retries_left > 0) post(now + c.T_BRp, FloodEventKind::Retry, u);
        break;
      }
      case FloodEventKind::TxEnd: {
        rep.completion = std::max(rep.completion, now);
        for (NodeId nb : topo.neighbors(topo.node(u).id)) {
          const std::size_t v = topo.index_of(nb);
          auto& rx = receiving[v];
          rx.erase(std::remove_if(rx.begin(), rx.end(), [&](const auto& r) { return r.first == u; }), rx.end());
          auto& g = garbled[v];
          if (auto it = std::find(g.begin(), g.end(), u); it != g.end()) {
            g.erase(it);
            continue;
          }
          FloodNodeRecord& rec = rep.nodes[v];
          ++rec.copies_heard;
          if (!rec.first_rx) rec.first_rx = now;
          if (phase[v] != FloodPhase::Idle) continue;
          if (v == src) {
            phase[v] = FloodPhase::SourceWait;
            post(now + c.B_SRC, FloodEventKind::SourceReady, v);
          } else {
            arm_backoff(v, now);
          }
        }
        break;
      }
      case FloodEventKind::BackoffFire:
        if (phase[u] != FloodPhase::Backoff || ev.token != token[u]) break;
        phase[u] = FloodPhase::Sent;
        post(now + c.D_RxTx, FloodEventKind::TxStart, u);
        break;
      case FloodEventKind::BackoffResume:
        if (phase[u] != FloodPhase::Deferred || ev.token != token[u]) break;
        arm_backoff(u, now);
        break;
      case FloodEventKind::SourceReady:
        phase[u] = FloodPhase::SourceDone;
        rep.source_ready = now;
        break;
      case FloodEventKind::Retry:
        if (relay_heard_by_initiator || retries_left <= 0) break;
        --retries_left;
        post(now, FloodEventKind::TxStart, u);
        break;
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    if (i == init || rep.nodes[i].first_rx) rep.reached.push_back(topo.node(i).id);
  std::sort(rep.reached.begin(), rep.reached.end());
  if (transmissions) *transmissions = std::move(on_air);
  return rep;
}

}  // namespace wsn
