#pragma once

// End-to-end request in event time.
//
//   1  the base station repeats its data request preamble until the mobile
//      sink samples one and acknowledges it;
//   2  the sink flies to the network and broadcasts the request;
//   3  the network floods it; the source waits B_SRC for the flood to pass;
//   4  the data is routed hop by hop with preamble, ACK contention and DATA;
//   5  the sink, answering with metric 0, receives the DATA and acknowledges;
//   6  the sink flies back and answers the next data request with the DATA.
//
// Every entity gets a radio-state timeline partitioning [0, end).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "wsn/analysis.hpp"
#include "wsn/contention.hpp"
#include "wsn/core.hpp"
#include "wsn/flood.hpp"
#include "wsn/frame.hpp"
#include "wsn/mobility.hpp"
#include "wsn/radio.hpp"
#include "wsn/routing.hpp"
#include "wsn/timeline.hpp"

namespace wsn {

inline constexpr NodeId kBaseStationId = 254;

enum class CoordMode { Physical, Virtual };

inline const char* to_string(CoordMode m) { return m == CoordMode::Physical ? "physical" : "virtual"; }

inline CoordMode parse_coord_mode(const std::string& s) {
  if (s == "physical") return CoordMode::Physical;
  if (s == "virtual") return CoordMode::Virtual;
  throw Error(ErrorCode::ConfigError, "unknown coordinate mode '" + s + "' (physical, virtual)");
}

struct ScenarioConfig {
  Topology topology;
  ProtocolConstants constants;
  TxPower power = TxPower::DbmMinus25;
  /// Sink path through the network, speeds in m/s.
  SinkTrack track = SinkTrack::edge(100.0, kmh_to_mps(50.0));
  /// Horizontal distance at which the sink and a node hear each other.
  double sink_range = 25.0;
  /// Uniform over the network when empty.
  std::optional<NodeId> source;
  CoordMode coords = CoordMode::Physical;
  int centroid_rounds = 10;
  Bounds bounds{{0.0, 0.0}, {100.0, 100.0}};
  /// Normalizes ACK backoffs; the bounds' diagonal when empty.
  std::optional<double> metric_max;
  Duration transit_out = Duration::zero();   // base station to network entry
  Duration transit_back = Duration::zero();  // network exit to base station
  int brp_retries = 3;
  bool flood_collisions = false;
  bool ack_collisions = true;
  /// Preamble resends after an ACK window in which every ACK collided.
  int silent_retries = 4;
  /// Random ACK delay added on the k-th resend, uniform in [0, k * ack_jitter).
  Duration ack_jitter = Duration{1920};
  double data_loss = 0.0;
  IdleModel idle = IdleModel::SampleBursts;
  /// 0 selects 4x the node count.
  std::size_t hop_limit = 0;
  std::uint64_t seed = 1;
};

struct PhaseStamp {
  int phase = 0;
  NodeId entity = 0;
  SimTime start{};
  SimTime end{};
};

/// One preamble / ACK window / DATA exchange.
struct HopRecord {
  SimTime start{};
  NodeId sender = 0;
  std::optional<NodeId> receiver;    // empty when the exchange failed
  std::vector<AckEvent> acks;        // kSinkId for the mobile sink
  bool data_lost = false;
  int restarts = 0;                  // restarts decided on this exchange

  SimTime end(const ProtocolConstants& c) const { return start + c.D_RRp + c.W_RR + c.D_DATA; }
};

struct ScenarioReport {
  NodeId source = 0;
  NodeId query = 0;
  std::optional<NodeId> entry_node;  // first node the sink's request reached
  RouteResult route;
  bool delivered = false;
  bool missed = true;
  /// The query node's neighbor list as decoded by the sink.
  std::optional<std::vector<NodeId>> discovered;
  std::vector<PhaseStamp> phases;
  std::vector<HopRecord> hops;
  FloodReport flood;
  SimTime flood_start{};
  SimTime routing_start{};
  SimTime end{};
  int data_received_by_sink = 0;
  std::map<NodeId, std::vector<RadioSegment>> timeline;

  std::vector<PhaseStamp> phases_of(NodeId entity) const {
    std::vector<PhaseStamp> out;
    for (const PhaseStamp& p : phases)
      if (p.entity == entity) out.push_back(p);
    return out;
  }
};

namespace detail {

/// Sink position as time moves forward.
class SinkMotion {
 public:
  explicit SinkMotion(SinkTrack track) : track_(std::move(track)) {}

  void start(SimTime t) {
    at_ = t;
    started_ = true;
  }

  const Position& at(SimTime t) {
    if (started_ && t > at_) {
      track_.step(to_seconds(t - at_));
      at_ = t;
    }
    return track_.position();
  }

  bool departed() const { return track_.departed(); }

 private:
  SinkTrack track_;
  SimTime at_{};
  bool started_ = false;
};

/// Data request `k` of the base station starts at offset + k T_DR. Returns the
/// end of the first request the sink samples at or after `from`.
inline SimTime await_data_request(const ProtocolConstants& c, Duration offset, const Timeline& sink,
                                  SimTime from) {
  SimTime s = sink.next_sample(from);
  for (int guard = 0; guard < 100000; ++guard, s += c.T_cca) {
    if (s < offset) continue;
    const std::int64_t k = (s - offset) / c.T_DR;
    const SimTime d = offset + k * c.T_DR;
    if (s + c.D_cca <= d + c.D_DRp) return d + c.D_DRp;
  }
  throw Error(ErrorCode::ConfigError, "sink never samples a data request");
}

}  // namespace detail

inline ScenarioReport run_scenario(const ScenarioConfig& cfg) {
  const ProtocolConstants& c = cfg.constants;
  const Topology& topo = cfg.topology;
  if (topo.empty()) throw Error(ErrorCode::ConfigError, "empty topology");
  if (topo.contains(kSinkId) || topo.contains(kBaseStationId))
    throw Error(ErrorCode::ConfigError, "node ids 254 and 255 are reserved");
  if (auto v = validate_constants(c); !v.empty())
    throw Error(ErrorCode::ConfigError, "constraint " + v.front().constraint + ": " + v.front().detail);
  if (cfg.data_loss < 0.0 || cfg.data_loss >= 1.0) throw Error(ErrorCode::ConfigError, "data_loss must be in [0,1)");
  if (cfg.silent_retries < 0 || cfg.ack_jitter < Duration::zero())
    throw Error(ErrorCode::ConfigError, "silent_retries and ack_jitter must be non-negative");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::int64_t> phase_draw(0, c.T_cca.count() - 1);
  std::bernoulli_distribution lose(cfg.data_loss);

  ScenarioReport rep;
  std::map<NodeId, Timeline> tl;
  for (const Node& n : topo.nodes()) tl[n.id] = Timeline(Duration(phase_draw(rng)), c.T_cca, c.D_cca);
  tl[kSinkId] = Timeline(Duration(phase_draw(rng)), c.T_cca, c.D_cca);
  const Duration dr_offset(std::uniform_int_distribution<std::int64_t>(0, c.T_DR.count() - 1)(rng));
  const std::uint64_t flood_seed = rng();
  const std::uint64_t coord_seed = rng();

  if (cfg.source) {
    topo.index_of(*cfg.source);
    rep.source = *cfg.source;
  } else {
    rep.source = topo.node(std::uniform_int_distribution<std::size_t>(0, topo.size() - 1)(rng)).id;
  }
  rep.query = rep.source;
  Timeline& ms = tl[kSinkId];
  std::vector<SimTime> bs_rx;  // base station receptions (start), ACK then DATA

  // Phase 1: data request.
  const SimTime p1_end_dr = detail::await_data_request(c, dr_offset, ms, SimTime::zero());
  ms.paint(RadioState::Tx, p1_end_dr, p1_end_dr + c.D_ACK);
  bs_rx.push_back(p1_end_dr);
  const SimTime p1_end = p1_end_dr + c.D_ACK;
  rep.phases.push_back({1, kSinkId, SimTime::zero(), p1_end});
  rep.phases.push_back({1, kBaseStationId, SimTime::zero(), p1_end});

  // Phase 2: fly in, broadcast the request once a node is in range.
  detail::SinkMotion motion(cfg.track);
  const SimTime arrive = p1_end + cfg.transit_out;
  motion.start(arrive);
  SimTime t = arrive;
  auto in_range = [&](const Position& p) {
    std::optional<NodeId> best;
    double best_d = cfg.sink_range;
    for (const Node& n : topo.nodes()) {
      const double d = distance(n.position, p);
      if (d <= best_d && (!best || d < best_d)) {
        best = n.id;
        best_d = d;
      }
    }
    return best;
  };
  while (!in_range(motion.at(t)) && !motion.departed()) t += 10ms;
  rep.entry_node = in_range(motion.at(t));

  std::optional<SimTime> network_idle_from;
  auto close = [&](SimTime end) {
    rep.end = end;
    if (network_idle_from)
      for (const Node& n : topo.nodes()) rep.phases.push_back({2, n.id, *network_idle_from, end});
    for (auto& [id, line] : tl) rep.timeline[id] = line.finish(end, cfg.idle);
    // The base station listens between its requests.
    Timeline bs;
    bs.paint(RadioState::Listen, SimTime::zero(), end);
    for (SimTime d = SimTime(dr_offset); d < end; d += c.T_DR) bs.paint(RadioState::Preamble, d, std::min(d + c.D_DRp, end));
    for (std::size_t i = 0; i < bs_rx.size(); ++i) {
      const Duration len = i == 0 ? c.D_ACK : (rep.delivered ? c.D_DATA : c.D_ACK);
      bs.paint(RadioState::Rx, bs_rx[i], std::min(bs_rx[i] + len, end));
    }
    rep.timeline[kBaseStationId] = bs.finish(end, cfg.idle);
    return rep;
  };
  auto phase6 = [&](SimTime from) {
    const SimTime back = from + cfg.transit_back;
    const SimTime dr_end = detail::await_data_request(c, dr_offset, ms, back);
    const Duration reply = rep.delivered ? c.D_DATA : c.D_ACK;
    ms.paint(RadioState::Tx, dr_end, dr_end + reply);
    bs_rx.push_back(dr_end);
    rep.phases.push_back({6, kSinkId, from, dr_end + reply});
    rep.phases.push_back({6, kBaseStationId, back, dr_end + reply});
    return close(dr_end + reply);
  };

  if (!rep.entry_node) {
    rep.route.outcome = RouteOutcome::Missed;
    rep.phases.push_back({2, kSinkId, p1_end, t});
    return phase6(t);
  }

  // Phase 3: flood over the network plus the sink at its broadcast position.
  const SimTime t_b = t;
  rep.flood_start = t_b;
  const Position sink_at_brp = motion.at(t_b);
  const Topology flood_topo = with_node(topo, {kSinkId, sink_at_brp}, cfg.sink_range);
  std::vector<std::vector<Interval>> air;
  FloodOptions fo;
  fo.collisions = cfg.flood_collisions;
  fo.initiator_retries = cfg.brp_retries;
  rep.flood = simulate_flood(flood_topo, kSinkId, rep.source, c, flood_seed, fo, &air);

  const std::size_t sink_slot = flood_topo.index_of(kSinkId);
  for (const Interval& iv : air[sink_slot]) ms.paint(RadioState::Preamble, t_b + iv.start, t_b + iv.end);
  std::optional<SimTime> relay_heard;
  for (NodeId nb : flood_topo.neighbors(kSinkId))
    for (const Interval& iv : air[flood_topo.index_of(nb)])
      if (!relay_heard || t_b + iv.end < *relay_heard) relay_heard = t_b + iv.end;
  SimTime p2_end = t_b;
  for (const Interval& iv : air[sink_slot]) p2_end = std::max(p2_end, t_b + iv.end);
  if (relay_heard) {
    p2_end = *relay_heard;
    ms.paint(RadioState::Rx, p2_end - c.D_BRp, p2_end);
  }
  rep.phases.push_back({2, kSinkId, p1_end, p2_end});

  SimTime flood_end = t_b + rep.flood.completion;
  for (std::size_t i = 0; i < topo.size(); ++i) {
    const FloodNodeRecord& r = rep.flood.nodes[flood_topo.index_of(topo.node(i).id)];
    if (!r.first_rx) continue;
    Timeline& line = tl[r.id];
    const SimTime rx_end = t_b + *r.first_rx;
    const SimTime rx_start = rx_end - c.D_BRp;
    const SimTime s = line.next_sample(rx_start);
    if (s + c.D_cca <= rx_end) line.paint(RadioState::Sleep, s + c.D_cca, rx_end);  // asleep until the preamble ends
    SimTime done = rx_end;
    if (r.tx_start) {
      const SimTime tx = t_b + *r.tx_start;
      line.paint(RadioState::Listen, rx_end, tx);
      line.paint(RadioState::Preamble, tx, tx + c.D_BRp);
      done = tx + c.D_BRp;
    } else if (r.id == rep.source && rep.flood.source_ready) {
      done = t_b + *rep.flood.source_ready;
    }
    rep.phases.push_back({3, r.id, rx_start, done});
  }

  const FloodNodeRecord& src_rec = rep.flood.at(flood_topo, rep.source);
  if (!src_rec.first_rx || !rep.flood.source_ready) {
    rep.route.outcome = RouteOutcome::Failed;
    rep.route.path = {rep.source};
    rep.phases.push_back({5, kSinkId, p2_end, flood_end});
    network_idle_from = flood_end;
    return phase6(flood_end);
  }

  // Phase 4: routing.
  const SimTime t_r = t_b + *rep.flood.source_ready;
  rep.routing_start = t_r;
  std::vector<Position> coords;
  std::optional<Position> fixed_dest;
  if (cfg.coords == CoordMode::Virtual) {
    const Position entry = cfg.track.position();
    VirtualFrame vf = form_virtual_coordinates(topo, sink_at_brp, entry, cfg.centroid_rounds, coord_seed, cfg.bounds);
    coords = std::move(vf.coords);
    fixed_dest = vf.sink;
  } else {
    for (const Node& n : topo.nodes()) coords.push_back(n.position);
  }
  const double metric_max =
      cfg.metric_max.value_or(distance(cfg.bounds.min, cfg.bounds.max) > 0 ? distance(cfg.bounds.min, cfg.bounds.max)
                                                                            : 1.0);
  const Duration ack_window = c.W_RR - c.D_ACK;
  const std::size_t limit = cfg.hop_limit ? cfg.hop_limit : 4 * topo.size();

  RouteResult& res = rep.route;
  Position snapshot = sink_at_brp;
  RouteHeader header(rep.source, fixed_dest.value_or(snapshot));
  NodeId current = rep.source;
  res.path = {rep.source};
  std::vector<NodeId> source_neighbors;
  bool first_exchange = true;
  std::uint8_t seq = 0;
  int silent = 0;  // consecutive windows with every ACK lost
  t = t_r;
  std::optional<SimTime> finished;
  std::optional<std::pair<NodeId, SimTime>> watchdog;  // sender listening for the relay

  auto sleep_from = [&](const Timeline& line, SimTime from) {
    // A sample already running at `from` completes.
    const SimTime prev = line.next_sample(from) - c.T_cca;
    return prev + c.D_cca > from ? prev + c.D_cca : from;
  };

  for (std::size_t exchanges = 0; !finished; ++exchanges) {
    if (exchanges >= limit) {
      res.outcome = RouteOutcome::RoundLimit;
      break;
    }
    if (motion.departed()) {
      res.outcome = RouteOutcome::Missed;
      break;
    }
    HopRecord hop;
    hop.start = t;
    hop.sender = current;
    const SimTime win = t + c.D_RRp;
    const SimTime data_at = win + c.W_RR;
    const SimTime end = data_at + c.D_DATA;
    Timeline& snd = tl[current];
    snd.paint(RadioState::Preamble, t, win);
    snd.paint(RadioState::Listen, win, data_at);

    // Every neighbor that samples the preamble answers.
    std::vector<AckEvent> acks;
    auto answer = [&](NodeId id, Timeline& line, double metric) {
      const SimTime s = line.next_sample(t);
      if (s + c.D_cca > win) return;
      line.paint(RadioState::Sleep, sleep_from(line, t), s);
      line.paint(RadioState::Sleep, s + c.D_cca, end);
      // The first ACK slot is the sink's; nodes spread over the rest.
      Duration b = id == kSinkId ? Duration::zero()
                                 : c.D_ACK + ack_backoff(Metric{metric}, metric_max, ack_window - c.D_ACK);
      if (silent > 0 && id != kSinkId) {
        const auto span = static_cast<double>((silent * cfg.ack_jitter).count());
        b += Duration{static_cast<Duration::rep>(std::uniform_real_distribution<double>(0.0, span)(rng))};
        b = std::min(b, ack_window);
      }
      line.paint(RadioState::Tx, win + b, win + b + c.D_ACK);
      acks.push_back({id, Metric{metric}, b, false});
    };
    for (NodeId v : topo.neighbors(current))
      answer(v, tl[v], std::max(distance(coords[topo.index_of(v)], header.dest_coord), 1e-9));
    const Position sink_pos = motion.at(win);
    if (distance(topo.position(current), sink_pos) <= cfg.sink_range) answer(kSinkId, ms, 0.0);
    if (watchdog) tl[watchdog->first].paint(RadioState::Listen, watchdog->second, watchdog->second + c.B_RR);
    watchdog.reset();

    ElectionResult el = cfg.ack_collisions ? elect_next_hop(acks, c.D_ACK) : elect_next_hop(acks, Duration::zero());
    for (const AckEvent& a : el.acks) snd.paint(RadioState::Rx, win + a.backoff, win + a.backoff + c.D_ACK);
    std::vector<const AckEvent*> heard;
    for (const AckEvent& a : el.acks)
      if (!a.lost) heard.push_back(&a);
    std::sort(heard.begin(), heard.end(), [](const AckEvent* a, const AckEvent* b) {
      return a->backoff != b->backoff ? a->backoff < b->backoff : a->node < b->node;
    });
    if (first_exchange) {
      for (const AckEvent* a : heard)
        if (a->node != kSinkId) source_neighbors.push_back(a->node);
      std::sort(source_neighbors.begin(), source_neighbors.end());
      first_exchange = false;
    }

    hop.acks = el.acks;
    auto fresh = [&](NodeId id) { return id == kSinkId || !header.visited(id); };
    const bool fresh_heard = std::any_of(heard.begin(), heard.end(), [&](const AckEvent* a) { return fresh(a->node); });
    const bool fresh_lost =
        std::any_of(el.acks.begin(), el.acks.end(), [&](const AckEvent& a) { return a.lost && fresh(a.node); });
    if (!fresh_heard && fresh_lost && silent < cfg.silent_retries) {
      // Only collided ACKs from unexplored nodes: wait out the watchdog and preamble again.
      ++silent;
      snd.paint(RadioState::Listen, data_at, end + c.B_RR);
      rep.hops.push_back(std::move(hop));
      t = end + c.B_RR;
      continue;
    }
    silent = 0;

    const bool sink_heard =
        std::any_of(heard.begin(), heard.end(), [](const AckEvent* a) { return a->node == kSinkId; });
    std::optional<NodeId> next;
    if (sink_heard) {
      next = kSinkId;
    } else {
      const Position now = motion.at(win);
      const bool moved = now != snapshot;
      auto restart = [&] {
        ++hop.restarts;
        ++res.restarts;
        snapshot = now;
        header.restart(current, fixed_dest.value_or(snapshot));
        res.path.assign(1, current);
      };
      auto pick = [&]() -> std::optional<NodeId> {
        for (const AckEvent* a : heard)
          if (!header.visited(a->node)) return a->node;
        return header.parent(current);
      };
      // Reached the recorded position and the sink is gone.
      if (!fixed_dest && moved && distance(topo.position(current), snapshot) <= cfg.sink_range) restart();
      next = pick();
      if (!next && moved && hop.restarts == 0) {
        restart();
        next = pick();
      }
    }
    if (!next) {
      snd.paint(RadioState::Listen, data_at, end);
      rep.hops.push_back(std::move(hop));
      res.outcome = RouteOutcome::Failed;
      break;
    }

    // DATA with the header and the query node's neighbors.
    DataPayload payload{header.traversed(), source_neighbors};
    std::vector<std::uint8_t> frame;
    try {
      frame = encode_frame(Frame::data(current, encode_data_payload(payload), seq++));
    } catch (const Error&) {
      rep.hops.push_back(std::move(hop));
      res.outcome = RouteOutcome::HeaderOverflow;
      break;
    }
    hop.receiver = next;
    snd.paint(RadioState::Tx, data_at, end);
    const bool lost = lose(rng);
    hop.data_lost = lost;
    Timeline& rcv = *next == kSinkId ? ms : tl[*next];
    if (!lost) rcv.paint(RadioState::Rx, data_at, end);
    watchdog = std::pair{current, end};
    ++res.transmissions;
    rep.hops.push_back(std::move(hop));

    if (lost) {
      t = end + c.B_RR;  // nobody relayed within the watchdog: send again
      continue;
    }
    if (*next == kSinkId) {
      const Frame f = decode_frame(frame);
      rep.discovered = decode_data_payload(f.payload).neighbors;
      ++rep.data_received_by_sink;
      ms.paint(RadioState::Tx, end, end + c.D_ACK);
      tl[current].paint(RadioState::Listen, end, end + c.B_RR);
      tl[current].paint(RadioState::Rx, end, end + c.D_ACK);
      watchdog.reset();
      res.path.push_back(kSinkId);
      res.outcome = RouteOutcome::Delivered;
      finished = end + c.D_ACK;
      break;
    }
    header.push(*next);
    res.path.push_back(*next);
    current = *next;
    t = end;
  }

  if (watchdog) tl[watchdog->first].paint(RadioState::Listen, watchdog->second, watchdog->second + c.B_RR);
  res.delivered = res.outcome == RouteOutcome::Delivered;
  res.hops = static_cast<int>(res.path.size()) - 1;
  rep.delivered = res.delivered;
  rep.missed = !res.delivered;
  const SimTime stop = finished.value_or(t);
  for (const Node& n : topo.nodes()) {
    SimTime from = t_r;
    for (const PhaseStamp& p : rep.phases)
      if (p.phase == 3 && p.entity == n.id) from = p.end;
    rep.phases.push_back({4, n.id, std::min(from, stop), stop});
  }
  network_idle_from = stop;
  rep.phases.push_back({5, kSinkId, p2_end, stop});
  return phase6(stop);
}

/// Undirected edges (a < b) from each report's query node to the neighbors it
/// reported.
inline std::vector<std::pair<NodeId, NodeId>> discovered_graph(const std::vector<ScenarioReport>& reports) {
  std::set<std::pair<NodeId, NodeId>> edges;
  for (const ScenarioReport& r : reports) {
    if (!r.discovered) continue;
    for (NodeId n : *r.discovered)
      if (n != r.query) edges.insert({std::min(n, r.query), std::max(n, r.query)});
  }
  return {edges.begin(), edges.end()};
}

}  // namespace wsn
