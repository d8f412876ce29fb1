#pragma once

// Depth-first geographic forwarding over physical or virtual coordinates.
//
// Every holder appends itself to the packet header. A holder forwards to the
// unvisited neighbor whose coordinate is closest to the destination
// coordinate (ties: smaller id), otherwise sends the packet back to the node
// it first received it from. When the sink has moved since the destination
// was recorded, the header is erased and the search restarts toward the
// sink's current coordinate: once the search is exhausted at its root, and in
// physical mode also as soon as the packet gets within range of the recorded
// position without finding the sink there.

#include <array>
#include <bitset>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "wsn/core.hpp"
#include "wsn/mobility.hpp"
#include "wsn/radio.hpp"

namespace wsn {

inline constexpr NodeId kSinkId = 255;

struct Bounds {
  Position min{0.0, 0.0};
  Position max{1000.0, 1000.0};
};

/// Coordinates aligned with a topology's node slots.
struct VirtualCoords {
  std::vector<Position> position;
  std::vector<bool> fixed;
};

template <class Rng>
VirtualCoords init_virtual_coords(const Topology& topo, Rng& rng, const Bounds& bounds,
                                  std::span<const std::pair<NodeId, Position>> presets = {}) {
  VirtualCoords vc;
  vc.position.resize(topo.size());
  vc.fixed.assign(topo.size(), false);
  std::uniform_real_distribution<double> ux(bounds.min.x, bounds.max.x);
  std::uniform_real_distribution<double> uy(bounds.min.y, bounds.max.y);
  for (auto& p : vc.position) {
    const double x = ux(rng);
    const double y = uy(rng);
    p = {x, y};
  }
  for (const auto& [id, at] : presets) {
    const std::size_t i = topo.index_of(id);
    vc.position[i] = at;
    vc.fixed[i] = true;
  }
  return vc;
}

inline VirtualCoords init_virtual_coords(const Topology& topo, std::uint64_t seed, const Bounds& bounds,
                                         std::span<const std::pair<NodeId, Position>> presets = {}) {
  std::mt19937_64 rng(seed);
  return init_virtual_coords(topo, rng, bounds, presets);
}

/// One synchronous centroid step: every free node moves to the mean of its
/// own and its neighbors' previous coordinates.
inline VirtualCoords centroid_round(const Topology& topo, const VirtualCoords& vc,
                                    bool keep_isolated = false) {
  VirtualCoords next = vc;
  for (std::size_t i = 0; i < topo.size(); ++i) {
    if (vc.fixed[i]) continue;
    const auto& nbrs = topo.neighbors(topo.node(i).id);
    if (nbrs.empty()) {
      if (keep_isolated) continue;
      throw Error(ErrorCode::IsolatedNode, "node " + std::to_string(topo.node(i).id));
    }
    double sx = vc.position[i].x;
    double sy = vc.position[i].y;
    for (NodeId n : nbrs) {
      const Position& p = vc.position[topo.index_of(n)];
      sx += p.x;
      sy += p.y;
    }
    const double k = static_cast<double>(nbrs.size() + 1);
    next.position[i] = {sx / k, sy / k};
  }
  return next;
}

/// Network coordinates plus the sink's fixed virtual coordinate.
struct VirtualFrame {
  std::vector<Position> coords;
  Position sink;
};

/// Random coordinates smoothed by `rounds` centroid steps, with the sink taking
/// part at its physical position while keeping a fixed virtual coordinate.
inline VirtualFrame form_virtual_coordinates(const Topology& net, Position sink_physical,
                                             Position sink_virtual, int rounds, std::uint64_t seed,
                                             const Bounds& bounds) {
  if (net.contains(kSinkId)) throw Error(ErrorCode::DuplicateId, "sink id 255 is reserved");
  std::vector<Node> nodes = net.nodes();
  nodes.push_back({kSinkId, sink_physical});
  const Topology augmented = build_udg(std::move(nodes), net.range());
  const std::pair<NodeId, Position> preset[] = {{kSinkId, sink_virtual}};
  VirtualCoords vc = init_virtual_coords(augmented, seed, bounds, preset);
  for (int r = 0; r < rounds; ++r) vc = centroid_round(augmented, vc, true);
  vc.position.pop_back();
  return {std::move(vc.position), sink_virtual};
}

/// Packet header: every holder in order, including return visits.
class RouteHeader {
 public:
  RouteHeader() { first_.fill(-1); }
  RouteHeader(NodeId origin, Position dest) : RouteHeader() {
    dest_coord = dest;
    push(origin);
  }

  Position dest_coord;

  const std::vector<NodeId>& traversed() const { return traversed_; }
  std::size_t size() const { return traversed_.size(); }
  bool visited(NodeId id) const { return visited_.test(id); }

  void push(NodeId id) {
    if (!visited_.test(id)) {
      visited_.set(id);
      first_[id] = static_cast<std::int32_t>(traversed_.size());
    }
    traversed_.push_back(id);
  }

  void restart(NodeId origin, Position dest) {
    *this = RouteHeader(origin, dest);
  }

  /// The node this one first received the packet from, if any.
  std::optional<NodeId> parent(NodeId id) const {
    const std::int32_t at = first_[id];
    if (at <= 0) return std::nullopt;
    return traversed_[static_cast<std::size_t>(at - 1)];
  }

  /// Ids of nodes that appear at least once, in order of first visit.
  std::vector<NodeId> first_visits() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < traversed_.size(); ++i)
      if (first_[traversed_[i]] == static_cast<std::int32_t>(i)) out.push_back(traversed_[i]);
    return out;
  }

 private:
  std::vector<NodeId> traversed_;
  std::bitset<256> visited_;
  std::array<std::int32_t, 256> first_{};
};

struct RouteAction {
  enum class Kind { Forward, Backtrack, Deliver, Restart, Fail };
  Kind kind = Kind::Fail;
  NodeId next = 0;

  friend bool operator==(const RouteAction&, const RouteAction&) = default;
};

/// Decision of the current holder (the header's last entry).
/// `neighbors` is what the holder learned from the ACK round; `coords` is
/// aligned with `topo`'s node slots.
inline RouteAction next_hop_3rule(NodeId current, const RouteHeader& header, std::span<const NodeId> neighbors,
                                  const Topology& topo, std::span<const Position> coords, bool sink_adjacent,
                                  bool sink_moved) {
  using K = RouteAction::Kind;
  if (sink_adjacent) return {K::Deliver, kSinkId};

  std::optional<NodeId> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (NodeId n : neighbors) {
    if (n == current || header.visited(n)) continue;
    const double d = distance(coords[topo.index_of(n)], header.dest_coord);
    if (!best || d < best_d || (d == best_d && n < *best)) {
      best_d = d;
      best = n;
    }
  }
  if (best) return {K::Forward, *best};
  if (auto p = header.parent(current)) return {K::Backtrack, *p};
  if (sink_moved) return {K::Restart, current};
  return {K::Fail, current};
}

enum class RouteOutcome { Delivered, Missed, RoundLimit, Failed, HeaderOverflow };

inline const char* to_string(RouteOutcome o) {
  switch (o) {
    case RouteOutcome::Delivered: return "delivered";
    case RouteOutcome::Missed: return "missed";
    case RouteOutcome::RoundLimit: return "round-limit";
    case RouteOutcome::Failed: return "failed";
    case RouteOutcome::HeaderOverflow: return "header-overflow";
  }
  return "?";
}

struct RouteResult {
  bool delivered = false;
  int hops = 0;           // path.size() - 1
  int restarts = 0;
  int transmissions = 0;  // every hop, including those of erased headers
  std::vector<NodeId> path;  // header of the final attempt, then kSinkId when delivered
  RouteOutcome outcome = RouteOutcome::Failed;
};

/// When a moving sink makes the recorded destination stale.
enum class RestartTrigger {
  /// Only once the depth-first search is exhausted at its root.
  Exhausted,
  /// Also as soon as the packet reaches a node in range of the sink's recorded
  /// position without finding the sink there. Physical mode only.
  Arrival,
};

inline const char* to_string(RestartTrigger r) { return r == RestartTrigger::Arrival ? "arrival" : "exhausted"; }

struct RouteOptions {
  double sink_range = 200.0;
  /// 0 selects 4x the node count.
  std::size_t round_limit = 0;
  /// Virtual mode: the destination is this fixed coordinate instead of the
  /// sink's physical position.
  std::optional<Position> sink_virtual;
  /// Maximum header entries; unlimited when empty.
  std::optional<std::size_t> header_limit;
  RestartTrigger restart = RestartTrigger::Arrival;
};

inline bool sink_reaches(const Topology& topo, NodeId node, const Position& sink, double range) {
  return distance(topo.position(node), sink) <= range;
}

/// Round-based delivery: one hop per round, the sink steps once per round.
inline RouteResult route(const Topology& topo, std::span<const Position> coords, NodeId source, SinkTrack& sink,
                         const RouteOptions& opt = {}) {
  using K = RouteAction::Kind;
  const std::size_t limit = opt.round_limit ? opt.round_limit : 4 * std::max<std::size_t>(topo.size(), 1);
  auto target = [&] { return opt.sink_virtual.value_or(sink.position()); };

  RouteResult res;
  RouteHeader header(source, target());
  Position snapshot = sink.position();
  NodeId current = source;
  res.path.push_back(source);
  auto finish = [&res](RouteOutcome o) {
    res.outcome = o;
    res.delivered = o == RouteOutcome::Delivered;
    res.hops = static_cast<int>(res.path.size()) - 1;
    return res;
  };

  for (std::size_t round = 0; round < limit; ++round) {
    if (sink.departed()) return finish(RouteOutcome::Missed);
    const bool adjacent = sink_reaches(topo, current, sink.position(), opt.sink_range);
    const bool moved = sink.position() != snapshot;
    RouteAction act =
        next_hop_3rule(current, header, topo.neighbors(current), topo, coords, adjacent, moved);
    if (opt.restart == RestartTrigger::Arrival && !opt.sink_virtual && act.kind != K::Deliver && moved &&
        sink_reaches(topo, current, snapshot, opt.sink_range))
      act = {K::Restart, current};

    switch (act.kind) {
      case K::Deliver:
        ++res.transmissions;
        res.path.push_back(kSinkId);
        return finish(RouteOutcome::Delivered);
      case K::Forward:
      case K::Backtrack:
        if (opt.header_limit && header.size() + 1 > *opt.header_limit)
          return finish(RouteOutcome::HeaderOverflow);
        header.push(act.next);
        current = act.next;
        res.path.push_back(current);
        ++res.transmissions;
        break;
      case K::Restart:
        ++res.restarts;
        snapshot = sink.position();
        header.restart(current, target());
        res.path.assign(1, current);
        break;
      case K::Fail:
        return finish(RouteOutcome::Failed);
    }
    sink.step();
  }
  return finish(RouteOutcome::RoundLimit);
}

}  // namespace wsn
