#pragma once

// Parameter sweeps behind the command-line tool: round-based routing on
// random and grid graphs, collision probability, flood timing, and repeated
// end-to-end queries.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "wsn/contention.hpp"
#include "wsn/flood.hpp"
#include "wsn/mobility.hpp"
#include "wsn/radio.hpp"
#include "wsn/routing.hpp"
#include "wsn/scenario.hpp"
#include "wsn/stats.hpp"

namespace wsn {

// --- routing ------------------------------------------------------------------

enum class GraphKind { Random, Grid };

inline const char* to_string(GraphKind g) { return g == GraphKind::Random ? "random" : "grid"; }

struct RouteSweepConfig {
  GraphKind graph = GraphKind::Random;
  std::vector<double> degrees{4, 5, 6, 7, 8, 9, 10};  // random graphs
  std::vector<double> speeds{0, 10, 20, 30, 40, 50};   // field units per round
  std::size_t runs = 10000;
  double field = 1000.0;
  double range = 200.0;
  double sink_range = 200.0;
  int rows = 5;  // grid
  int cols = 5;
  double spacing = 25.0;
  MobilityModel mobility = MobilityModel::Bounce;
  CoordMode coords = CoordMode::Physical;
  int centroid_rounds = 10;
  /// Uniform over the nodes connected to the sink when empty.
  std::optional<NodeId> source;
  RestartTrigger restart = RestartTrigger::Arrival;
  std::size_t round_limit = 0;
  /// Line tracks start a uniform fraction of one step along, so the sink
  /// does not sit on lattice points whenever the step divides the spacing.
  bool random_phase = true;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct RouteSweepRow {
  double speed = 0.0;
  double degree = 0.0;  // nominal for random graphs, measured for grids
  std::size_t runs = 0;
  std::size_t delivered = 0;
  Summary restarts;
  Summary hops;  // delivered messages only
  double miss_ratio = 0.0;
  double mean_nodes = 0.0;
};

struct RouteRun {
  RouteResult result;
  std::size_t nodes = 0;
  double degree = 0.0;
};

namespace detail {

/// Nodes in any component that touches the sink.
inline std::vector<NodeId> connected_to_sink(const Topology& t, const Position& sink, double sink_range) {
  std::vector<bool> ok(t.size(), false);
  for (const Node& n : t.nodes())
    if (!ok[t.index_of(n.id)] && distance(n.position, sink) <= sink_range)
      for (NodeId v : t.component(n.id)) ok[t.index_of(v)] = true;
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (ok[i]) out.push_back(t.node(i).id);
  return out;
}

inline SinkTrack make_track(MobilityModel m, double speed, double side, Position start, std::mt19937_64& rng) {
  switch (m) {
    case MobilityModel::Static: return SinkTrack::stationary(start);
    case MobilityModel::Bounce: {
      const int dx = rng() % 2 ? 1 : -1;
      const int dy = rng() % 2 ? 1 : -1;
      return SinkTrack::bounce(speed, side, start, dx, dy, rng());
    }
    case MobilityModel::EdgeLine: return SinkTrack::edge(side, speed);
    case MobilityModel::DiagonalLine: return SinkTrack::diagonal(side, speed);
  }
  return SinkTrack::stationary(start);
}

}  // namespace detail

/// One replication. The topology, sink start and source depend on `seed`
/// only, so every speed of a sweep sees the same draws.
inline RouteRun route_once(const RouteSweepConfig& cfg, double degree, double speed, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Topology topo;
  double side = cfg.field;
  Position start;
  std::vector<NodeId> candidates;

  if (cfg.graph == GraphKind::Grid) {
    topo = make_grid(cfg.rows, cfg.cols, cfg.spacing, cfg.range);
    side = cfg.spacing * (std::max(cfg.rows, cfg.cols) - 1);
    start = {0.0, 0.0};
    if (cfg.mobility == MobilityModel::Bounce) {
      std::uniform_real_distribution<double> u(0.0, side);
      start = {u(rng), u(rng)};
    }
    candidates = detail::connected_to_sink(topo, start, cfg.sink_range);
  } else {
    const std::size_t n = nodes_for_degree(degree, cfg.field, cfg.range);
    std::uniform_real_distribution<double> u(0.0, cfg.field);
    for (int attempt = 0; candidates.empty(); ++attempt) {
      if (attempt > 1000) throw Error(ErrorCode::ConfigError, "no node ever connects to the sink");
      topo = make_random(n, cfg.field, cfg.range, rng);
      start = {u(rng), u(rng)};
      candidates = detail::connected_to_sink(topo, start, cfg.sink_range);
    }
  }
  if (candidates.empty()) throw Error(ErrorCode::ConfigError, "no node connects to the sink");

  NodeId source;
  if (cfg.source) {
    topo.index_of(*cfg.source);
    source = *cfg.source;
  } else {
    source = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
  }
  SinkTrack track = detail::make_track(cfg.mobility, speed, side, start, rng);
  if (cfg.random_phase && (cfg.mobility == MobilityModel::EdgeLine || cfg.mobility == MobilityModel::DiagonalLine))
    track.step(std::uniform_real_distribution<double>(0.0, 1.0)(rng));

  RouteOptions opt;
  opt.sink_range = cfg.sink_range;
  opt.round_limit = cfg.round_limit;
  opt.restart = cfg.restart;
  std::vector<Position> coords;
  if (cfg.coords == CoordMode::Virtual) {
    VirtualFrame vf = form_virtual_coordinates(topo, start, start, cfg.centroid_rounds, rng(),
                                               Bounds{{0.0, 0.0}, {side, side}});
    coords = std::move(vf.coords);
    opt.sink_virtual = vf.sink;
  } else {
    for (const Node& n : topo.nodes()) coords.push_back(n.position);
  }
  RouteRun run;
  run.result = route(topo, coords, source, track, opt);
  run.nodes = topo.size();
  run.degree = topo.average_degree();
  return run;
}

inline std::vector<RouteSweepRow> route_sweep(const RouteSweepConfig& cfg) {
  if (cfg.speeds.empty()) throw Error(ErrorCode::ConfigError, "no speeds to sweep");
  if (cfg.runs == 0) throw Error(ErrorCode::ConfigError, "runs must be positive");
  const std::vector<double> degrees = cfg.graph == GraphKind::Grid ? std::vector<double>{0.0} : cfg.degrees;
  if (degrees.empty()) throw Error(ErrorCode::ConfigError, "no degrees to sweep");

  std::vector<RouteSweepRow> rows;
  for (std::size_t di = 0; di < degrees.size(); ++di) {
    for (double speed : cfg.speeds) {
      const std::uint64_t base = replication_seed(cfg.seed, di);
      auto runs = run_batch<RouteRun>(cfg.runs, cfg.threads, [&](std::size_t i) {
        return route_once(cfg, degrees[di], speed, replication_seed(base, i));
      });
      Accumulator restarts, hops, nodes, degree;
      std::size_t delivered = 0;
      for (const RouteRun& r : runs) {
        restarts.add(r.result.restarts);
        nodes.add(static_cast<double>(r.nodes));
        degree.add(r.degree);
        if (r.result.delivered) {
          ++delivered;
          hops.add(r.result.hops);
        }
      }
      RouteSweepRow row;
      row.speed = speed;
      row.degree = cfg.graph == GraphKind::Grid ? degree.mean() : degrees[di];
      row.runs = runs.size();
      row.delivered = delivered;
      row.restarts = restarts.summary();
      row.hops = hops.summary();
      row.miss_ratio = 1.0 - static_cast<double>(delivered) / static_cast<double>(runs.size());
      row.mean_nodes = nodes.mean();
      rows.push_back(row);
    }
  }
  return rows;
}

// --- collisions ---------------------------------------------------------------

struct CollisionSweepConfig {
  Duration w_min = 1ms;
  Duration w_max = 50ms;
  Duration w_step = 1ms;
  std::vector<Duration> blocks{192us, 480us};
  int contenders = 5;
  std::int64_t runs = 100000;
  std::optional<int> levels;
  std::uint64_t seed = 1;
};

struct CollisionRow {
  Duration window{};
  Duration block{};
  int contenders = 0;
  double closed_form = 0.0;
  CollisionEstimate simulated;
};

inline std::vector<CollisionRow> collision_sweep(const CollisionSweepConfig& cfg) {
  if (cfg.w_step <= Duration::zero() || cfg.w_min > cfg.w_max || cfg.blocks.empty())
    throw Error(ErrorCode::ConfigError, "empty window sweep");
  if (cfg.contenders < 1 || cfg.runs < 1) throw Error(ErrorCode::ConfigError, "contenders and runs must be positive");
  std::vector<CollisionRow> out;
  std::uint64_t k = 0;
  for (Duration block : cfg.blocks)
    for (Duration w = cfg.w_min; w <= cfg.w_max; w += cfg.w_step, ++k) {
      if (w <= block) continue;
      ContentionConfig cc{w, block, cfg.contenders, cfg.levels, 0.0};
      out.push_back({w, block, cfg.contenders, collision_probability(cc),
                     simulate_collision(cc, cfg.runs, replication_seed(cfg.seed, k))});
    }
  return out;
}

// --- flooding -----------------------------------------------------------------

struct FloodSweepConfig {
  int rows = 5;
  int cols = 5;
  double spacing = 25.0;
  double range = 25.0;
  NodeId initiator = 0;
  std::optional<NodeId> source;  // opposite corner when empty
  std::size_t runs = 1000;
  FloodOptions options;
  ProtocolConstants constants;
  std::uint64_t seed = 1;
};

struct FloodRun {
  std::uint64_t seed = 0;
  FloodReport report;
  bool all_reached = false;
  bool single_relay = false;  // every node but the initiator and the source sent once
  Duration source_first_rx{};
};

inline std::vector<FloodRun> flood_sweep(const FloodSweepConfig& cfg) {
  const Topology topo = make_grid(cfg.rows, cfg.cols, cfg.spacing, cfg.range);
  const NodeId source = cfg.source.value_or(static_cast<NodeId>(cfg.rows * cfg.cols - 1));
  std::vector<FloodRun> out;
  for (std::size_t i = 0; i < cfg.runs; ++i) {
    FloodRun r;
    r.seed = replication_seed(cfg.seed, i);
    r.report = simulate_flood(topo, cfg.initiator, source, cfg.constants, r.seed, cfg.options);
    r.all_reached = r.report.reached.size() == topo.size();
    r.single_relay = true;
    for (const FloodNodeRecord& n : r.report.nodes)
      if (n.id != cfg.initiator && n.id != source && n.tx_count != 1) r.single_relay = false;
    const auto& src = r.report.at(topo, source);
    r.source_first_rx = src.first_rx.value_or(SimTime::max());
    out.push_back(std::move(r));
  }
  return out;
}

// --- repeated queries ---------------------------------------------------------

/// Sixteen nodes on a jittered 4 x 4 layout, 20 m apart, for -25 dBm radios.
inline Topology demo_topology(double range = 25.0) {
  static const double jitter[16][2] = {{0, 0},  {2, -1}, {-1, 2}, {1, 1},  {-2, 1}, {1, -2}, {3, 0},  {0, 2},
                                       {1, 3},  {-1, 0}, {2, 2},  {0, -3}, {-1, 1}, {2, 0},  {0, -1}, {-2, 2}};
  std::vector<Node> nodes;
  for (int i = 0; i < 16; ++i)
    nodes.push_back({static_cast<NodeId>(i), {(i % 4) * 20.0 + 10.0 + jitter[i][0], (i / 4) * 20.0 + 10.0 + jitter[i][1]}});
  return build_udg(std::move(nodes), range);
}

/// One query per rotation, cycling through the nodes in id order.
inline std::vector<ScenarioReport> run_rotations(const ScenarioConfig& base, std::size_t rotations) {
  std::vector<NodeId> ids;
  for (const Node& n : base.topology.nodes()) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  std::vector<ScenarioReport> out;
  for (std::size_t k = 0; k < rotations; ++k) {
    ScenarioConfig cfg = base;
    cfg.source = ids[k % ids.size()];
    cfg.seed = replication_seed(base.seed, k);
    out.push_back(run_scenario(cfg));
  }
  return out;
}

}  // namespace wsn
