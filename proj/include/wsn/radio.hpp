#pragma once

// Unit-disk topologies, the measured range table and per-state radio power.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wsn/core.hpp"

namespace wsn {

struct Node {
  NodeId id = 0;
  Position position;
};

/// Immutable unit-disk graph. Nodes are stored in insertion order; `index_of`
/// maps an id back to its slot.
class Topology {
 public:
  Topology() { slot_.fill(-1); }

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  double range() const { return range_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t index) const { return nodes_.at(index); }

  bool contains(NodeId id) const { return slot_[id] >= 0; }

  std::size_t index_of(NodeId id) const {
    if (slot_[id] < 0) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(id));
    return static_cast<std::size_t>(slot_[id]);
  }

  const Position& position(NodeId id) const { return nodes_[index_of(id)].position; }

  /// Neighbor ids in ascending id order.
  const std::vector<NodeId>& neighbors(NodeId id) const { return adjacency_[index_of(id)]; }

  bool adjacent(NodeId a, NodeId b) const {
    const auto& n = neighbors(a);
    return std::binary_search(n.begin(), n.end(), b);
  }

  double average_degree() const {
    if (nodes_.empty()) return 0.0;
    std::size_t total = 0;
    for (const auto& n : adjacency_) total += n.size();
    return static_cast<double>(total) / static_cast<double>(nodes_.size());
  }

  std::size_t max_degree() const {
    std::size_t m = 0;
    for (const auto& n : adjacency_) m = std::max(m, n.size());
    return m;
  }

  /// Ids reachable from `start`, including it, in BFS order.
  std::vector<NodeId> component(NodeId start) const {
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<NodeId> order{start};
    seen[index_of(start)] = true;
    for (std::size_t head = 0; head < order.size(); ++head) {
      for (NodeId v : neighbors(order[head])) {
        const std::size_t i = index_of(v);
        if (!seen[i]) {
          seen[i] = true;
          order.push_back(v);
        }
      }
    }
    return order;
  }

  bool connected() const { return nodes_.empty() || component(nodes_.front().id).size() == nodes_.size(); }

  friend Topology build_udg(std::vector<Node> nodes, double range);
  friend Topology with_node(const Topology& base, Node extra, double link_range);

 private:
  std::vector<Node> nodes_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::array<std::int16_t, 256> slot_{};
  double range_ = 0.0;
};

/// Links every pair at 2-D distance <= range.
inline Topology build_udg(std::vector<Node> nodes, double range) {
  Topology t;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!is_finite(nodes[i].position))
      throw Error(ErrorCode::ConfigError, "non-finite position for node " + std::to_string(nodes[i].id));
    if (t.slot_[nodes[i].id] >= 0)
      throw Error(ErrorCode::DuplicateId, "node " + std::to_string(nodes[i].id));
    t.slot_[nodes[i].id] = static_cast<std::int16_t>(i);
  }
  t.range_ = range;
  t.adjacency_.assign(nodes.size(), {});
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (distance(nodes[i].position, nodes[j].position) <= range) {
        t.adjacency_[i].push_back(nodes[j].id);
        t.adjacency_[j].push_back(nodes[i].id);
      }
  for (auto& n : t.adjacency_) std::sort(n.begin(), n.end());
  t.nodes_ = std::move(nodes);
  return t;
}

/// Copy of `base` plus one node linked to every node within `link_range` of it.
inline Topology with_node(const Topology& base, Node extra, double link_range) {
  if (base.contains(extra.id)) throw Error(ErrorCode::DuplicateId, "node " + std::to_string(extra.id));
  if (!is_finite(extra.position)) throw Error(ErrorCode::ConfigError, "non-finite position");
  Topology t = base;
  const NodeId id = extra.id;
  t.slot_[id] = static_cast<std::int16_t>(t.nodes_.size());
  std::vector<NodeId> own;
  for (std::size_t i = 0; i < t.nodes_.size(); ++i)
    if (distance(t.nodes_[i].position, extra.position) <= link_range) {
      own.push_back(t.nodes_[i].id);
      auto& adj = t.adjacency_[i];
      adj.insert(std::upper_bound(adj.begin(), adj.end(), id), id);
    }
  std::sort(own.begin(), own.end());
  t.nodes_.push_back(extra);
  t.adjacency_.push_back(std::move(own));
  return t;
}

/// rows x cols lattice, id = row * cols + col, origin at (0,0).
inline Topology make_grid(int rows, int cols, double spacing, double range) {
  if (rows <= 0 || cols <= 0 || rows * cols > 255)
    throw Error(ErrorCode::ConfigError, "grid must hold 1..255 nodes");
  std::vector<Node> nodes;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      nodes.push_back({static_cast<NodeId>(r * cols + c), {c * spacing, r * spacing}});
  return build_udg(std::move(nodes), range);
}

/// Probability that two uniform points of a side x side square lie within `range`.
inline double square_link_probability(double side, double range) {
  const double a = range / side;
  if (a >= 1.0) return 1.0;  // not needed beyond the small-range regime
  return 3.14159265358979323846 * a * a - 8.0 / 3.0 * a * a * a + 0.5 * a * a * a * a;
}

/// Node count whose expected average degree on a side x side field equals `degree`.
inline std::size_t nodes_for_degree(double degree, double side, double range) {
  const double n = degree / square_link_probability(side, range) + 1.0;
  return static_cast<std::size_t>(std::lround(n));
}

template <class Rng>
Topology make_random(std::size_t count, double side, double range, Rng& rng) {
  if (count > 255) throw Error(ErrorCode::ConfigError, "at most 255 nodes");
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<Node> nodes;
  nodes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    nodes.push_back({static_cast<NodeId>(i), {x, y}});
  }
  return build_udg(std::move(nodes), range);
}

/// Reads `id,x,y` rows. Blank lines, '#' comments and a non-numeric header are skipped.
inline std::vector<Node> read_nodes_csv(std::istream& in) {
  std::vector<Node> nodes;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    long id;
    double x, y;
    if (!(row >> id >> x >> y)) {
      if (nodes.empty() && lineno == 1) continue;  // header
      throw Error(ErrorCode::ConfigError, "bad topology row " + std::to_string(lineno));
    }
    if (id < 0 || id > 255) throw Error(ErrorCode::ConfigError, "node id out of range: " + std::to_string(id));
    nodes.push_back({static_cast<NodeId>(id), {x, y}});
  }
  return nodes;
}

inline Topology load_topology_csv(const std::string& path, double range) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open " + path);
  return build_udg(read_nodes_csv(in), range);
}

inline void write_dot(std::ostream& out, const std::vector<std::pair<NodeId, NodeId>>& edges,
                      const std::string& name = "wsn") {
  out << "graph " << name << " {\n";
  for (auto [a, b] : edges) out << "  " << int(a) << " -- " << int(b) << ";\n";
  out << "}\n";
}

/// Undirected edges (a < b) in lexicographic order.
inline std::vector<std::pair<NodeId, NodeId>> edges_of(const Topology& t) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const Node& n : t.nodes())
    for (NodeId m : t.neighbors(n.id))
      if (n.id < m) edges.emplace_back(n.id, m);
  std::sort(edges.begin(), edges.end());
  return edges;
}

// --- ranges -----------------------------------------------------------------

struct RangeRow {
  int tx_power_dbm;
  double height_m;
  double range_m;
};

inline const std::vector<RangeRow>& range_table() {
  static const std::vector<RangeRow> rows = {
      {0, 1.0, 100.0},
      {-25, 1.0, 25.0},
      {-25, 0.0, 5.0},
  };
  return rows;
}

inline double range_for(int tx_power_dbm, double height_m) {
  for (const RangeRow& r : range_table())
    if (r.tx_power_dbm == tx_power_dbm && r.height_m == height_m) return r.range_m;
  throw Error(ErrorCode::UnknownConfiguration,
              std::to_string(tx_power_dbm) + " dBm at " + std::to_string(height_m) + " m");
}

// --- power ------------------------------------------------------------------

enum class RadioState : std::uint8_t { Sleep, Poll, Listen, Tx, Rx, Preamble };

inline const char* to_string(RadioState s) {
  switch (s) {
    case RadioState::Sleep: return "sleep";
    case RadioState::Poll: return "poll";
    case RadioState::Listen: return "listen";
    case RadioState::Tx: return "tx";
    case RadioState::Rx: return "rx";
    case RadioState::Preamble: return "preamble";
  }
  return "?";
}

enum class TxPower { Dbm0, DbmMinus25 };

inline std::optional<TxPower> parse_tx_power(const std::string& s) {
  if (s == "0" || s == "0dBm" || s == "0dbm") return TxPower::Dbm0;
  if (s == "-25" || s == "-25dBm" || s == "-25dbm") return TxPower::DbmMinus25;
  return std::nullopt;
}

inline const char* to_string(TxPower p) { return p == TxPower::Dbm0 ? "0dBm" : "-25dBm"; }

/// Milliwatts per radio state for one transmit-power setting.
struct RadioPowerTable {
  double sleep_mW;
  double poll_mW;
  double listen_mW;
  double tx_mW;
  double rx_mW;
};

inline RadioPowerTable power_table(TxPower p) {
  if (p == TxPower::Dbm0) return {8.018, 8.629, 65.833, 66.156, 70.686};
  return {2.735, 3.300, 61.030, 32.807, 65.444};
}

/// Preamble transmission is not a single radio state; its energy is an input
/// (see analysis.hpp), so asking for its power here returns the Tx draw.
inline double state_power(RadioState state, TxPower p) {
  const RadioPowerTable t = power_table(p);
  switch (state) {
    case RadioState::Sleep: return t.sleep_mW;
    case RadioState::Poll: return t.poll_mW;
    case RadioState::Listen: return t.listen_mW;
    case RadioState::Tx: return t.tx_mW;
    case RadioState::Rx: return t.rx_mW;
    case RadioState::Preamble: return t.tx_mW;
  }
  return 0.0;
}

}  // namespace wsn
