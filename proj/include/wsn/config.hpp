#pragma once

// INI configuration and named presets.
//
//   [run]        seed, runs, threads
//   [constants]  any protocol timer in microseconds, e.g. W_BR_us = 10000
//   [topology]   kind = grid | random | csv | demo, rows, cols, spacing, range,
//                field, file
//   [sweep]      degrees, speeds (comma lists)
//   [mobility]   model, speed_kmh, sink_range, random_phase
//   [routing]    coords, centroid_rounds, restart, source, round_limit
//   [collisions] w_min_ms, w_max_ms, w_step_ms, blocks_us, contenders, levels
//   [flood]      initiator, source, collisions, retries
//   [scenario]   power, transit_out_ms, transit_back_ms, ack_collisions,
//                data_loss, silent_retries, ack_jitter_ms, idle, rotations

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "wsn/experiments.hpp"

namespace wsn {

using Ini = boost::property_tree::ptree;

inline Ini parse_ini(const std::string& text) {
  // read_ini only knows whole-line comments; drop trailing "  ; note" too.
  std::string cleaned;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    for (std::size_t i = 1; i < line.size(); ++i)
      if ((line[i] == ';' || line[i] == '#') && std::isspace(static_cast<unsigned char>(line[i - 1]))) {
        line.erase(i);
        break;
      }
    cleaned += line;
    cleaned += '\n';
  }
  Ini ini;
  std::istringstream in(cleaned);
  try {
    boost::property_tree::read_ini(in, ini);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return ini;
}

/// Rejects sections and keys nothing reads. [constants] is checked when applied.
inline void check_keys(const Ini& ini) {
  static const std::map<std::string, std::set<std::string>> known{
      {"run", {"seed", "runs", "threads"}},
      {"constants", {}},
      {"topology", {"kind", "rows", "cols", "spacing", "range", "field", "file"}},
      {"sweep", {"degrees", "speeds"}},
      {"mobility", {"model", "speed_kmh", "sink_range", "random_phase"}},
      {"routing", {"coords", "centroid_rounds", "restart", "source", "round_limit"}},
      {"collisions", {"w_min_ms", "w_max_ms", "w_step_ms", "blocks_us", "contenders", "levels"}},
      {"flood", {"initiator", "source", "collisions", "retries"}},
      {"scenario", {"power", "transit_out_ms", "transit_back_ms", "ack_collisions", "data_loss", "silent_retries",
                    "ack_jitter_ms", "idle", "rotations"}},
  };
  for (const auto& [section, body] : ini) {
    auto it = known.find(section);
    if (it == known.end()) throw Error(ErrorCode::ConfigError, "unknown section [" + section + "]");
    if (section == "constants") continue;
    for (const auto& kv : body)
      if (!it->second.count(kv.first))
        throw Error(ErrorCode::ConfigError, "unknown key " + section + "." + kv.first);
  }
}

inline Ini load_ini(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot read " + path);
  std::ostringstream text;
  text << f.rdbuf();
  Ini ini = parse_ini(text.str());
  check_keys(ini);
  return ini;
}

template <class T>
std::optional<T> get(const Ini& ini, const std::string& key) {
  auto v = ini.get_optional<std::string>(key);
  if (!v) return std::nullopt;
  try {
    return ini.get<T>(key);
  } catch (const boost::property_tree::ptree_bad_data&) {
    throw Error(ErrorCode::ConfigError, "bad value for " + key + ": '" + *v + "'");
  }
}

template <class T>
void assign(const Ini& ini, const std::string& key, T& out) {
  if (auto v = get<T>(ini, key)) out = *v;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::ConfigError, "bad boolean for " + key + ": '" + v + "'");
}

inline void assign_bool(const Ini& ini, const std::string& key, bool& out) {
  if (auto v = ini.get_optional<std::string>(key)) out = parse_bool(key, *v);
}

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "bad number '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw Error(ErrorCode::ConfigError, "bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

inline Duration us_value(const Ini& ini, const std::string& key, Duration fallback) {
  if (auto v = get<std::int64_t>(ini, key)) return Duration(*v);
  return fallback;
}

inline Duration ms_value(const Ini& ini, const std::string& key, Duration fallback) {
  if (auto v = get<double>(ini, key)) return Duration(static_cast<std::int64_t>(*v * 1000.0 + 0.5));
  return fallback;
}

inline void apply_constants(const Ini& ini, ProtocolConstants& c) {
  struct Field {
    const char* name;
    Duration ProtocolConstants::*member;
  };
  static const Field fields[] = {
      {"D_mf", &ProtocolConstants::D_mf},     {"T_mf", &ProtocolConstants::T_mf},
      {"D_cca", &ProtocolConstants::D_cca},   {"T_cca", &ProtocolConstants::T_cca},
      {"D_ACK", &ProtocolConstants::D_ACK},   {"D_DATA", &ProtocolConstants::D_DATA},
      {"D_DRp", &ProtocolConstants::D_DRp},   {"T_DR", &ProtocolConstants::T_DR},
      {"T_BRp", &ProtocolConstants::T_BRp},   {"D_BRp", &ProtocolConstants::D_BRp},
      {"W_BR", &ProtocolConstants::W_BR},     {"B_SRC", &ProtocolConstants::B_SRC},
      {"D_RRp", &ProtocolConstants::D_RRp},   {"W_RR", &ProtocolConstants::W_RR},
      {"B_RR", &ProtocolConstants::B_RR},     {"D_RxTx", &ProtocolConstants::D_RxTx},
  };
  auto section = ini.get_child_optional("constants");
  if (!section) return;
  for (const auto& [key, value] : *section) {
    bool known = false;
    for (const Field& f : fields)
      if (key == std::string(f.name) + "_us") {
        c.*f.member = us_value(*section, key, c.*f.member);
        known = true;
      }
    if (key == "bitrate_bps") {
      assign(*section, key, c.bitrate_bps);
      known = true;
    } else if (key == "mf_count") {
      assign(*section, key, c.mf_count);
      known = true;
    }
    if (!known) throw Error(ErrorCode::ConfigError, "unknown constant '" + key + "'");
  }
}

inline RestartTrigger parse_restart(const std::string& s) {
  if (s == "arrival") return RestartTrigger::Arrival;
  if (s == "exhausted") return RestartTrigger::Exhausted;
  throw Error(ErrorCode::ConfigError, "unknown restart trigger '" + s + "' (arrival, exhausted)");
}

inline IdleModel parse_idle(const std::string& s) {
  if (s == "bursts") return IdleModel::SampleBursts;
  if (s == "poll") return IdleModel::PollAverage;
  throw Error(ErrorCode::ConfigError, "unknown idle model '" + s + "' (bursts, poll)");
}

inline std::optional<NodeId> parse_source(const std::string& s) {
  if (s == "random" || s.empty()) return std::nullopt;
  const auto v = parse_list(s);
  if (v.size() != 1 || v[0] < 0 || v[0] > 253 || v[0] != static_cast<int>(v[0]))
    throw Error(ErrorCode::ConfigError, "bad source '" + s + "'");
  return static_cast<NodeId>(v[0]);
}

// --- presets ------------------------------------------------------------------

inline const std::vector<std::string>& route_presets() {
  static const std::vector<std::string> names = {"random-graph", "grid25", "grid25-crossing"};
  return names;
}

/// Sink advance per routing round for a plane at `kmh`.
inline double plane_step_per_round(double kmh, const ProtocolConstants& c = {}) {
  return kmh_to_mps(kmh) * to_seconds(c.D_RRp + c.W_RR + c.D_DATA);
}

inline RouteSweepConfig route_preset(const std::string& name) {
  RouteSweepConfig cfg;
  if (name == "random-graph") return cfg;
  if (name == "grid25" || name == "grid25-crossing") {
    cfg.graph = GraphKind::Grid;
    cfg.rows = cfg.cols = 5;
    cfg.spacing = 25.0;
    cfg.range = range_for(-25, 1.0);
    cfg.sink_range = 25.0;  // half the 50 m link chord
    cfg.mobility = MobilityModel::EdgeLine;
    cfg.speeds = {0, 2.5, 5, 7.5, 10, 12.5, 15, 20, 25, 30};
    if (name == "grid25-crossing") {
      // One far-corner request, virtual coordinates, plane at 50 km/h.
      cfg.coords = CoordMode::Virtual;
      cfg.source = 24;
      cfg.speeds = {plane_step_per_round(50.0)};
    }
    return cfg;
  }
  std::string list;
  for (const auto& n : route_presets()) list += (list.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::ConfigError, "unknown preset '" + name + "' (" + list + ")");
}

inline void apply_route_sweep(const Ini& ini, RouteSweepConfig& cfg) {
  assign(ini, "run.seed", cfg.seed);
  assign(ini, "run.runs", cfg.runs);
  assign(ini, "run.threads", cfg.threads);
  if (auto k = get<std::string>(ini, "topology.kind")) {
    if (*k == "random") cfg.graph = GraphKind::Random;
    else if (*k == "grid") cfg.graph = GraphKind::Grid;
    else throw Error(ErrorCode::ConfigError, "route-sim topology must be random or grid");
  }
  assign(ini, "topology.rows", cfg.rows);
  assign(ini, "topology.cols", cfg.cols);
  assign(ini, "topology.spacing", cfg.spacing);
  assign(ini, "topology.range", cfg.range);
  assign(ini, "topology.field", cfg.field);
  if (auto v = get<std::string>(ini, "sweep.degrees")) cfg.degrees = parse_list(*v);
  if (auto v = get<std::string>(ini, "sweep.speeds")) cfg.speeds = parse_list(*v);
  if (auto v = get<std::string>(ini, "mobility.model")) cfg.mobility = parse_mobility(*v);
  assign(ini, "mobility.sink_range", cfg.sink_range);
  if (auto v = get<std::string>(ini, "routing.coords")) cfg.coords = parse_coord_mode(*v);
  assign(ini, "routing.centroid_rounds", cfg.centroid_rounds);
  if (auto v = get<std::string>(ini, "routing.restart")) cfg.restart = parse_restart(*v);
  if (auto v = get<std::string>(ini, "routing.source")) cfg.source = parse_source(*v);
  assign(ini, "routing.round_limit", cfg.round_limit);
  assign_bool(ini, "mobility.random_phase", cfg.random_phase);
}

inline void apply_collision_sweep(const Ini& ini, CollisionSweepConfig& cfg) {
  assign(ini, "run.seed", cfg.seed);
  assign(ini, "run.runs", cfg.runs);
  cfg.w_min = ms_value(ini, "collisions.w_min_ms", cfg.w_min);
  cfg.w_max = ms_value(ini, "collisions.w_max_ms", cfg.w_max);
  cfg.w_step = ms_value(ini, "collisions.w_step_ms", cfg.w_step);
  if (auto v = get<std::string>(ini, "collisions.blocks_us")) {
    cfg.blocks.clear();
    for (double b : parse_list(*v)) cfg.blocks.push_back(Duration(static_cast<std::int64_t>(b)));
  }
  assign(ini, "collisions.contenders", cfg.contenders);
  if (auto v = get<int>(ini, "collisions.levels")) cfg.levels = *v;
}

inline void apply_flood_sweep(const Ini& ini, FloodSweepConfig& cfg) {
  assign(ini, "run.seed", cfg.seed);
  assign(ini, "run.runs", cfg.runs);
  apply_constants(ini, cfg.constants);
  assign(ini, "topology.rows", cfg.rows);
  assign(ini, "topology.cols", cfg.cols);
  assign(ini, "topology.spacing", cfg.spacing);
  assign(ini, "topology.range", cfg.range);
  if (auto v = get<int>(ini, "flood.initiator")) cfg.initiator = static_cast<NodeId>(*v);
  if (auto v = get<std::string>(ini, "flood.source")) cfg.source = parse_source(*v);
  assign_bool(ini, "flood.collisions", cfg.options.collisions);
  assign(ini, "flood.retries", cfg.options.initiator_retries);
}

/// Scenario settings for `demo`; `rotations` receives the query count.
inline void apply_scenario(const Ini& ini, ScenarioConfig& cfg, std::size_t& rotations) {
  assign(ini, "run.seed", cfg.seed);
  apply_constants(ini, cfg.constants);
  const std::string kind = get<std::string>(ini, "topology.kind").value_or("");
  double range = get<double>(ini, "topology.range").value_or(range_for(-25, 1.0));
  if (kind == "csv") {
    auto file = get<std::string>(ini, "topology.file");
    if (!file) throw Error(ErrorCode::ConfigError, "topology.file missing");
    cfg.topology = load_topology_csv(*file, range);
  } else if (kind == "grid") {
    const int rows = get<int>(ini, "topology.rows").value_or(5);
    const int cols = get<int>(ini, "topology.cols").value_or(5);
    cfg.topology = make_grid(rows, cols, get<double>(ini, "topology.spacing").value_or(25.0), range);
  } else if (kind == "demo" || kind.empty()) {
    cfg.topology = demo_topology(range);
  } else {
    throw Error(ErrorCode::ConfigError, "demo topology must be demo, grid or csv");
  }
  if (auto v = get<std::string>(ini, "scenario.power")) {
    auto p = parse_tx_power(*v);
    if (!p) throw Error(ErrorCode::ConfigError, "bad power '" + *v + "'");
    cfg.power = *p;
  }
  cfg.transit_out = ms_value(ini, "scenario.transit_out_ms", cfg.transit_out);
  cfg.transit_back = ms_value(ini, "scenario.transit_back_ms", cfg.transit_back);
  assign_bool(ini, "scenario.ack_collisions", cfg.ack_collisions);
  assign(ini, "scenario.data_loss", cfg.data_loss);
  assign(ini, "scenario.silent_retries", cfg.silent_retries);
  cfg.ack_jitter = ms_value(ini, "scenario.ack_jitter_ms", cfg.ack_jitter);
  if (auto v = get<std::string>(ini, "scenario.idle")) cfg.idle = parse_idle(*v);
  assign(ini, "scenario.rotations", rotations);
  if (auto v = get<std::string>(ini, "routing.coords")) cfg.coords = parse_coord_mode(*v);
  assign(ini, "routing.centroid_rounds", cfg.centroid_rounds);
  assign(ini, "mobility.sink_range", cfg.sink_range);

  // The sink crosses the field spanned by the nodes, from the origin corner.
  double side = 0.0;
  for (const Node& n : cfg.topology.nodes()) side = std::max({side, n.position.x, n.position.y});
  side = std::max(side, 1.0);
  cfg.bounds = {{0.0, 0.0}, {side, side}};
  const double kmh = get<double>(ini, "mobility.speed_kmh").value_or(25.0);
  const MobilityModel m = parse_mobility(get<std::string>(ini, "mobility.model").value_or("edge"));
  switch (m) {
    case MobilityModel::Static: cfg.track = SinkTrack::stationary({0.0, 0.0}); break;
    case MobilityModel::Bounce: cfg.track = SinkTrack::bounce(kmh_to_mps(kmh), side, {0.0, 0.0}, 1, 1, cfg.seed); break;
    case MobilityModel::EdgeLine: cfg.track = SinkTrack::edge(side, kmh_to_mps(kmh)); break;
    case MobilityModel::DiagonalLine: cfg.track = SinkTrack::diagonal(side, kmh_to_mps(kmh)); break;
  }
}

}  // namespace wsn
