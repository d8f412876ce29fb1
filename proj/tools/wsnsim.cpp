// wsnsim: command-line front end.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsn/wsn.hpp"

namespace fs = std::filesystem;
using namespace wsn;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string config;
  std::string out = "out";
  bool seed_set = false;
};

/// Collects output files and writes the run manifest next to them.
class Outputs {
 public:
  Outputs(std::string command, const Globals& g, std::vector<std::string> args)
      : command_(std::move(command)), g_(g), args_(std::move(args)) {
    fs::create_directories(g.out);
  }

  std::ofstream open(const std::string& name) {
    files_.push_back(name);
    std::ofstream f(fs::path(g_.out) / name, std::ios::binary);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + (fs::path(g_.out) / name).string());
    f << std::setprecision(10);
    return f;
  }

  void manifest(std::uint64_t seed, std::uint64_t replications) {
    nlohmann::ordered_json m;
    m["tool"] = "wsnsim";
    m["version"] = WSN_VERSION;
    m["command"] = command_;
    m["config"] = g_.config.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(g_.config);
    m["seed"] = seed;
    m["replications"] = replications;
    m["output_dir"] = g_.out;
    m["args"] = args_;
    m["outputs"] = files_;
    std::ofstream f(fs::path(g_.out) / "manifest.json", std::ios::binary);
    f << m.dump(2) << "\n";
  }

 private:
  std::string command_;
  const Globals& g_;
  std::vector<std::string> args_;
  std::vector<std::string> files_;
};

Ini config_of(const Globals& g) { return g.config.empty() ? Ini{} : load_ini(g.config); }

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// --- analyze --------------------------------------------------------------------

struct AnalyzeArgs {
  std::string power;
  bool csv = false;
  double battery_j = 10000.0;
  int neighbors = 5;
};

int cmd_analyze(const Globals& g, const AnalyzeArgs& a, const std::vector<std::string>& argv) {
  ProtocolConstants c;
  apply_constants(config_of(g), c);
  std::vector<TxPower> powers{TxPower::DbmMinus25, TxPower::Dbm0};
  if (!a.power.empty()) {
    auto p = parse_tx_power(a.power);
    if (!p) throw CLI::ValidationError("--power", "expected 0dBm or -25dBm, got '" + a.power + "'");
    powers = {*p};
  }

  struct Line {
    std::string quantity, unit, column;
    double value;
  };
  std::vector<Line> lines;
  lines.push_back({"duty_cycle", "percent", "", 100.0 * duty_cycle(c)});
  for (TxPower p : powers) {
    const RadioPowerTable pw = power_table(p);
    const PhaseEnergy e = phase_energy(pw, c, a.neighbors, measured_preamble_mJ(p));
    const std::string col = to_string(p);
    lines.push_back({"E_preamb", "mJ", col, e.preamble_mJ});
    lines.push_back({"E_Tx", "mJ", col, e.tx_mJ});
    lines.push_back({"E_comp", "mJ", col, e.comp_mJ});
    lines.push_back({"E_Rx", "mJ", col, e.rx_mJ});
    lines.push_back({"E_packet", "mJ", col, e.total_mJ()});
    lines.push_back({"lifetime_idle", "h", col, lifetime_hours(a.battery_j, pw.poll_mW)});
    lines.push_back({"lifetime_listen", "h", col, lifetime_hours(a.battery_j, pw.listen_mW)});
    lines.push_back({"idle_sampling_average", "mW", col, sampling_average_mW(pw, c)});
  }
  lines.push_back({"v_max_bs", "km/h", "", v_max_bs(c)});
  RealTimeParams edge;
  RealTimeParams diag;
  diag.traverse_m = 190.0;
  lines.push_back({"v_max_network_edge", "km/h", "", v_max_network(c, edge)});
  lines.push_back({"v_max_network_diagonal", "km/h", "", v_max_network(c, diag)});

  Outputs out("analyze", g, argv);
  auto csv = out.open("analyze.csv");
  csv << "quantity,power,unit,value\n";
  for (const Line& l : lines) csv << l.quantity << ',' << l.column << ',' << l.unit << ',' << l.value << '\n';

  if (a.csv) {
    std::cout << "quantity,power,unit,value\n";
    for (const Line& l : lines) std::cout << l.quantity << ',' << l.column << ',' << l.unit << ',' << l.value << '\n';
  } else {
    for (const Line& l : lines) {
      std::string name = l.quantity + (l.column.empty() ? "" : " [" + l.column + "]");
      std::cout << std::left << std::setw(34) << name << std::right << std::setw(12) << fixed(l.value, 3) << ' '
                << l.unit << '\n';
    }
    for (const ConstraintViolation& v : validate_constants(c))
      std::cout << "warning: " << v.constraint << " (" << v.detail << ")\n";
  }
  out.manifest(g.seed, 0);
  return 0;
}

// --- collisions -----------------------------------------------------------------

struct CollisionArgs {
  std::optional<double> w_min_ms, w_max_ms, w_step_ms;
  std::optional<int> contenders, levels;
  std::optional<std::int64_t> runs;
  std::string blocks_us;
};

int cmd_collisions(const Globals& g, const CollisionArgs& a, const std::vector<std::string>& argv) {
  CollisionSweepConfig cfg;
  cfg.seed = g.seed;
  const Ini ini = config_of(g);
  apply_collision_sweep(ini, cfg);
  if (g.seed_set) cfg.seed = g.seed;
  auto ms = [](double v) { return Duration(static_cast<std::int64_t>(v * 1000.0 + 0.5)); };
  if (a.w_min_ms) cfg.w_min = ms(*a.w_min_ms);
  if (a.w_max_ms) cfg.w_max = ms(*a.w_max_ms);
  if (a.w_step_ms) cfg.w_step = ms(*a.w_step_ms);
  if (a.contenders) cfg.contenders = *a.contenders;
  if (a.levels) cfg.levels = *a.levels;
  if (a.runs) cfg.runs = *a.runs;
  if (!a.blocks_us.empty()) {
    cfg.blocks.clear();
    for (double b : parse_list(a.blocks_us)) cfg.blocks.push_back(Duration(static_cast<std::int64_t>(b)));
  }
  std::vector<CollisionRow> rows;
  try {
    rows = collision_sweep(cfg);
  } catch (const Error& e) {
    throw CLI::ValidationError("sweep", e.what());
  }

  Outputs out("collisions", g, argv);
  auto csv = out.open("collisions.csv");
  csv << "window_ms,block_us,contenders,levels,p_closed_form,p_simulated,ci95_low,ci95_high,runs\n";
  for (const CollisionRow& r : rows) {
    const auto [lo, hi] = r.simulated.interval();
    csv << to_ms(r.window) << ',' << r.block.count() << ',' << r.contenders << ','
        << (cfg.levels ? std::to_string(*cfg.levels) : "") << ',' << r.closed_form << ','
        << r.simulated.probability() << ',' << lo << ',' << hi << ',' << r.simulated.runs << '\n';
  }
  std::cout << "wrote " << rows.size() << " rows to " << (fs::path(g.out) / "collisions.csv").string() << '\n';
  for (Duration block : cfg.blocks) {
    const Duration w = min_window(0.1, block, cfg.contenders);
    std::cout << "P < 0.1 for " << cfg.contenders << " contenders, block " << block.count() << " us: W >= "
              << fixed(to_ms(w), 3) << " ms\n";
  }
  out.manifest(cfg.seed, static_cast<std::uint64_t>(cfg.runs));
  return 0;
}

// --- route-sim ------------------------------------------------------------------

struct RouteArgs {
  std::string preset = "random-graph";
  std::optional<std::size_t> runs;
  std::optional<unsigned> threads;
  std::string speeds, degrees, mobility, coords, restart, source;
};

int cmd_route_sim(const Globals& g, const RouteArgs& a, const std::vector<std::string>& argv) {
  RouteSweepConfig cfg = route_preset(a.preset);
  cfg.seed = g.seed;
  apply_route_sweep(config_of(g), cfg);
  if (g.seed_set) cfg.seed = g.seed;
  if (a.runs) cfg.runs = *a.runs;
  if (a.threads) cfg.threads = *a.threads;
  if (!a.speeds.empty()) cfg.speeds = parse_list(a.speeds);
  if (!a.degrees.empty()) cfg.degrees = parse_list(a.degrees);
  if (!a.mobility.empty()) cfg.mobility = parse_mobility(a.mobility);
  if (!a.coords.empty()) cfg.coords = parse_coord_mode(a.coords);
  if (!a.restart.empty()) cfg.restart = parse_restart(a.restart);
  if (!a.source.empty()) cfg.source = parse_source(a.source);

  const auto rows = route_sweep(cfg);
  Outputs out("route-sim", g, argv);
  auto csv = out.open("summary.csv");
  csv << "graph,mobility,coords,speed_units_per_round,degree,runs,mean_restarts,restarts_ci95,mean_hops,hops_ci95,"
         "miss_ratio,mean_nodes\n";
  for (const RouteSweepRow& r : rows)
    csv << to_string(cfg.graph) << ',' << to_string(cfg.mobility) << ',' << to_string(cfg.coords) << ','
        << r.speed << ',' << r.degree << ',' << r.runs << ',' << r.restarts.mean << ',' << r.restarts.half_width
        << ',' << r.hops.mean << ',' << r.hops.half_width << ',' << r.miss_ratio << ',' << r.mean_nodes << '\n';
  std::cout << std::left << std::setw(8) << "speed" << std::setw(8) << "degree" << std::setw(20) << "restarts"
            << std::setw(20) << "hops" << "miss\n";
  for (const RouteSweepRow& r : rows)
    std::cout << std::left << std::setw(8) << fixed(r.speed, 2) << std::setw(8) << fixed(r.degree, 2) << std::setw(20)
              << (fixed(r.restarts.mean, 3) + " +- " + fixed(r.restarts.half_width, 3)) << std::setw(20)
              << (fixed(r.hops.mean, 3) + " +- " + fixed(r.hops.half_width, 3)) << fixed(r.miss_ratio, 4) << '\n';
  out.manifest(cfg.seed, cfg.runs);
  return 0;
}

// --- flood-sim ------------------------------------------------------------------

struct FloodArgs {
  std::optional<std::size_t> runs;
  std::optional<int> rows, cols, initiator;
  std::string source;
  bool collisions = false;
};

int cmd_flood_sim(const Globals& g, const FloodArgs& a, const std::vector<std::string>& argv) {
  FloodSweepConfig cfg;
  cfg.seed = g.seed;
  apply_flood_sweep(config_of(g), cfg);
  if (g.seed_set) cfg.seed = g.seed;
  if (a.runs) cfg.runs = *a.runs;
  if (a.rows) cfg.rows = *a.rows;
  if (a.cols) cfg.cols = *a.cols;
  if (a.initiator) cfg.initiator = static_cast<NodeId>(*a.initiator);
  if (!a.source.empty()) cfg.source = parse_source(a.source);
  if (a.collisions) cfg.options.collisions = true;

  const auto runs = flood_sweep(cfg);
  const Topology topo = make_grid(cfg.rows, cfg.cols, cfg.spacing, cfg.range);
  const int hops = (cfg.rows - 1) + (cfg.cols - 1);
  const Duration bound = flood_bound(hops, cfg.constants);

  Outputs out("flood-sim", g, argv);
  auto csv = out.open("flood.csv");
  csv << "run,seed,source_first_rx_ms,completion_ms,bound_ms,within_bound,all_reached,single_relay\n";
  std::size_t ok = 0;
  Accumulator first;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const FloodRun& r = runs[i];
    const bool within = r.source_first_rx <= bound;
    ok += within && r.all_reached && r.single_relay;
    first.add(to_ms(r.source_first_rx));
    csv << i << ',' << r.seed << ',' << to_ms(r.source_first_rx) << ',' << to_ms(r.report.completion) << ','
        << to_ms(bound) << ',' << within << ',' << r.all_reached << ',' << r.single_relay << '\n';
  }
  if (!runs.empty()) {
    auto nodes = out.open("nodes.csv");
    nodes << "id,first_rx_ms,tx_start_ms,tx_count,copies_heard,backoff_restarts\n";
    for (const FloodNodeRecord& n : runs.front().report.nodes)
      nodes << int(n.id) << ',' << (n.first_rx ? std::to_string(to_ms(*n.first_rx)) : "") << ','
            << (n.tx_start ? std::to_string(to_ms(*n.tx_start)) : "") << ',' << n.tx_count << ','
            << n.copies_heard << ',' << n.backoff_restarts << '\n';
  }
  auto dot = out.open("graph.dot");
  write_dot(dot, edges_of(topo), "grid");
  const Summary s = first.summary();
  std::cout << runs.size() << " floods, source first reception " << fixed(s.mean, 2) << " +- "
            << fixed(s.half_width, 2) << " ms (bound " << fixed(to_ms(bound), 1) << " ms), " << ok
            << " runs within bound with every node reached and relaying once\n";
  out.manifest(cfg.seed, cfg.runs);
  return 0;
}

// --- demo -----------------------------------------------------------------------

struct DemoArgs {
  std::optional<std::size_t> rotations;
  std::string topology;
  std::optional<double> speed_kmh;
  bool loss_free = false;
};

int cmd_demo(const Globals& g, const DemoArgs& a, const std::vector<std::string>& argv) {
  Ini ini = config_of(g);
  if (!a.topology.empty()) {
    ini.put("topology.kind", "csv");
    ini.put("topology.file", a.topology);
  }
  if (a.speed_kmh) ini.put("mobility.speed_kmh", *a.speed_kmh);
  ScenarioConfig cfg;
  cfg.seed = g.seed;
  std::size_t rotations = 16;
  apply_scenario(ini, cfg, rotations);
  if (g.seed_set) cfg.seed = g.seed;
  if (a.rotations) rotations = *a.rotations;
  if (a.loss_free) cfg.ack_collisions = false;

  const auto reports = run_rotations(cfg, rotations);
  Outputs out("demo", g, argv);
  auto dot = out.open("graph.dot");
  write_dot(dot, discovered_graph(reports), "discovered");

  auto csv = out.open("demo.csv");
  csv << "rotation,query,delivered,outcome,hops,restarts,exchanges,flood_start_ms,routing_start_ms,end_ms\n";
  auto tlf = out.open("timeline.csv");
  tlf << "rotation,node,state,start_us,end_us\n";
  auto en = out.open("energy.csv");
  en << "rotation,node,energy_mJ\n";
  const StatePowers pw = state_powers(power_table(cfg.power), measured_preamble_mJ(cfg.power), cfg.constants.D_RRp);
  std::size_t delivered = 0;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const ScenarioReport& r = reports[k];
    delivered += r.delivered;
    csv << k << ',' << int(r.query) << ',' << r.delivered << ',' << to_string(r.route.outcome) << ','
        << r.route.hops << ',' << r.route.restarts << ',' << r.hops.size() << ',' << to_ms(r.flood_start) << ','
        << to_ms(r.routing_start) << ',' << to_ms(r.end) << '\n';
    for (const auto& [id, segs] : r.timeline) {
      for (const RadioSegment& s : segs)
        tlf << k << ',' << int(id) << ',' << to_string(s.state) << ',' << s.start.count() << ',' << s.end.count()
            << '\n';
      en << k << ',' << int(id) << ',' << energy_mJ(segs, pw) << '\n';
    }
  }
  std::cout << delivered << "/" << reports.size() << " queries delivered, "
            << discovered_graph(reports).size() << " links discovered\n";
  out.manifest(cfg.seed, rotations);
  return 0;
}

// --- codec ----------------------------------------------------------------------

struct CodecArgs {
  std::string kind = "micro";
  std::string preamble = "RRp";
  unsigned remaining = 0;
  int src = 0;
  int seq = 0;
  int payload_byte = 0;
  std::string traversed, neighbors;
  std::vector<std::string> hex;
};

PreambleKind parse_preamble(const std::string& s) {
  if (s == "DRp") return PreambleKind::DRp;
  if (s == "BRp") return PreambleKind::BRp;
  if (s == "RRp") return PreambleKind::RRp;
  throw CLI::ValidationError("--preamble", "expected DRp, BRp or RRp");
}

std::vector<NodeId> id_list(const std::string& s) {
  std::vector<NodeId> out;
  for (double v : parse_list(s)) {
    if (v < 0 || v > 255 || v != static_cast<int>(v)) throw Error(ErrorCode::ConfigError, "bad node id in list");
    out.push_back(static_cast<NodeId>(v));
  }
  return out;
}

int cmd_codec_encode(const Globals& g, const CodecArgs& a, const std::vector<std::string>& argv) {
  Frame f;
  if (a.kind == "micro") f = Frame::micro(parse_preamble(a.preamble), a.remaining, static_cast<std::uint16_t>(a.src),
                                          static_cast<std::uint8_t>(a.payload_byte));
  else if (a.kind == "ack") f = Frame::ack(static_cast<std::uint16_t>(a.src), static_cast<std::uint8_t>(a.seq));
  else if (a.kind == "data")
    f = Frame::data(static_cast<std::uint16_t>(a.src),
                    encode_data_payload({id_list(a.traversed), id_list(a.neighbors)}),
                    static_cast<std::uint8_t>(a.seq));
  else throw CLI::ValidationError("--kind", "expected micro, ack or data");
  const std::string hex = to_hex(encode_frame(f));
  Outputs out("codec encode", g, argv);
  out.open("frame.hex") << hex << '\n';
  std::cout << hex << '\n';
  out.manifest(g.seed, 0);
  return 0;
}

int cmd_codec_decode(const Globals& g, const CodecArgs& a, const std::vector<std::string>& argv) {
  std::string text;
  for (const std::string& h : a.hex) {
    if (fs::exists(h)) {
      std::ifstream in(h);
      text += std::string(std::istreambuf_iterator<char>(in), {}) + "\n";
    } else {
      text += h + " ";
    }
  }
  const auto bytes = from_hex(text);
  const Frame f = decode_frame(bytes);
  std::ostringstream s;
  s << "kind " << to_string(f.kind) << "\nsrc 0x" << std::hex << std::setw(4) << std::setfill('0') << f.src
    << std::dec << std::setfill(' ') << '\n';
  if (f.kind == FrameKind::MicroFrame) {
    s << "preamble " << to_string(f.preamble) << "\nremaining " << f.remaining << "\npayload "
      << int(f.payload.at(0)) << '\n';
  } else {
    s << "seq " << int(f.seq) << '\n';
  }
  if (f.kind == FrameKind::Data) {
    const DataPayload p = decode_data_payload(f.payload);
    s << "traversed";
    for (NodeId n : p.traversed) s << ' ' << int(n);
    s << "\nneighbors";
    for (NodeId n : p.neighbors) s << ' ' << int(n);
    s << '\n';
  }
  Outputs out("codec decode", g, argv);
  out.open("frame.txt") << s.str();
  std::cout << s.str();
  out.manifest(g.seed, 0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobile-sink sensor network simulator"};
  app.set_version_flag("--version", WSN_VERSION);
  app.require_subcommand(1);
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Base seed")->capture_default_str();
  app.add_option("--config", g.config, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  std::vector<std::string> args(argv + 1, argv + argc);
  int rc = 0;

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Energy, lifetime and speed bounds");
  analyze->add_option("--power", aa.power, "0dBm or -25dBm (default: both)");
  analyze->add_flag("--csv", aa.csv, "Machine-readable output");
  analyze->add_option("--battery", aa.battery_j, "Battery energy in J")->capture_default_str();
  analyze->add_option("--neighbors", aa.neighbors, "Neighbors per hop exchange")->capture_default_str();
  analyze->callback([&] { rc = cmd_analyze(g, aa, args); });

  CollisionArgs ca;
  auto* coll = app.add_subcommand("collisions", "Collision probability against the contention window");
  coll->add_option("--w-min-ms", ca.w_min_ms, "First window");
  coll->add_option("--w-max-ms", ca.w_max_ms, "Last window");
  coll->add_option("--w-step-ms", ca.w_step_ms, "Window step");
  coll->add_option("--contenders", ca.contenders, "Number of contenders");
  coll->add_option("--levels", ca.levels, "Discrete backoff levels");
  coll->add_option("--runs", ca.runs, "Draws per point");
  coll->add_option("--blocks-us", ca.blocks_us, "Blocking widths, comma separated");
  coll->callback([&] { rc = cmd_collisions(g, ca, args); });

  RouteArgs ra;
  auto* rsim = app.add_subcommand("route-sim", "Round-based routing sweeps");
  std::string presets;
  for (const auto& p : route_presets()) presets += (presets.empty() ? "" : ", ") + p;
  rsim->add_option("--preset", ra.preset, "One of: " + presets)->capture_default_str();
  rsim->add_option("--runs", ra.runs, "Replications per point");
  rsim->add_option("--threads", ra.threads, "Worker threads (0: all cores)");
  rsim->add_option("--speeds", ra.speeds, "Sink speeds, comma separated");
  rsim->add_option("--degrees", ra.degrees, "Average degrees, comma separated");
  rsim->add_option("--mobility", ra.mobility, "static, bounce, edge or diagonal");
  rsim->add_option("--coords", ra.coords, "physical or virtual");
  rsim->add_option("--restart", ra.restart, "arrival or exhausted");
  rsim->add_option("--source", ra.source, "Node id or random");
  rsim->callback([&] { rc = cmd_route_sim(g, ra, args); });

  FloodArgs fa;
  auto* fsim = app.add_subcommand("flood-sim", "Broadcast request flooding on a grid");
  fsim->add_option("--runs", fa.runs, "Seeded floods");
  fsim->add_option("--rows", fa.rows, "Grid rows");
  fsim->add_option("--cols", fa.cols, "Grid columns");
  fsim->add_option("--initiator", fa.initiator, "Initiating node");
  fsim->add_option("--source", fa.source, "Source node (default: opposite corner)");
  fsim->add_flag("--collisions", fa.collisions, "Lose overlapping receptions");
  fsim->callback([&] { rc = cmd_flood_sim(g, fa, args); });

  DemoArgs da;
  auto* demo = app.add_subcommand("demo", "Repeated end-to-end queries building the connectivity graph");
  demo->add_option("--rotations", da.rotations, "Queries, one per sink pass");
  demo->add_option("--topology", da.topology, "CSV of id,x,y")->check(CLI::ExistingFile);
  demo->add_option("--speed-kmh", da.speed_kmh, "Sink speed");
  demo->add_flag("--loss-free", da.loss_free, "Disable ACK collisions");
  demo->callback([&] { rc = cmd_demo(g, da, args); });

  CodecArgs cd;
  auto* codec = app.add_subcommand("codec", "Frame encoder and decoder");
  codec->require_subcommand(1);
  auto* enc = codec->add_subcommand("encode", "Encode one frame to hex");
  enc->add_option("--kind", cd.kind, "micro, ack or data")->capture_default_str();
  enc->add_option("--preamble", cd.preamble, "DRp, BRp or RRp")->capture_default_str();
  enc->add_option("--remaining", cd.remaining, "Micro-frames still to come");
  enc->add_option("--src", cd.src, "Source address");
  enc->add_option("--seq", cd.seq, "Sequence byte");
  enc->add_option("--payload", cd.payload_byte, "Micro-frame payload byte");
  enc->add_option("--traversed", cd.traversed, "DATA route header, comma separated");
  enc->add_option("--neighbors", cd.neighbors, "DATA neighbor list, comma separated");
  enc->callback([&] { rc = cmd_codec_encode(g, cd, args); });
  auto* dec = codec->add_subcommand("decode", "Decode hex bytes or a hex file");
  dec->add_option("hex", cd.hex, "Hex bytes or file")->required();
  dec->callback([&] { rc = cmd_codec_decode(g, cd, args); });

  try {
    app.parse(argc, argv);
    (void)seed_opt;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
