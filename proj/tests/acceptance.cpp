// End-to-end acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "support.hpp"
#include "wsn/wsn.hpp"

using namespace wsn;
namespace fs = std::filesystem;

namespace {

struct Check {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<Check> results;

template <class F>
void criterion(int id, const std::string& name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (pass ? "PASS" : "FAIL") << "  " << std::setw(2) << id << "  " << name << "  (" << detail << "; "
            << std::fixed << std::setprecision(1) << s << " s)" << std::endl;
  results.push_back({id, name, pass, detail, s});
}

std::string num(double v, int digits = 3) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(digits) << v;
  return o.str();
}

bool within_rel(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

// A later point may sit below an earlier one only if their intervals overlap.
bool not_below(const Summary& later, const Summary& earlier) {
  return later.mean >= earlier.mean || later.overlaps(earlier);
}

Summary binomial(double p, std::size_t n) {
  Summary s;
  s.n = n;
  s.mean = p;
  s.half_width = 1.96 * std::sqrt(p * (1 - p) / static_cast<double>(n));
  return s;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    out[fs::relative(e.path(), dir).string()] = std::string(std::istreambuf_iterator<char>(in), {});
  }
  return out;
}

}  // namespace

int main() {
  const ProtocolConstants c;

  criterion(1, "collision closed form vs simulation", [&](std::string& d) {
    bool ok = true;
    double worst = 0.0;
    std::string at;
    std::uint64_t k = 0;
    for (Duration block : {192us, 480us})
      for (Duration w : {5ms, 10ms, 20ms, 30ms, 40ms}) {
        const ContentionConfig cc{w, block, 5, std::nullopt, 0.0};
        const double p = collision_probability(cc);
        const auto est = simulate_collision(cc, 100000, replication_seed(1, k++));
        const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(est.runs));
        const double z = std::abs(est.probability() - p) / sigma;
        if (z > worst) {
          worst = z;
          at = std::to_string(w.count() / 1000) + "ms/" + std::to_string(block.count()) + "us";
        }
        ok &= z <= 3.0;
      }
    const double prr = p_rr(ack_contention(c, 5));
    const double pbr = p_br(broadcast_contention(c, 5));
    d = "max |z| " + num(worst, 2) + " at " + at + ", P_RR(30ms) " + num(prr, 4) + ", P_BR(10ms) " + num(pbr, 4);
    return ok && prr < 0.1 && pbr < 0.1;
  });

  criterion(2, "per-hop energy table", [&](std::string& d) {
    const PhaseEnergy lo = phase_energy(TxPower::DbmMinus25, c);
    const PhaseEnergy hi = phase_energy(TxPower::Dbm0, c);
    d = "-25dBm " + num(lo.tx_mJ) + "/" + num(lo.comp_mJ) + "/" + num(lo.rx_mJ) + ", 0dBm " + num(hi.tx_mJ) + "/" +
        num(hi.comp_mJ) + "/" + num(hi.rx_mJ) + " mJ";
    return within_rel(lo.tx_mJ, 2.440, 0.005) && within_rel(hi.tx_mJ, 3.494, 0.005) &&
           within_rel(lo.comp_mJ, 0.592, 0.005) && within_rel(hi.comp_mJ, 1.545, 0.005) &&
           within_rel(lo.rx_mJ, 0.843, 0.005) && within_rel(hi.rx_mJ, 1.796, 0.005);
  });

  criterion(3, "two-node routing timeline energy vs closed form", [&](std::string& d) {
    // Node 1 forwards to node 0, which is the only node in reach of the sink.
    bool ok = true;
    std::ostringstream detail;
    for (TxPower power : {TxPower::DbmMinus25, TxPower::Dbm0}) {
      const PhaseEnergy ref = phase_energy(power, c, 1);
      const StatePowers pw = state_powers(power_table(power), measured_preamble_mJ(power), c.D_RRp);
      double tx = 0, rx = 0;
      int n = 0;
      for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        ScenarioConfig cfg;
        cfg.topology = build_udg({{0, {50, 0}}, {1, {75, 0}}}, 25);
        cfg.power = power;
        cfg.track = SinkTrack::edge(100, kmh_to_mps(10));
        cfg.source = 1;
        cfg.seed = seed;
        const ScenarioReport r = run_scenario(cfg);
        if (r.hops.empty() || r.hops.front().sender != 1 || r.hops.front().receiver != NodeId{0}) continue;
        const HopRecord& h = r.hops.front();
        tx += energy_mJ(r.timeline.at(1), pw, h.start, h.end(c));
        rx += energy_mJ(r.timeline.at(0), pw, h.start, h.end(c));
        ++n;
      }
      if (n < 90) return false;
      tx /= n;
      rx /= n;
      ok &= within_rel(tx, ref.tx_mJ, 0.02) && within_rel(rx, ref.rx_mJ, 0.02);
      detail << to_string(power) << " sender " << num(tx) << " vs " << num(ref.tx_mJ) << ", receiver " << num(rx)
             << " vs " << num(ref.rx_mJ) << " mJ; ";
    }
    d = detail.str() + "N=1";
    return ok;
  });

  criterion(4, "battery lifetime and duty cycle", [&](std::string& d) {
    const double idle = lifetime_hours(10000, 3.300);
    const double listen = lifetime_hours(10000, 61.030);
    const double duty = 100.0 * duty_cycle(c);
    d = num(idle, 1) + " h idle, " + num(listen, 2) + " h listening, duty " + num(duty, 3) + "%";
    return within_rel(idle, 850, 0.02) && within_rel(listen, 45, 0.02) && duty >= 1.0 && duty <= 1.05;
  });

  criterion(5, "real-time speed bounds", [&](std::string& d) {
    const double bs = v_max_bs(c);
    const double net = v_max_network(c);
    d = "base station " + num(bs, 1) + " km/h, network " + num(net, 1) + " km/h";
    return bs >= 500 && bs <= 520 && net >= 130 && net <= 140;
  });

  criterion(6, "flood bound on the 5x5 grid", [&](std::string& d) {
    FloodSweepConfig cfg;
    cfg.runs = 1000;
    const auto runs = flood_sweep(cfg);
    const Duration bound = flood_bound(8, c);
    Duration worst{};
    std::size_t good = 0;
    for (const FloodRun& r : runs) {
      worst = std::max(worst, r.source_first_rx);
      good += r.source_first_rx <= bound && r.all_reached && r.single_relay;
    }
    d = std::to_string(good) + "/1000 runs ok, worst first reception " + num(to_ms(worst), 1) + " ms <= " +
        num(to_ms(bound), 0) + " ms";
    return good == runs.size() && runs.size() == 1000;
  });

  criterion(7, "delivery on connected graphs with a static sink", [&](std::string& d) {
    std::mt19937_64 rng(7);
    int graphs = 0, delivered = 0, connected_ok = 0;
    std::uniform_real_distribution<double> u(0, 1000);
    while (graphs < 600) {
      const Topology t = make_random(20 + rng() % 80, 1000, 200, rng);
      if (!t.connected()) continue;
      // sink next to a random node, coordinates drawn with no relation to geometry
      const Position anchor = t.node(rng() % t.size()).position;
      const Position sink{anchor.x + 50, anchor.y};
      std::vector<Position> coords(t.size());
      for (auto& p : coords) p = {u(rng), u(rng)};
      RouteOptions opt;
      opt.sink_virtual = Position{u(rng), u(rng)};
      SinkTrack still = SinkTrack::stationary(sink);
      const NodeId src = t.node(rng() % t.size()).id;
      const RouteResult r = route(t, coords, src, still, opt);
      ++graphs;
      delivered += r.delivered;
      bool reach = false;
      for (NodeId v : t.component(src)) reach |= distance(t.position(v), sink) <= opt.sink_range;
      connected_ok += reach;
    }
    d = std::to_string(delivered) + "/" + std::to_string(graphs) + " delivered, BFS confirms " +
        std::to_string(connected_ok);
    return delivered == graphs && connected_ok == graphs;
  });

  criterion(8, "random-graph restart and hop trends", [&](std::string& d) {
    RouteSweepConfig cfg = route_preset("random-graph");
    const auto rows = route_sweep(cfg);
    const std::size_t ns = cfg.speeds.size();
    auto at = [&](std::size_t di, std::size_t si) -> const RouteSweepRow& { return rows[di * ns + si]; };
    bool degree_ok = true, speed_ok = true, hops_ok = true;
    for (std::size_t di = 0; di < cfg.degrees.size(); ++di)
      for (std::size_t si = 0; si < ns; ++si) {
        if (si + 1 < ns) {
          speed_ok &= not_below(at(di, si + 1).restarts, at(di, si).restarts);
          hops_ok &= not_below(at(di, si).hops, at(di, si + 1).hops);
        }
        if (di + 1 < cfg.degrees.size()) degree_ok &= not_below(at(di, si).restarts, at(di + 1, si).restarts);
      }
    const auto& a = at(0, ns - 1);
    const auto& b = at(cfg.degrees.size() - 1, ns - 1);
    d = "restarts at speed " + num(cfg.speeds.back(), 0) + ": degree 4 " + num(a.restarts.mean) + ", degree 10 " +
        num(b.restarts.mean) + "; degree-10 hops " + num(at(cfg.degrees.size() - 1, 0).hops.mean, 2) + " -> " +
        num(b.hops.mean, 2) + (degree_ok ? "" : "; degree trend broken") + (speed_ok ? "" : "; speed trend broken") +
        (hops_ok ? "" : "; hop trend broken");
    return degree_ok && speed_ok && hops_ok && cfg.runs == 10000;
  });

  criterion(9, "grid corner-to-corner hop count", [&](std::string& d) {
    RouteSweepConfig cfg = route_preset("grid25-crossing");
    const auto rows = route_sweep(cfg);
    const Summary& h = rows.front().hops;
    d = "mean " + num(h.mean) + " +- " + num(h.half_width) + " over " + std::to_string(h.n) + " deliveries";
    return h.mean >= 8.0 && h.mean <= 9.5 && cfg.runs == 10000;
  });

  criterion(10, "grid miss ratio vs sink speed", [&](std::string& d) {
    RouteSweepConfig edge = route_preset("grid25");
    RouteSweepConfig diag = edge;
    diag.mobility = MobilityModel::DiagonalLine;
    const auto e = route_sweep(edge);
    const auto g = route_sweep(diag);
    bool mono = true, below = true;
    std::ostringstream o;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const Summary me = binomial(e[i].miss_ratio, e[i].runs);
      const Summary mg = binomial(g[i].miss_ratio, g[i].runs);
      if (i + 1 < e.size()) {
        mono &= not_below(binomial(e[i + 1].miss_ratio, e[i + 1].runs), me);
        mono &= not_below(binomial(g[i + 1].miss_ratio, g[i + 1].runs), mg);
      }
      below &= mg.mean <= me.mean;
      if (i % 3 == 0 || i + 1 == e.size()) o << num(e[i].speed, 1) << ":" << num(me.mean, 2) << "/" << num(mg.mean, 2) << " ";
    }
    d = "edge/diagonal " + o.str() + (mono ? "" : "; not monotone") + (below ? "" : "; diagonal above edge");
    return mono && below && edge.runs == 10000;
  });

  criterion(11, "frame codec", [&](std::string& d) {
    std::mt19937_64 rng(11);
    int ok = 0;
    for (int i = 0; i < 100000; ++i) {
      const Frame f = test::random_frame(rng);
      ok += decode_frame(encode_frame(f)) == f;
    }
    std::ifstream in(WSN_TEST_DATA "/golden_frames.txt");
    int golden = 0, golden_ok = 0;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto bytes = from_hex(line.substr(line.find('|') + 1));
      ++golden;
      golden_ok += encode_frame(decode_frame(bytes)) == bytes;
    }
    auto throws = [](auto f, ErrorCode code) {
      try {
        f();
      } catch (const Error& e) {
        return e.code() == code;
      }
      return false;
    };
    DataPayload list;
    list.traversed.assign(118, 1);
    list.neighbors.assign(1, 2);
    DataPayload bytes;
    bytes.traversed.assign(118, 1);
    const bool limits = throws([&] { encode_data_payload(list); }, ErrorCode::ListOverflow) &&
                        throws([&] { encode_frame(Frame::data(1, encode_data_payload(bytes))); },
                               ErrorCode::PayloadTooLarge);
    d = std::to_string(ok) + "/100000 round trips, " + std::to_string(golden_ok) + "/" + std::to_string(golden) +
        " golden vectors, limits " + (limits ? "enforced" : "NOT enforced");
    return ok == 100000 && golden > 0 && golden_ok == golden && limits;
  });

  criterion(12, "repeated CLI runs are byte-identical", [&](std::string& d) {
    const fs::path root = fs::path(WSN_ACCEPTANCE_WORKDIR) / "determinism";
    fs::remove_all(root);
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"analyze", "analyze"},
        {"collisions", "collisions --runs 5000 --levels 362"},
        {"route", "--seed 5 route-sim --runs 300 --degrees 4,8 --speeds 0,25,50 --threads 2"},
        {"grid", "route-sim --preset grid25 --mobility diagonal --runs 500"},
        {"flood", "--seed 3 flood-sim --runs 50"},
        {"demo", "--seed 9 demo --rotations 16"},
        {"codec", "codec encode --kind data --src 24 --traversed 24,19 --neighbors 19,23"},
    };
    int same = 0;
    std::size_t files = 0;
    for (const auto& [name, args] : runs) {
      const fs::path out = root / name;
      const std::string cmd = std::string(WSN_CLI) + " --out " + out.string() + " " + args + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        d = "command failed: " + args;
        return false;
      }
      const auto first = read_tree(out);
      fs::remove_all(out);
      if (std::system(cmd.c_str()) != 0) return false;
      const auto second = read_tree(out);
      files += first.size();
      same += first == second && first.count("manifest.json") == 1;
    }
    d = std::to_string(same) + "/" + std::to_string(runs.size()) + " commands identical over " +
        std::to_string(files) + " files";
    return same == static_cast<int>(runs.size());
  });

  int failed = 0;
  for (const Check& r : results) failed += !r.pass;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria pass" << std::endl;
  return failed ? 1 : 0;
}
