#include <gtest/gtest.h>

#include "wsn/config.hpp"

using namespace wsn;

TEST(Config, Constants) {
  const Ini ini = parse_ini("[constants]\nW_RR_us = 20000\nbitrate_bps = 125000\n");
  ProtocolConstants c;
  apply_constants(ini, c);
  EXPECT_EQ(c.W_RR, 20ms);
  EXPECT_EQ(c.bitrate_bps, 125000);
  EXPECT_EQ(c.W_BR, 10ms);
  EXPECT_THROW(apply_constants(parse_ini("[constants]\nW_XX_us = 1\n"), c), Error);
  EXPECT_THROW(apply_constants(parse_ini("[constants]\nW_RR_us = soon\n"), c), Error);
}

TEST(Config, InlineComments) {
  const Ini ini = parse_ini("; header\n[run]\nruns = 12   ; per point\nseed=4 # base\n[topology]\nfile=a;b.csv\n");
  EXPECT_EQ(get<int>(ini, "run.runs"), 12);
  EXPECT_EQ(get<int>(ini, "run.seed"), 4);
  EXPECT_EQ(get<std::string>(ini, "topology.file"), "a;b.csv");
}

TEST(Config, UnknownKeys) {
  EXPECT_NO_THROW(check_keys(parse_ini("[run]\nruns=3\n[constants]\nW_RR_us=1\n")));
  EXPECT_THROW(check_keys(parse_ini("[run]\nrunz=3\n")), Error);
  EXPECT_THROW(check_keys(parse_ini("[wat]\nx=1\n")), Error);
}

TEST(Config, BadSyntax) { EXPECT_THROW(parse_ini("[run\nseed=1"), Error); }

TEST(Config, Lists) {
  EXPECT_EQ(parse_list("1, 2.5,,4"), (std::vector<double>{1, 2.5, 4}));
  EXPECT_THROW(parse_list("1,2x"), Error);
  EXPECT_FALSE(parse_source("random"));
  EXPECT_EQ(parse_source("7"), NodeId{7});
  EXPECT_THROW(parse_source("254"), Error);
  EXPECT_THROW(parse_restart("sometimes"), Error);
  EXPECT_EQ(parse_idle("poll"), IdleModel::PollAverage);
  EXPECT_THROW(parse_bool("x", "maybe"), Error);
}

TEST(Config, Presets) {
  const RouteSweepConfig r = route_preset("random-graph");
  EXPECT_EQ(r.graph, GraphKind::Random);
  EXPECT_EQ(r.runs, 10000u);
  const RouteSweepConfig g = route_preset("grid25");
  EXPECT_EQ(g.graph, GraphKind::Grid);
  EXPECT_EQ(g.range, 25.0);
  const RouteSweepConfig x = route_preset("grid25-crossing");
  EXPECT_EQ(x.coords, CoordMode::Virtual);
  ASSERT_EQ(x.speeds.size(), 1u);
  EXPECT_NEAR(x.speeds[0], 50.0 / 3.6 * 0.178, 1e-9);
  try {
    route_preset("nope");
    FAIL();
  } catch (const Error& e) {
    const std::string what = e.what();
    for (const auto& name : route_presets()) EXPECT_NE(what.find(name), std::string::npos);
  }
}

TEST(Config, RouteSweepOverrides) {
  RouteSweepConfig cfg = route_preset("grid25");
  apply_route_sweep(parse_ini("[run]\nruns=12\n[sweep]\nspeeds=1,2\n[mobility]\nmodel=diagonal\nrandom_phase=off\n"
                              "[routing]\nrestart=exhausted\nsource=3\n"),
                    cfg);
  EXPECT_EQ(cfg.runs, 12u);
  EXPECT_EQ(cfg.speeds, (std::vector<double>{1, 2}));
  EXPECT_EQ(cfg.mobility, MobilityModel::DiagonalLine);
  EXPECT_FALSE(cfg.random_phase);
  EXPECT_EQ(cfg.restart, RestartTrigger::Exhausted);
  EXPECT_EQ(cfg.source, NodeId{3});
  EXPECT_THROW(apply_route_sweep(parse_ini("[topology]\nkind=torus\n"), cfg), Error);
}

TEST(Config, Scenario) {
  ScenarioConfig cfg;
  std::size_t rotations = 16;
  apply_scenario(parse_ini("[topology]\nkind=grid\nrows=3\ncols=4\n[scenario]\nrotations=5\npower=0dBm\n"
                           "[mobility]\nmodel=diagonal\nspeed_kmh=36\n"),
                 cfg, rotations);
  EXPECT_EQ(cfg.topology.size(), 12u);
  EXPECT_EQ(rotations, 5u);
  EXPECT_EQ(cfg.power, TxPower::Dbm0);
  EXPECT_EQ(cfg.track.model(), MobilityModel::DiagonalLine);
  EXPECT_DOUBLE_EQ(cfg.track.speed(), 10.0);
  EXPECT_EQ(cfg.bounds.max.x, 75.0);
  EXPECT_THROW(apply_scenario(parse_ini("[topology]\nkind=csv\n"), cfg, rotations), Error);
  EXPECT_THROW(apply_scenario(parse_ini("[scenario]\npower=3dBm\n"), cfg, rotations), Error);
}

TEST(Sweeps, CollisionRows) {
  CollisionSweepConfig cfg;
  cfg.w_max = 5ms;
  cfg.runs = 1000;
  const auto rows = collision_sweep(cfg);
  EXPECT_EQ(rows.size(), 10u);
  for (const auto& r : rows) {
    EXPECT_GT(r.window, r.block);
    EXPECT_EQ(r.simulated.runs, 1000);
  }
  cfg.w_min = 10ms;
  EXPECT_THROW(collision_sweep(cfg), Error);
}

TEST(Sweeps, RouteSweepShape) {
  RouteSweepConfig cfg;
  cfg.runs = 50;
  cfg.degrees = {5, 8};
  cfg.speeds = {0, 20};
  const auto rows = route_sweep(cfg);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.runs, 50u);
    if (r.speed == 0) {
      EXPECT_EQ(r.restarts.mean, 0.0);
      EXPECT_EQ(r.delivered, 50u);  // static sink: the source is connected to it
    }
  }
  cfg.threads = 3;
  const auto again = route_sweep(cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].hops.mean, again[i].hops.mean);
  cfg.speeds.clear();
  EXPECT_THROW(route_sweep(cfg), Error);
}

TEST(Sweeps, GridSweepMeasuresDegree) {
  RouteSweepConfig cfg = route_preset("grid25");
  cfg.runs = 20;
  cfg.speeds = {0};
  const auto rows = route_sweep(cfg);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].degree, 3.2, 1e-12);
  EXPECT_EQ(rows[0].miss_ratio, 0.0);
}
