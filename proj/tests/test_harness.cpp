#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "grfgov/plot.hpp"
#include "grfgov/telemetry.hpp"

using namespace grfgov;

namespace {

ScenarioConfig shortRun(ScenarioKind kind, bool erg, double duration) {
  ScenarioConfig cfg = ScenarioConfig::defaults(kind);
  cfg.erg_enabled = erg;
  cfg.duration = duration;
  return cfg;
}

std::string csvText(const std::vector<TelemetryRecord>& recs, const CsvLayout& layout = {}) {
  std::ostringstream os;
  writeCsv(os, recs, layout);
  return os.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "grfgov_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(VlipReference, Samples) {
  const VlipCoords a = vlipReference(0.0).asVlip();
  EXPECT_NEAR(a.theta, 0.45, 1e-15);
  EXPECT_NEAR(a.phi, 0.0, 1e-15);
  EXPECT_NEAR(a.l, 0.3, 1e-15);
  const VlipCoords b = vlipReference(0.5).asVlip();
  EXPECT_NEAR(b.theta, 0.0, 1e-15);
  EXPECT_NEAR(b.phi, 1.5, 1e-15);
  EXPECT_NEAR(b.l, 0.4, 1e-15);
  // sin(pi t - pi) vanishes again at t = 1; the tilt peak is at t = 1.5.
  const VlipCoords c = vlipReference(1.0).asVlip();
  EXPECT_NEAR(c.theta, 0.45, 1e-15);
  EXPECT_NEAR(c.l, 0.5, 1e-15);
  EXPECT_NEAR(vlipReference(1.5).asVlip().theta, 0.9, 1e-15);
  for (double t : {0.0, 0.3, 1.7}) EXPECT_EQ(vlipReference(t).x.tail<3>().norm(), 0.0);
}

TEST(WalkReference, Samples) {
  const WalkSchedule w;
  const ReferenceVector r0 = walkReference(0.0, w);
  EXPECT_EQ(r0.chart, Chart::kCartesian);
  EXPECT_LE((r0.x.head<3>() - Vec3(0, 0, 0.6)).norm(), 1e-15);
  EXPECT_LE((r0.x.tail<3>() - Vec3(0.3, 0.025 * 2 * M_PI / 1.5, 0)).norm(), 1e-15);
  EXPECT_NEAR(walkReference(0.75, w).x(0), 0.225, 1e-15);
  EXPECT_NEAR(walkReference(0.375, w).x(1), 0.025, 1e-15);
}

TEST(CopSchedule, CenteredSpacedAndAlternating) {
  const WalkSchedule w;
  // Mean reference x over the first period is v T / 2.
  EXPECT_NEAR(copSchedule(0.0, w).x(), 0.5 * w.speed * w.gait_period, 1e-15);
  for (int k = 0; k < 8; ++k) {
    const double t = k * w.gait_period;
    const Vec3 a = copSchedule(t + 0.1, w), b = copSchedule(t + w.gait_period + 0.1, w);
    EXPECT_NEAR(b.x() - a.x(), w.speed * w.gait_period, 4 * std::numeric_limits<double>::epsilon() * b.x()) << k;
    EXPECT_EQ(a.y(), -b.y());
    EXPECT_EQ(std::abs(a.y()), w.foot_offset);
    EXPECT_EQ(a.z(), 0.0);
    EXPECT_EQ(copSchedule(t + 0.7, w), a);
  }
}

TEST(RunSimulation, ErgOffAppliesTargetExactly) {
  const auto recs = runSimulation(shortRun(ScenarioKind::kVlip, false, 1.0));
  ASSERT_EQ(recs.size(), 1000u);
  bool angle_violated_near_half = false;
  for (const auto& r : recs) {
    ASSERT_EQ(r.x_w, r.x_r);
    EXPECT_EQ(r.branch, Branch::kIdle);
    if (r.t > 0.4 && r.t < 0.6 && r.h_w(3) < 0.0) angle_violated_near_half = true;
  }
  EXPECT_TRUE(angle_violated_near_half);
}

TEST(RunSimulation, ErgOnHoldsAppliedTiltAboveFloor) {
  const auto recs = runSimulation(shortRun(ScenarioKind::kVlip, true, 0.8));
  double gap = 0.0;
  for (const auto& r : recs) {
    if (r.t >= 0.35 && r.t <= 0.65) gap = std::max(gap, std::abs(r.x_w(0) - r.x_r(0)));
  }
  EXPECT_GE(gap, 0.05);
}

TEST(RunSimulation, ErgOnAndOffDiffer) {
  const auto on = runSimulation(shortRun(ScenarioKind::kVlip, true, 0.6));
  const auto off = runSimulation(shortRun(ScenarioKind::kVlip, false, 0.6));
  double diff = 0.0;
  for (size_t i = 0; i < on.size(); ++i) diff = std::max(diff, (on[i].x_w - off[i].x_w).norm());
  EXPECT_GT(diff, 1e-3);
}

TEST(RunSimulation, RecordsAreMonotoneAndStartAtTarget) {
  const ScenarioConfig cfg = shortRun(ScenarioKind::kWalk, true, 0.5);
  const auto recs = runSimulation(cfg);
  ASSERT_EQ(recs.size(), 500u);
  EXPECT_EQ(recs.front().x_w, recs.front().x_r);
  EXPECT_LE((recs.front().c - walkReference(0.0, cfg.walk).x.head<3>()).norm(), 1e-15);
  EXPECT_EQ(recs.front().h_r.size(), 3);
  for (size_t i = 1; i < recs.size(); ++i) EXPECT_GT(recs[i].t, recs[i - 1].t);
}

TEST(RunSimulation, Deterministic) {
  const ScenarioConfig cfg = shortRun(ScenarioKind::kVlip, true, 0.5);
  EXPECT_EQ(csvText(runSimulation(cfg)), csvText(runSimulation(cfg)));
}

TEST(RunSimulation, ErrorsCarryStepContext) {
  int calls = 0;
  try {
    runSimulation(shortRun(ScenarioKind::kVlip, true, 0.1), [&](const StepContext& ctx) {
      ++calls;
      if (ctx.step == 17) throw std::runtime_error("observer stop");
    });
    FAIL() << "expected an exception";
  } catch (const SimulationError& e) {
    EXPECT_NE(std::string(e.what()).find("step 17"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("observer stop"), std::string::npos);
  }
  EXPECT_EQ(calls, 18);
}

TEST(Telemetry, HeaderLayout) {
  const auto h = csvHeader({6, 4});
  std::string joined;
  for (size_t i = 0; i < h.size(); ++i) joined += (i ? "," : "") + h[i];
  EXPECT_EQ(joined,
            "t,cx,cy,cz,cdx,cdy,cdz,theta,phi,l,xr_0,xr_1,xr_2,xr_3,xr_4,xr_5,xw_0,xw_1,xw_2,"
            "xw_3,xw_4,xw_5,utc_x,utc_y,utc_z,ur,lambda,ugx,ugy,ugz,hr_0,hr_1,hr_2,hr_3,hw_0,"
            "hw_1,hw_2,hw_3,V,Vdot,branch");
}

TEST(Telemetry, EmptyIsHeaderOnly) {
  const std::string text = csvText({}, {6, 3});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_EQ(text.rfind("t,cx", 0), 0u);
  std::istringstream is(text);
  CsvLayout layout;
  EXPECT_TRUE(parseCsv(is, &layout).empty());
  EXPECT_EQ(layout.n_c, 3);
}

TEST(Telemetry, RoundTripIsExact) {
  const auto recs = runSimulation(shortRun(ScenarioKind::kVlip, true, 0.7));
  std::istringstream is(csvText(recs));
  const auto back = parseCsv(is);
  ASSERT_EQ(back.size(), recs.size());
  for (size_t i = 0; i < recs.size(); ++i) {
    const auto &a = recs[i], &b = back[i];
    ASSERT_EQ(a.t, b.t);
    ASSERT_EQ(a.c, b.c);
    ASSERT_EQ(a.c_dot, b.c_dot);
    ASSERT_EQ(a.theta, b.theta);
    ASSERT_EQ(a.phi, b.phi);
    ASSERT_EQ(a.l, b.l);
    ASSERT_EQ(a.x_r, b.x_r);
    ASSERT_EQ(a.x_w, b.x_w);
    ASSERT_EQ(a.u_tc, b.u_tc);
    ASSERT_EQ(a.u_r, b.u_r);
    ASSERT_EQ(a.lambda, b.lambda);
    ASSERT_EQ(a.u_g, b.u_g);
    ASSERT_EQ(a.h_r, b.h_r);
    ASSERT_EQ(a.h_w, b.h_w);
    ASSERT_EQ(a.V, b.V);
    ASSERT_EQ(a.V_dot, b.V_dot);
    ASSERT_EQ(a.branch, b.branch);
  }
}

TEST(Telemetry, RejectsForeignHeaderAndBadPath) {
  std::istringstream bad("t,cx,oops\n");
  EXPECT_THROW(parseCsv(bad), std::runtime_error);
  try {
    exportCsv({}, "/nonexistent-dir/x.csv");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
}

TEST(Config, DefaultsMatchScenarios) {
  const ScenarioConfig v = ScenarioConfig::defaults(ScenarioKind::kVlip);
  EXPECT_EQ(v.chart(), Chart::kVlip);
  EXPECT_EQ(v.constraints.rows(), 4);
  EXPECT_EQ(v.constraints.mu_s, 0.45);
  EXPECT_EQ(v.gains.kp_t, 660.0);
  EXPECT_EQ(v.rates.alpha_n, 2.0);
  EXPECT_EQ(v.steps(), 2000);
  const ScenarioConfig w = ScenarioConfig::defaults(ScenarioKind::kWalk);
  EXPECT_EQ(w.chart(), Chart::kCartesian);
  EXPECT_EQ(w.constraints.rows(), 3);
  EXPECT_EQ(w.constraints.mu_s, 0.25);
  EXPECT_EQ(w.ground.mu_c, 0.225);
  EXPECT_EQ(w.gains.kd_t, 40.0);
  EXPECT_EQ(w.rates.alpha_t, 15.0);
  EXPECT_EQ(w.rates.alpha_n, 20.0);
}

TEST(Config, AppliesOverrides) {
  const ScenarioConfig cfg = applyConfigJson(
      ScenarioConfig::defaults(ScenarioKind::kWalk),
      R"({"scenario":"walk","erg":{"alpha_r":3,"enabled":false},"walk":{"speed_mps":0.2},)"
      R"("sim":{"duration_s":1.5},"ground":{"literal_friction":true}})");
  EXPECT_EQ(cfg.rates.alpha_r, 3.0);
  EXPECT_FALSE(cfg.erg_enabled);
  EXPECT_EQ(cfg.walk.speed, 0.2);
  EXPECT_EQ(cfg.duration, 1.5);
  EXPECT_TRUE(cfg.ground.literal_friction);
}

TEST(Config, RejectsBadDocuments) {
  const ScenarioConfig base = ScenarioConfig::defaults(ScenarioKind::kVlip);
  EXPECT_THROW(applyConfigJson(base, R"({"bogus":1})"), ConfigError);
  EXPECT_THROW(applyConfigJson(base, R"({"gains":{"kp":1}})"), ConfigError);
  EXPECT_THROW(applyConfigJson(base, R"({"gains":{"kp_t":"high"}})"), ConfigError);
  EXPECT_THROW(applyConfigJson(base, R"({"scenario":"walk"})"), ConfigError);
  EXPECT_THROW(applyConfigJson(base, R"({"sim":{"dt_s":0}})"), ConfigError);
  EXPECT_THROW(applyConfigJson(base, "{not json"), ConfigError);
}

TEST(Config, LoadsFileWithPathContext) {
  const auto path = scratch("cfg.json");
  std::ofstream(path) << R"({"scenario":"vlip","sim":{"duration_s":0.25}})";
  const ScenarioConfig cfg = loadConfigFile(path.string());
  EXPECT_EQ(cfg.kind, ScenarioKind::kVlip);
  EXPECT_EQ(cfg.steps(), 250);
  std::ofstream(path) << R"({"scenario":"vlip","extra":true})";
  try {
    loadConfigFile(path.string());
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
  }
}

TEST(Plots, EmitsFourSvgFiles) {
  const auto recs = runSimulation(shortRun(ScenarioKind::kWalk, true, 0.3));
  const auto prefix = scratch("walk").string();
  const auto paths = emitPlots(recs, prefix, 0.25);
  ASSERT_EQ(paths.size(), 4u);
  for (const auto& p : paths) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string svg = ss.str();
    EXPECT_NE(svg.find("<svg"), std::string::npos) << p;
    EXPECT_NE(svg.find("<polyline"), std::string::npos) << p;
    EXPECT_NE(svg.find("</svg>"), std::string::npos) << p;
  }
}

TEST(Replay, WalkingStaysPlanted) {
  const ScenarioConfig cfg = shortRun(ScenarioKind::kWalk, true, 1.0);
  const SlipReport rep = replayOnCompliantGround(cfg, runSimulation(cfg));
  EXPECT_FALSE(rep.diverged) << rep.message;
  EXPECT_EQ(rep.slip_history.size(), 1000u);
  EXPECT_LT(rep.slip, 1e-3);
}
