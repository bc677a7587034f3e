#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lvspread/rd_sim.hpp"

using namespace lvspread;

namespace {

FrontTrace synthetic(std::function<double(double)> x_of_t, double t0, double t1, double dt) {
  FrontTrace tr;
  for (double t = t0; t <= t1 + 1e-9; t += dt) {
    tr.t.push_back(t);
    tr.x.push_back(x_of_t(t));
  }
  return tr;
}

double front_speed(const RunResult& r, const std::string& name, bool log_fit) {
  for (const auto& tr : r.traces)
    if (tr.spec.name == name) return estimate_speed(tr, log_fit).speed;
  throw std::runtime_error("no trace " + name);
}

}  // namespace

TEST(Grid, PointCount) {
  auto g = Grid1D::make(-10, 10, 0.1);
  EXPECT_EQ(g.n, 201u);
  EXPECT_NEAR(g.x(200), 10.0, 1e-12);
  EXPECT_THROW(Grid1D::make(0, 1, 0.1), ValidationError);
  EXPECT_THROW(Grid1D::make(0, 10, -0.1), ValidationError);
}

TEST(InitialData, Examples) {
  auto g = Grid1D::make(-10, 10, 0.5);
  InitialDataSpec spec{1.0, {1.0, 0.5, 0.5}, 1.0};
  auto s = build_initial_data(spec, g);
  auto at = [&](const std::vector<double>& f, double x) {
    return f[static_cast<std::size_t>(std::llround((x - g.x_min) / g.dx))];
  };
  EXPECT_DOUBLE_EQ(at(s.u, 0.0), 1.0);
  EXPECT_NEAR(at(s.u, 5.0), 6.7379e-3, 1e-7);
  EXPECT_NEAR(at(s.v, -2.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(at(s.v, 2.0), std::exp(-1.0), 1e-15);
  for (std::size_t i = 0; i + 1 < g.n; ++i) EXPECT_GE(s.u[i], s.u[i + 1]);
  for (std::size_t i = 0; i < g.n; ++i) {
    if (g.x(i) <= 0) {
      EXPECT_EQ(s.u[i], 1.0);
    }
  }
}

TEST(InitialData, RejectsUnresolvedTail) {
  auto g = Grid1D::make(-10, 10, 0.5);
  EXPECT_THROW(build_initial_data({1.0, {3.0, 0.5, 0.5}, 1.0}, g), ValidationError);
}

TEST(Step, Equilibria) {
  auto g = Grid1D::make(0, 10, 0.1);
  ModelParams p{1, 1, 0.5, 0.5};
  const double dt = stable_dt(p, g.dx);
  const auto [k1, k2] = coexistence_equilibrium(p);
  for (auto [u0, v0] : std::vector<std::pair<double, double>>{{0, 0}, {1, 0}, {0, 1}, {k1, k2}}) {
    SimState s{0.0, std::vector<double>(g.n, u0), std::vector<double>(g.n, v0)};
    for (int n = 0; n < 100; ++n) s = step(s, p, g, dt);
    for (std::size_t i = 0; i < g.n; ++i) {
      EXPECT_NEAR(s.u[i], u0, 1e-15);
      EXPECT_NEAR(s.v[i], v0, 1e-15);
    }
  }
}

TEST(Step, CflViolation) {
  auto g = Grid1D::make(0, 10, 0.1);
  ModelParams p{1, 1, 0.5, 0.5};
  SimState s{0.0, std::vector<double>(g.n, 0.5), std::vector<double>(g.n, 0.5)};
  EXPECT_THROW(step(s, p, g, 1.01 * 0.4 * 0.01 / 2), NumericalError);
  EXPECT_NO_THROW(step(s, p, g, 0.4 * 0.01 / 2));
}

TEST(Step, MaximumPrincipleRandomData) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto g = Grid1D::make(0, 20, 0.25);
  for (ModelParams p : {ModelParams{1, 1, 0.5, 0.5}, ModelParams{3, 2, 0.9, 1.5},
                        ModelParams{0.2, 5, 0.1, 0.3}}) {
    SimState s;
    for (std::size_t i = 0; i < g.n; ++i) {
      s.u.push_back(U(rng));
      s.v.push_back(U(rng));
    }
    const double dt = stable_dt(p, g.dx);
    for (int n = 0; n < 2000; ++n) {
      s = step(s, p, g, dt);
      for (std::size_t i = 0; i < g.n; ++i) {
        ASSERT_GE(s.u[i], 0.0);
        ASSERT_LE(s.u[i], 1.0);
        ASSERT_GE(s.v[i], 0.0);
        ASSERT_LE(s.v[i], 1.0);
      }
    }
  }
}

TEST(Step, CompetitiveOrderPreserved) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto g = Grid1D::make(0, 16, 0.25);
  ModelParams p{1.5, 1.2, 0.6, 0.7};
  const double dt = stable_dt(p, g.dx);
  for (int pair = 0; pair < 5; ++pair) {
    SimState lo, hi;
    for (std::size_t i = 0; i < g.n; ++i) {
      const double u1 = U(rng), v1 = U(rng);
      lo.u.push_back(u1 * U(rng));
      lo.v.push_back(v1 + (1 - v1) * U(rng));
      hi.u.push_back(u1);
      hi.v.push_back(v1);
    }
    for (int n = 0; n < 2000; ++n) {
      lo = step(lo, p, g, dt);
      hi = step(hi, p, g, dt);
      for (std::size_t i = 0; i < g.n; ++i) {
        ASSERT_LE(lo.u[i], hi.u[i]);
        ASSERT_GE(lo.v[i], hi.v[i]);
      }
    }
  }
}

TEST(FrontLocation, StepProfile) {
  auto g = Grid1D::make(-5, 5, 0.1);
  std::vector<double> f(g.n);
  for (std::size_t i = 0; i < g.n; ++i) f[i] = g.x(i) < -1e-12 ? 1.0 : 0.0;
  EXPECT_NEAR(front_location(f, g, 0.5, CrossingDirection::Rightmost), -0.05, 1e-12);
  EXPECT_THROW(front_location(f, g, 1.5, CrossingDirection::Rightmost), ValidationError);
}

TEST(FrontLocation, TranslationEquivariant) {
  auto g = Grid1D::make(-20, 20, 0.1);
  std::vector<double> f(g.n), h(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    f[i] = 1.0 / (1.0 + std::exp(g.x(i)));
    h[i] = 1.0 / (1.0 + std::exp(g.x(i) - 3.0));
  }
  const double a = front_location(f, g, 0.3, CrossingDirection::Rightmost);
  const double b = front_location(h, g, 0.3, CrossingDirection::Rightmost);
  EXPECT_NEAR(b - a, 3.0, 1e-12);
}

TEST(FrontLocation, Direction) {
  auto g = Grid1D::make(-10, 10, 0.1);
  std::vector<double> f(g.n);
  for (std::size_t i = 0; i < g.n; ++i) f[i] = std::exp(-g.x(i) * g.x(i));
  const double r = front_location(f, g, 0.5, CrossingDirection::Rightmost);
  const double l = front_location(f, g, 0.5, CrossingDirection::Leftmost);
  EXPECT_NEAR(r, std::sqrt(std::log(2.0)), 1e-2);
  EXPECT_NEAR(l, -r, 1e-12);
}

TEST(EstimateSpeed, ExactLine) {
  auto tr = synthetic([](double t) { return 2 * t + 1; }, 0, 100, 1);
  auto est = estimate_speed(tr, {50, 100}, false);
  EXPECT_NEAR(est.speed, 2.0, 1e-12);
  EXPECT_NEAR(est.intercept, 1.0, 1e-9);
  EXPECT_NEAR(est.rms_residual, 0.0, 1e-9);
}

TEST(EstimateSpeed, LogCorrection) {
  auto tr = synthetic([](double t) { return 2 * t - 0.75 * std::log(t); }, 1, 300, 1);
  auto est = estimate_speed(tr, {150, 300}, true);
  EXPECT_NEAR(est.speed, 2.0, 1e-6);
  EXPECT_NEAR(*est.log_correction_coeff, 0.75, 1e-4);
}

TEST(EstimateSpeed, NoisyLine) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> N(0.0, 0.1);
  auto tr = synthetic([&](double t) { return 1.7 * t + 4 + N(rng); }, 0, 200, 1);
  auto est = estimate_speed(tr, {100, 200}, false);
  EXPECT_NEAR(est.speed, 1.7, 0.01);
}

TEST(EstimateSpeed, TooFewSamples) {
  auto tr = synthetic([](double t) { return t; }, 0, 8, 1);
  EXPECT_THROW(estimate_speed(tr, {0, 8}, false), ValidationError);
}

TEST(Forcing, DecaysOnCone) {
  auto f = builtin_forcing(0.2, 1.0);
  for (double t : {1.0, 10.0, 100.0, 400.0}) {
    double sup = 0;
    for (double x = t; x < t + 50; x += 0.1) sup = std::max(sup, f.h(t, x) + f.k(t, x));
    EXPECT_LE(sup, 2 * 0.2 * std::exp(-std::sqrt(t)) + 1e-15);
  }
  EXPECT_DOUBLE_EQ(f.h(4.0, 0.0), 0.2);
}

TEST(Run, DomainTooSmall) {
  auto g = Grid1D::make(-60, 100, 0.2);
  RunConfig cfg;
  cfg.t_end = 50;
  EXPECT_THROW(run(InitialDataSpec{1.0, {1.0, 0.5, 0.5}, 1.0}, ModelParams{1, 1, 0.5, 0.5}, g, cfg),
               ValidationError);
  // Pre-check disabled: the front itself reaches the boundary.
  cfg.reach_left = cfg.reach_right = 0;
  cfg.margin = 0;
  RunConfig c2 = cfg;
  c2.traces = default_traces(ModelParams{1, 1, 0.5, 0.5});
  c2.reach_right = 1e-9;
  c2.reach_left = 1e-9;
  EXPECT_THROW(run(build_initial_data({1.0, {1.0, 0.5, 0.5}, 1.0}, g), ModelParams{1, 1, 0.5, 0.5},
                   g, c2),
               NumericalError);
}

TEST(Run, SingleSpeciesRecovery) {
  // a = 0: u ignores v and spreads at its KPP speed.
  ModelParams p{1, 1, 0.0, 0.5};
  auto g = Grid1D::make(-260, 330, 0.2);
  for (double lu : {0.5, 2.0}) {
    RunConfig cfg;
    cfg.t_end = 100;
    auto r = run(InitialDataSpec{1.0, {lu, 1.0, 1.0}, 1.0}, p, g, cfg);
    const double sigma2 = kpp_speed(1, 1, lu);
    EXPECT_NEAR(front_speed(r, "u_right", lu >= 1.0), sigma2, 0.03 * sigma2) << lu;
  }
}

TEST(Run, LeadingFrontAndRefinement) {
  ModelParams p{1, 1, 0.5, 0.5};
  double speeds[2];
  int k = 0;
  for (double dx : {0.2, 0.1}) {
    auto g = Grid1D::make(-260, 330, dx);
    RunConfig cfg;
    cfg.t_end = 100;
    auto r = run(InitialDataSpec{1.0, {1.0, 0.5, 0.5}, 1.0}, p, g, cfg);
    speeds[k++] = front_speed(r, "v_right", false);
  }
  EXPECT_NEAR(speeds[1], 2.5, 0.03 * 2.5);
  EXPECT_LT(std::abs(speeds[0] - speeds[1]) / speeds[1], 0.01);
}

TEST(Run, AmplitudeIndependence) {
  ModelParams p{1, 1, 0.5, 0.5};
  auto g = Grid1D::make(-260, 330, 0.2);
  RunConfig cfg;
  cfg.t_end = 100;
  auto r1 = run(InitialDataSpec{1.0, {1.0, 0.5, 0.5}, 1.0}, p, g, cfg);
  auto r2 = run(InitialDataSpec{0.6, {1.0, 0.5, 0.5}, 0.4}, p, g, cfg);
  const double c1 = front_speed(r1, "v_right", false), c2 = front_speed(r2, "v_right", false);
  EXPECT_LT(std::abs(c1 - c2) / c1, 0.01);
  const double u1 = front_speed(r1, "u_right", false), u2 = front_speed(r2, "u_right", false);
  EXPECT_LT(std::abs(u1 - u2) / u1, 0.03);
}

TEST(Run, SnapshotsAtScheduledTimes) {
  ModelParams p{1, 1, 0.5, 0.5};
  auto g = Grid1D::make(-80, 80, 0.25);
  RunConfig cfg;
  cfg.t_end = 10;
  cfg.snapshot_times = {0, 5, 10};
  auto r = run(InitialDataSpec{1.0, {1.0, 0.5, 0.5}, 1.0}, p, g, cfg);
  ASSERT_EQ(r.snapshots.size(), 3u);
  EXPECT_NEAR(r.snapshots[1].t, 5.0, 1e-9);
  EXPECT_NEAR(r.snapshots[2].t, 10.0, 1e-9);
  EXPECT_NEAR(r.final_state.t, 10.0, 1e-9);
}

TEST(MeasureLlw, DecoupledIsKpp) {
  auto g = Grid1D::make(-20, 280, 0.2);
  auto c = measure_c_llw({1, 1, 0.0, 0.5}, g, 100);
  EXPECT_NEAR(c.speed, 2.0, 0.06);
  auto g2 = Grid1D::make(-280, 20, 0.2);
  auto ct = measure_tilde_c_llw({1, 1, 0.5, 0.0}, g2, 100);
  EXPECT_NEAR(ct.speed, 2.0, 0.06);
}

TEST(MeasureLlw, WeakCompetitionInsideBounds) {
  auto g = Grid1D::make(-20, 280, 0.2);
  auto c = measure_c_llw({1, 1, 0.5, 0.5}, g, 100);
  EXPECT_GE(c.speed, std::sqrt(2.0) * 0.97);
  EXPECT_LE(c.speed, 2.0 * 1.03);
}

TEST(ProfileCheck, Preconditions) {
  auto g = Grid1D::make(-50, 50, 0.5);
  Snapshot s{10.0, std::vector<double>(g.n, 0.0), std::vector<double>(g.n, 0.0)};
  auto rep = assemble_speeds({1, 1, 0.5, 0.5}, {1, 0.5, 0.5}, {1.5, Provenance::Measured},
                             LlwInput{1.5, Provenance::Measured});
  EXPECT_THROW(profile_check({s}, g, rep, {1, 1, 0.5, 0.5}, 0.15, 0.05), ValidationError);
  s.t = 300;  // eta t = 45, but every cone lies outside [-50, 50]
  EXPECT_THROW(profile_check({s}, g, rep, {1, 1, 0.5, 0.5}, 0.15, 0.05), ValidationError);
}

TEST(ProfileCheck, SyntheticFourZoneProfile) {
  ModelParams p{1, 1, 0.5, 0.5};
  auto rep = assemble_speeds(p, {1, 0.5, 0.5}, {1.5, Provenance::Measured},
                             LlwInput{1.5, Provenance::Measured});
  auto g = Grid1D::make(-300, 400, 0.5);
  const double t = 100, k = 2.0 / 3.0;
  Snapshot s{t, {}, {}};
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    if (x > 250) {
      s.u.push_back(0);
      s.v.push_back(0);
    } else if (x > 150) {
      s.u.push_back(0);
      s.v.push_back(1);
    } else if (x > -150) {
      s.u.push_back(k);
      s.v.push_back(k);
    } else {
      s.u.push_back(1);
      s.v.push_back(0);
    }
  }
  auto ok = profile_check({s}, g, rep, p, 0.25, 0.05);
  EXPECT_TRUE(ok.pass);
  EXPECT_EQ(ok.zones.size(), 4u);
  s.v[g.n / 2] = 0.9;  // inside the (k1,k2) cone
  EXPECT_FALSE(profile_check({s}, g, rep, p, 0.25, 0.05).pass);
}
