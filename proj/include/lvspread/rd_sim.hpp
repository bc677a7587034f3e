#pragma once

// Explicit finite-difference solver for the competition-diffusion system,
// front tracking and front-speed regression.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lvspread/error.hpp"
#include "lvspread/grid.hpp"
#include "lvspread/speeds.hpp"

namespace lvspread {

struct SimState {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> v;
};

struct InitialDataSpec {
  double theta0 = 1.0;       ///< plateau of u0 on x <= 0
  DecayRates decay;
  double v_amplitude = 1.0;  ///< peak of v0 (at x = 0)
};

/// u0 = theta0 min(1, e^{-lambda_u x}),
/// v0 = amp min(1, e^{-lambda_v+ max(x,0)} e^{lambda_v- min(x,0)}).
inline SimState build_initial_data(const InitialDataSpec& spec, const Grid1D& g) {
  spec.decay.validate();
  detail::require(spec.theta0 > 0.0 && spec.theta0 <= 1.0, "theta0 must lie in (0, 1]");
  detail::require(spec.v_amplitude > 0.0 && spec.v_amplitude <= 1.0,
                  "v_amplitude must lie in (0, 1]");
  detail::require(g.x_min <= 0.0 && g.x_max >= 0.0, "grid must cover x = 0");
  const auto& dr = spec.decay;
  for (double lam : {dr.lambda_u, dr.lambda_v_plus, dr.lambda_v_minus})
    detail::require(lam * g.dx <= 1.0, "decay rate " + std::to_string(lam) +
                                           " unresolved: lambda * dx > 1");
  SimState s;
  s.u.resize(g.n);
  s.v.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    s.u[i] = spec.theta0 * std::min(1.0, std::exp(-dr.lambda_u * x));
    s.v[i] = spec.v_amplitude * std::min(1.0, std::exp(-dr.lambda_v_plus * std::max(x, 0.0) +
                                                      dr.lambda_v_minus * std::min(x, 0.0)));
  }
  return s;
}

/// Space-time perturbations subtracted from the per-capita growth of u and v.
struct Forcing {
  std::function<double(double, double)> h;  ///< h(t, x)
  std::function<double(double, double)> k;  ///< k(t, x)
  double c0 = 0.0;     ///< both fields vanish as t -> inf on x >= c0 t
  double bound = 0.0;  ///< sup of |h| and |k|
};

/// h = k = h0 exp(-max(0, x - c0 t + sqrt(t))). The sqrt(t) shift makes the
/// fields decay uniformly on x >= c0 t (bounded there by h0 e^{-sqrt t}).
inline Forcing builtin_forcing(double h0 = 0.2, double c0 = 1.0) {
  detail::require(h0 >= 0.0 && std::isfinite(h0), "forcing amplitude must be >= 0");
  detail::require(std::isfinite(c0), "forcing cone speed must be finite");
  auto f = [h0, c0](double t, double x) {
    return h0 * std::exp(-std::max(0.0, x - c0 * t + std::sqrt(std::max(t, 0.0))));
  };
  return {f, f, c0, h0};
}

/// Largest time step for which forward Euler is monotone: the diffusion limit
/// 0.4 dx^2 / (2 max(1, d)), further capped so the reaction term cannot make
/// the diagonal weight negative.
inline double stable_dt(const ModelParams& p, double dx, const Forcing* f = nullptr) {
  const double diffusive = 0.4 * dx * dx / (2.0 * std::max(1.0, p.d));
  const double fb = f ? f->bound : 0.0;
  const double lip = std::max(1.0 + p.a + fb, p.r * (1.0 + p.b + fb));
  return std::min(diffusive, 0.3 / lip);
}

inline void check_time_step(const ModelParams& p, double dx, double dt, const Forcing* f = nullptr) {
  if (!(dt > 0.0) || dt > stable_dt(p, dx, f) * (1.0 + 1e-12))
    throw NumericalError("CFL violation: dt = " + std::to_string(dt) + " exceeds " +
                         std::to_string(stable_dt(p, dx, f)));
}

namespace detail {

template <class Reaction>
inline void diffuse_react(const std::vector<double>& w, std::vector<double>& out, double mu,
                          double dt, Reaction&& react) {
  const std::size_t n = w.size();
  out[0] = w[0] + mu * 2.0 * (w[1] - w[0]) + dt * react(0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = w[i] + mu * (w[i - 1] - 2.0 * w[i] + w[i + 1]) + dt * react(i);
  out[n - 1] = w[n - 1] + mu * 2.0 * (w[n - 2] - w[n - 1]) + dt * react(n - 1);
}

inline void check_range(std::vector<double>& w, const char* name, double t) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double val = w[i];
    if (!std::isfinite(val))
      throw NumericalError(std::string("non-finite ") + name + " at index " + std::to_string(i) +
                           ", t = " + std::to_string(t));
    if (val < -1e-12 || val > 1.0 + 1e-12)
      throw NumericalError(std::string(name) + " left [0,1] at index " + std::to_string(i) +
                           " (value " + std::to_string(val) + ")");
    // roundoff only
    w[i] = std::clamp(val, 0.0, 1.0);
  }
}

/// One forward-Euler step from (u, v) at time t into (un, vn). Zero-flux ends
/// use the mirror ghost value w_{-1} = w_1.
inline void rd_step(const std::vector<double>& u, const std::vector<double>& v,
                    std::vector<double>& un, std::vector<double>& vn, double t, const Grid1D& g,
                    const ModelParams& p, double dt, const Forcing* f) {
  const double mu_u = dt / (g.dx * g.dx);
  const double mu_v = p.d * mu_u;
  if (f) {
    diffuse_react(u, un, mu_u, dt, [&](std::size_t i) {
      return u[i] * (1.0 - u[i] - p.a * v[i] - f->h(t, g.x(i)));
    });
    diffuse_react(v, vn, mu_v, dt, [&](std::size_t i) {
      return p.r * v[i] * (1.0 - p.b * u[i] - v[i] - f->k(t, g.x(i)));
    });
  } else {
    diffuse_react(u, un, mu_u, dt,
                  [&](std::size_t i) { return u[i] * (1.0 - u[i] - p.a * v[i]); });
    diffuse_react(v, vn, mu_v, dt,
                  [&](std::size_t i) { return p.r * v[i] * (1.0 - p.b * u[i] - v[i]); });
  }
  check_range(un, "u", t + dt);
  check_range(vn, "v", t + dt);
}

}  // namespace detail

inline SimState step(const SimState& s, const ModelParams& p, const Grid1D& g, double dt,
                     const Forcing* f = nullptr) {
  p.validate();
  detail::require(s.u.size() == g.n && s.v.size() == g.n, "state size does not match grid");
  check_time_step(p, g.dx, dt, f);
  SimState out;
  out.t = s.t + dt;
  out.u.resize(g.n);
  out.v.resize(g.n);
  detail::rd_step(s.u, s.v, out.u, out.v, s.t, g, p, dt, f);
  return out;
}

// ---------------------------------------------------------------------------
// Fronts

enum class Species { U, V };
enum class CrossingDirection { Rightmost, Leftmost };

inline std::string_view to_string(Species s) { return s == Species::U ? "u" : "v"; }
inline std::string_view to_string(CrossingDirection d) {
  return d == CrossingDirection::Rightmost ? "rightmost" : "leftmost";
}

struct TraceSpec {
  std::string name;
  Species species = Species::U;
  double threshold = 0.5;
  CrossingDirection direction = CrossingDirection::Rightmost;
};

struct FrontTrace {
  TraceSpec spec;
  std::vector<double> t;
  std::vector<double> x;
};

/// Position where `field` crosses `threshold`, linearly interpolated between
/// the bracketing points of the extreme crossing in `dir`.
inline double front_location(const std::vector<double>& field, const Grid1D& g, double threshold,
                             CrossingDirection dir, std::size_t* cell = nullptr) {
  detail::require(field.size() == g.n, "field size does not match grid");
  auto crosses = [&](std::size_t i) {
    return (field[i] >= threshold) != (field[i + 1] >= threshold);
  };
  std::optional<std::size_t> hit;
  if (dir == CrossingDirection::Rightmost) {
    for (std::size_t i = g.n - 1; i-- > 0;)
      if (crosses(i)) {
        hit = i;
        break;
      }
  } else {
    for (std::size_t i = 0; i + 1 < g.n; ++i)
      if (crosses(i)) {
        hit = i;
        break;
      }
  }
  if (!hit) throw ValidationError("field never crosses level " + std::to_string(threshold));
  const std::size_t i = *hit;
  if (cell) *cell = i;
  return g.x(i) + g.dx * (threshold - field[i]) / (field[i + 1] - field[i]);
}

struct SpeedEstimate {
  double speed = 0.0;
  double intercept = 0.0;
  std::optional<double> log_correction_coeff;  ///< gamma in x = c t - gamma ln t + beta
  double rms_residual = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  std::size_t samples = 0;
};

/// Least-squares fit of x(t) = c t + beta, or x(t) = c t - gamma ln t + beta.
inline SpeedEstimate estimate_speed(const FrontTrace& trace, std::pair<double, double> window,
                                    bool with_log_correction) {
  detail::require(trace.t.size() == trace.x.size(), "trace t/x length mismatch");
  detail::require(window.second > window.first, "fit window must be non-empty");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < trace.t.size(); ++i)
    if (trace.t[i] >= window.first && trace.t[i] <= window.second) idx.push_back(i);
  if (idx.size() < 10)
    throw ValidationError("speed fit needs >= 10 samples in window, got " +
                          std::to_string(idx.size()));
  if (with_log_correction)
    detail::require(trace.t[idx.front()] > 0.0, "log-corrected fit needs t > 0");

  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  const Eigen::Index k = with_log_correction ? 3 : 2;
  // Centre time to keep the design matrix well conditioned.
  const double tc = 0.5 * (window.first + window.second);
  Eigen::MatrixXd A(m, k);
  Eigen::VectorXd y(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double t = trace.t[idx[r]];
    A(r, 0) = t - tc;
    A(r, 1) = 1.0;
    if (with_log_correction) A(r, 2) = -std::log(t / tc);
    y(r) = trace.x[idx[r]];
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd res = A * coef - y;

  SpeedEstimate est;
  est.speed = coef(0);
  est.intercept = coef(1) - coef(0) * tc;
  if (with_log_correction) {
    est.log_correction_coeff = coef(2);
    est.intercept += coef(2) * std::log(tc);
  }
  est.rms_residual = std::sqrt(res.squaredNorm() / static_cast<double>(m));
  est.window = window;
  est.samples = idx.size();
  return est;
}

/// Fit over [t_last / 2, t_last].
inline SpeedEstimate estimate_speed(const FrontTrace& trace, bool with_log_correction) {
  detail::require(!trace.t.empty(), "empty trace");
  const double t1 = trace.t.back();
  return estimate_speed(trace, {0.5 * t1, t1}, with_log_correction);
}

// ---------------------------------------------------------------------------
// Runs

struct Snapshot {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> v;
};

struct RunConfig {
  double t_end = 100.0;
  double dt = 0.0;  ///< 0 selects stable_dt, shrunk so that t_end is hit exactly
  double sample_interval = 1.0;
  std::vector<double> snapshot_times;
  std::vector<TraceSpec> traces;
  std::optional<Forcing> forcing;
  /// Fastest expected front speeds to the right / left of the origin. When
  /// positive, the grid must satisfy reach * t_end + margin inside the domain.
  double reach_right = 0.0;
  double reach_left = 0.0;
  double margin = 50.0;
  std::size_t boundary_cells = 10;
};

struct RunResult {
  SimState final_state;
  std::vector<FrontTrace> traces;
  std::vector<Snapshot> snapshots;
  double dt = 0.0;
  std::size_t steps = 0;
};

/// Front thresholds: u at k1/2, rightmost v at 1/2, leftmost v at k2/2 under
/// weak competition; u and v at 1/2 in the mixed case.
inline std::vector<TraceSpec> default_traces(const ModelParams& p) {
  if (p.regime() == Regime::WeakCompetition) {
    const auto [k1, k2] = coexistence_equilibrium(p);
    return {{"u_right", Species::U, 0.5 * k1, CrossingDirection::Rightmost},
            {"v_right", Species::V, 0.5, CrossingDirection::Rightmost},
            {"v_left", Species::V, 0.5 * k2, CrossingDirection::Leftmost}};
  }
  return {{"u_right", Species::U, 0.5, CrossingDirection::Rightmost},
          {"v_right", Species::V, 0.5, CrossingDirection::Rightmost}};
}

inline void check_domain(const Grid1D& g, const RunConfig& cfg) {
  if (cfg.reach_right > 0.0 && !(cfg.reach_right * cfg.t_end + cfg.margin < g.x_max))
    throw ValidationError("domain too small: need x_max > " +
                          std::to_string(cfg.reach_right * cfg.t_end + cfg.margin));
  if (cfg.reach_left > 0.0 && !(-cfg.reach_left * cfg.t_end - cfg.margin > g.x_min))
    throw ValidationError("domain too small: need x_min < " +
                          std::to_string(-cfg.reach_left * cfg.t_end - cfg.margin));
}

inline RunResult run(SimState state, const ModelParams& p, const Grid1D& g, const RunConfig& cfg) {
  p.validate();
  detail::require(cfg.t_end > 0.0, "t_end must be > 0");
  detail::require(cfg.sample_interval > 0.0, "sample_interval must be > 0");
  detail::require(state.u.size() == g.n && state.v.size() == g.n, "state size does not match grid");
  check_domain(g, cfg);

  const Forcing* f = cfg.forcing ? &*cfg.forcing : nullptr;
  const double dt_max = cfg.dt > 0.0 ? cfg.dt : stable_dt(p, g.dx, f);
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / dt_max - 1e-9));
  const double dt = cfg.t_end / static_cast<double>(steps);
  check_time_step(p, g.dx, dt, f);
  const std::size_t sample_every =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.sample_interval / dt)));

  std::vector<std::size_t> snap_steps;
  for (double ts : cfg.snapshot_times) {
    detail::require(ts >= 0.0 && ts <= cfg.t_end * (1.0 + 1e-12), "snapshot time outside [0, t_end]");
    snap_steps.push_back(static_cast<std::size_t>(std::llround(ts / dt)));
  }

  RunResult out;
  out.dt = dt;
  out.steps = steps;
  for (const auto& ts : cfg.traces) out.traces.push_back({ts, {}, {}});

  const double t0 = state.t;
  auto record = [&](std::size_t n) {
    const double t = t0 + static_cast<double>(n) * dt;
    if (n % sample_every == 0 || n == steps) {
      for (auto& tr : out.traces) {
        const auto& field = tr.spec.species == Species::U ? state.u : state.v;
        std::size_t cell = 0;
        double x;
        try {
          x = front_location(field, g, tr.spec.threshold, tr.spec.direction, &cell);
        } catch (const ValidationError&) {
          const double edge =
              tr.spec.direction == CrossingDirection::Rightmost ? field.back() : field.front();
          if (edge >= tr.spec.threshold)
            throw NumericalError("domain too small: front '" + tr.spec.name +
                                 "' left the domain before t = " + std::to_string(t));
          continue;  // level not attained at this time
        }
        if (cell < cfg.boundary_cells || cell + 1 + cfg.boundary_cells > g.n)
          throw NumericalError("domain too small: front '" + tr.spec.name + "' within " +
                               std::to_string(cfg.boundary_cells) + " cells of the boundary at t = " +
                               std::to_string(t));
        tr.t.push_back(t);
        tr.x.push_back(x);
      }
    }
    for (std::size_t k = 0; k < snap_steps.size(); ++k)
      if (snap_steps[k] == n) out.snapshots.push_back({t, state.u, state.v});
  };

  std::vector<double> un(g.n), vn(g.n);
  record(0);
  for (std::size_t n = 1; n <= steps; ++n) {
    detail::rd_step(state.u, state.v, un, vn, state.t, g, p, dt, f);
    state.u.swap(un);
    state.v.swap(vn);
    state.t = t0 + static_cast<double>(n) * dt;
    record(n);
  }
  out.final_state = std::move(state);
  return out;
}

/// Run from (H_lambda)-type initial data. Empty trace list selects
/// default_traces(); zero reach speeds are filled from the linear speeds.
inline RunResult run(const InitialDataSpec& spec, const ModelParams& p, const Grid1D& g,
                     RunConfig cfg) {
  p.validate();
  if (cfg.traces.empty()) cfg.traces = default_traces(p);
  const SigmaSet s = sigma_set(p, spec.decay);
  const double sdr = 2.0 * std::sqrt(p.d * p.r);
  if (cfg.reach_right <= 0.0) cfg.reach_right = std::max({s.sigma1, s.sigma2, sdr});
  if (cfg.reach_left <= 0.0) cfg.reach_left = std::max(s.sigma3.value_or(0.0), sdr);
  return run(build_initial_data(spec, g), p, g, cfg);
}

// ---------------------------------------------------------------------------
// Traveling-wave speed measurements

namespace detail {
/// 0.9 times the indicator of |x| <= half_width, with a linear ramp over two cells.
inline double smoothed_bump(double x, double half_width, double dx) {
  const double ramp = std::clamp((half_width - std::abs(x)) / (2.0 * dx) + 0.5, 0.0, 1.0);
  return 0.9 * ramp;
}

inline SpeedEstimate checked_llw(const SpeedEstimate& est, const LLWBounds& b, const char* what) {
  if (!b.contains(est.speed, 0.03))
    throw NumericalError(std::string(what) + " measured " + std::to_string(est.speed) +
                         " outside [" + std::to_string(b.lower) + ", " + std::to_string(b.upper) +
                         "] +-3%");
  return est;
}
}  // namespace detail

/// Spread speed of a compact u-bump into the v = 1 state (u = rho, v = 1 - rho).
inline SpeedEstimate measure_c_llw(const ModelParams& p, const Grid1D& g, double t_end,
                                   double sample_interval = 1.0) {
  p.validate();
  detail::require(p.regime() == Regime::WeakCompetition, "c_LLW measurement requires a, b < 1");
  SimState s;
  s.u.resize(g.n);
  s.v.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double rho = detail::smoothed_bump(g.x(i), 5.0, g.dx);
    s.u[i] = rho;
    s.v[i] = 1.0 - rho;
  }
  const auto [k1, k2] = coexistence_equilibrium(p);
  RunConfig cfg;
  cfg.t_end = t_end;
  cfg.sample_interval = sample_interval;
  cfg.traces = {{"u_right", Species::U, 0.5 * k1, CrossingDirection::Rightmost}};
  cfg.reach_right = 2.0;
  auto res = run(std::move(s), p, g, cfg);
  return detail::checked_llw(estimate_speed(res.traces[0], true), llw_bounds(p).first, "c_LLW");
}

/// Spread speed of a compact v-bump into the u = 1 state (u = 1 - rho, v = rho),
/// reported as a positive number.
inline SpeedEstimate measure_tilde_c_llw(const ModelParams& p, const Grid1D& g, double t_end,
                                         double sample_interval = 1.0) {
  p.validate();
  detail::require(p.regime() == Regime::WeakCompetition,
                  "tilde c_LLW measurement requires a, b < 1");
  SimState s;
  s.u.resize(g.n);
  s.v.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double rho = detail::smoothed_bump(g.x(i), 5.0, g.dx);
    s.u[i] = 1.0 - rho;
    s.v[i] = rho;
  }
  const auto [k1, k2] = coexistence_equilibrium(p);
  RunConfig cfg;
  cfg.t_end = t_end;
  cfg.sample_interval = sample_interval;
  cfg.traces = {{"v_left", Species::V, 0.5 * k2, CrossingDirection::Leftmost}};
  cfg.reach_left = 2.0 * std::sqrt(p.d * p.r);
  auto res = run(std::move(s), p, g, cfg);
  SpeedEstimate est = estimate_speed(res.traces[0], true);
  est.speed = -est.speed;
  return detail::checked_llw(est, llw_bounds(p).second, "tilde c_LLW");
}

/// Speed of the (1,0) -> (0,1) front for a < 1 < b, from a step u = 1 on
/// x < 0, v = 1 on x > 0.
inline SpeedEstimate measure_hat_c_llw(const ModelParams& p, const Grid1D& g, double t_end,
                                       double sample_interval = 1.0) {
  p.validate();
  detail::require(p.regime() == Regime::MixedCase, "hat c_LLW measurement requires a < 1 < b");
  SimState s;
  s.u.resize(g.n);
  s.v.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double step = std::clamp(-g.x(i) / (2.0 * g.dx) + 0.5, 0.0, 1.0);
    s.u[i] = step;
    s.v[i] = 1.0 - step;
  }
  RunConfig cfg;
  cfg.t_end = t_end;
  cfg.sample_interval = sample_interval;
  cfg.traces = {{"u_right", Species::U, 0.5, CrossingDirection::Rightmost}};
  cfg.reach_right = 2.0;
  auto res = run(std::move(s), p, g, cfg);
  const LLWBounds b{2.0 * std::sqrt(1.0 - p.a), 2.0, false};
  return detail::checked_llw(estimate_speed(res.traces[0], true), b, "hat c_LLW");
}

// ---------------------------------------------------------------------------
// Plateau checks

struct ZoneVerdict {
  std::string name;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double value = 0.0;  ///< sup of the deviation (or min, for plateau-absence checks)
  bool pass = false;
};

struct ProfileVerdict {
  double t = 0.0;
  double eta = 0.0;
  double tol = 0.0;
  std::vector<ZoneVerdict> zones;
  bool pass = false;
};

/// Checks the latest snapshot against the zone structure implied by `report`:
/// each cone between consecutive front speeds (shrunk by eta) must sit within
/// tol of its plateau state in the l1 deviation |u - u*| + |v - v*|.
inline ProfileVerdict profile_check(const std::vector<Snapshot>& snapshots, const Grid1D& g,
                                    const SpeedReport& report, const ModelParams& p, double eta,
                                    double tol) {
  detail::require(!snapshots.empty(), "profile_check needs at least one snapshot");
  detail::require(eta > 0.0 && tol > 0.0, "eta and tol must be > 0");
  const Snapshot& s = snapshots.back();
  detail::require(s.u.size() == g.n && s.v.size() == g.n, "snapshot size does not match grid");
  detail::require(eta * s.t > 20.0, "profile_check needs eta * t > 20");
  const double t = s.t;
  const double inf = std::numeric_limits<double>::infinity();

  ProfileVerdict out{t, eta, tol, {}, true};
  auto zone = [&](std::string name, double lo, double hi, double us, double vs) {
    double sup = -1.0;
    for (std::size_t i = 0; i < g.n; ++i) {
      const double x = g.x(i);
      if (x > lo && x < hi) sup = std::max(sup, std::abs(s.u[i] - us) + std::abs(s.v[i] - vs));
    }
    if (sup < 0.0) throw ValidationError("zone '" + name + "' is empty on the grid");
    ZoneVerdict z{std::move(name), std::max(lo, g.x_min), std::min(hi, g.x_max), sup, sup < tol};
    out.pass = out.pass && z.pass;
    out.zones.push_back(std::move(z));
  };

  const double c1 = report.c1;
  switch (report.regime) {
    case SpeedRegime::Separated: {
      const auto [k1, k2] = coexistence_equilibrium(p);
      const double c2 = report.c2.value(), c3 = report.c3.value();
      zone("(0,0)", (c1 + eta) * t, inf, 0.0, 0.0);
      zone("(0,1)", (c2 + eta) * t, (c1 - eta) * t, 0.0, 1.0);
      zone("(k1,k2)", (c3 + eta) * t, (c2 - eta) * t, k1, k2);
      zone("(1,0)", -inf, (c3 - eta) * t, 1.0, 0.0);
      break;
    }
    case SpeedRegime::TangFife: {
      const auto [k1, k2] = coexistence_equilibrium(p);
      const double c3 = report.c3.value();
      zone("(0,0)", (c1 + eta) * t, inf, 0.0, 0.0);
      zone("(k1,k2)", (c3 + eta) * t, (c1 - eta) * t, k1, k2);
      zone("(1,0)", -inf, (c3 - eta) * t, 1.0, 0.0);
      double closest = inf;
      for (std::size_t i = 0; i < g.n; ++i)
        closest = std::min(closest, std::abs(s.u[i]) + std::abs(s.v[i] - 1.0));
      ZoneVerdict z{"no (0,1) plateau", g.x_min, g.x_max, closest, closest >= tol};
      out.pass = out.pass && z.pass;
      out.zones.push_back(std::move(z));
      break;
    }
    case SpeedRegime::MixedCase: {
      const double c2 = report.c2.value();
      zone("(0,0)", (c1 + eta) * t, inf, 0.0, 0.0);
      zone("(0,1)", (c2 + eta) * t, (c1 - eta) * t, 0.0, 1.0);
      zone("(1,0)", -inf, (c2 - eta) * t, 1.0, 0.0);
      break;
    }
  }
  return out;
}

}  // namespace lvspread
