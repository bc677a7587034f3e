#pragma once

// Hamilton-Jacobi obstacle problems
//
//   min{ w_t + q |w_x|^2 + base - dip * chi(t, x), w } = 0
//
// solved with a monotone Lax-Friedrichs scheme followed by projection onto
// w >= 0, plus closed-form piecewise solutions used as oracles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lvspread/error.hpp"
#include "lvspread/grid.hpp"
#include "lvspread/speeds.hpp"

namespace lvspread {

enum class IndicatorRegion { Below, Between, Above };

struct PiecewiseHamiltonianSpec {
  double quad = 1.0;  ///< 1 for the u-equation, d for the v-equation
  double base = 1.0;  ///< 1 or r
  double dip = 0.0;   ///< a or r b
  IndicatorRegion region = IndicatorRegion::Below;
  double sigma = 0.0;        ///< threshold speed (upper speed for Between)
  double sigma_low = 0.0;    ///< lower speed, Between only
  bool inclusive = false;    ///< x <= sigma t instead of x < sigma t (Below / Above)

  void validate() const {
    detail::require(quad > 0.0 && std::isfinite(quad), "quadratic coefficient must be > 0");
    detail::require(std::isfinite(base), "base must be finite");
    detail::require(dip >= 0.0 && std::isfinite(dip), "dip amplitude must be >= 0");
    detail::require(std::isfinite(sigma) && std::isfinite(sigma_low), "region speeds must be finite");
    if (region == IndicatorRegion::Between)
      detail::require(sigma_low <= sigma, "Between region needs sigma_low <= sigma");
  }

  [[nodiscard]] double indicator(double t, double x) const {
    switch (region) {
      case IndicatorRegion::Below: return (inclusive ? x <= sigma * t : x < sigma * t) ? 1.0 : 0.0;
      case IndicatorRegion::Above: return (inclusive ? x >= sigma * t : x > sigma * t) ? 1.0 : 0.0;
      case IndicatorRegion::Between: return (x > sigma_low * t && x < sigma * t) ? 1.0 : 0.0;
    }
    return 0.0;
  }

  [[nodiscard]] double hamiltonian(double t, double x, double p) const {
    return quad * p * p + base - dip * indicator(t, x);
  }

  /// u-exponent equation with v present on x < sigma1 t.
  static PiecewiseHamiltonianSpec u_equation(double a, double sigma1, bool inclusive = false) {
    return {1.0, 1.0, a, IndicatorRegion::Below, sigma1, 0.0, inclusive};
  }
  /// u-exponent equation with competition only on sigma2 t < x < sigma1 t.
  static PiecewiseHamiltonianSpec u_equation_between(double a, double sigma2, double sigma1) {
    return {1.0, 1.0, a, IndicatorRegion::Between, sigma1, sigma2, false};
  }
  /// v-exponent equation with u present on x <= sigma2 t.
  static PiecewiseHamiltonianSpec v_equation(double d, double r, double b, double sigma2,
                                             bool inclusive = true) {
    return {d, r, r * b, IndicatorRegion::Below, sigma2, 0.0, inclusive};
  }
};

/// Space-time discretisation and initial data w(0,x) = slope_right x_+ + slope_left x_-.
struct HJGrid {
  Grid1D grid;
  double t_end = 1.0;
  double slope_right = 1.0;
  double slope_left = 0.0;
  double dt = 0.0;  ///< 0 selects min(dx / (2 L_max), dx / alpha_floor)

  [[nodiscard]] std::vector<double> initial_field() const {
    std::vector<double> w(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double x = grid.x(i);
      w[i] = slope_right * std::max(x, 0.0) + slope_left * std::max(-x, 0.0);
    }
    return w;
  }
};

/// Domain covering every breakpoint of the explicit solutions up to t_end.
inline Grid1D default_hj_domain(double lambda_u, double sigma1, double t_end, double dx) {
  return Grid1D::make(-2.0, std::max(2.0 * lambda_u, sigma1) * t_end + 2.0, dx);
}

struct HJOptions {
  std::optional<double> fixed_alpha;  ///< constant dissipation instead of the adaptive one
  std::vector<double> output_times;   ///< the final time is always stored
};

struct HJSolution {
  Grid1D grid;
  std::vector<double> times;
  std::vector<std::vector<double>> fields;
  double dt = 0.0;
  double alpha_floor = 0.0;
  double max_alpha = 0.0;
  std::size_t steps = 0;

  [[nodiscard]] const std::vector<double>& final_field() const { return fields.back(); }
};

/// Explicit Lax-Friedrichs marcher with obstacle projection. Monotone as long
/// as alpha >= 2 q max|p| and alpha dt <= dx, both checked every step.
class HJMarcher {
public:
  HJMarcher(PiecewiseHamiltonianSpec spec, const HJGrid& hg, std::optional<double> fixed_alpha = {})
      : spec_(spec), grid_(hg.grid), left_(hg.slope_left), right_(hg.slope_right),
        fixed_alpha_(fixed_alpha) {
    spec_.validate();
    detail::require(hg.slope_left >= 0.0 && hg.slope_right >= 0.0, "initial slopes must be >= 0");
    const double smax = std::max({hg.slope_left, hg.slope_right,
                                  std::abs(spec_.sigma) / (2.0 * spec_.quad),
                                  std::abs(spec_.sigma_low) / (2.0 * spec_.quad)});
    floor_ = 2.0 * spec_.quad * smax + 1.0;
    if (fixed_alpha_) detail::require(*fixed_alpha_ > 0.0, "fixed alpha must be > 0");
    const double ref_alpha = fixed_alpha_ ? *fixed_alpha_ : floor_;
    // L_max bounds |dH/dp| = 2 q |p| over the initial slopes.
    const double l_max = 2.0 * spec_.quad * std::max({hg.slope_left, hg.slope_right, 1e-12});
    dt_ = hg.dt > 0.0 ? hg.dt : std::min(grid_.dx / (2.0 * l_max), grid_.dx / ref_alpha);
    pm_.resize(grid_.n);
    pp_.resize(grid_.n);
    next_.resize(grid_.n);
  }

  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] double alpha_floor() const { return floor_; }
  [[nodiscard]] double last_alpha() const { return alpha_; }

  /// Advance w from time t to t + dt (in place).
  void step(std::vector<double>& w, double t) {
    const std::size_t n = grid_.n;
    detail::require(w.size() == n, "field size does not match grid");
    const double dx = grid_.dx;
    // One-sided slopes; ghost values extrapolate the far-field slopes.
    double pmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double wl = i == 0 ? w[0] + left_ * dx : w[i - 1];
      const double wr = i + 1 == n ? w[n - 1] + right_ * dx : w[i + 1];
      pm_[i] = (w[i] - wl) / dx;
      pp_[i] = (wr - w[i]) / dx;
      pmax = std::max({pmax, std::abs(pm_[i]), std::abs(pp_[i])});
    }
    const double needed = 2.0 * spec_.quad * pmax;
    if (fixed_alpha_) {
      if (*fixed_alpha_ < needed)
        throw NumericalError("fixed alpha " + std::to_string(*fixed_alpha_) +
                             " below 2 q max|p| = " + std::to_string(needed));
      alpha_ = *fixed_alpha_;
    } else {
      alpha_ = std::max(floor_, needed);
    }
    if (alpha_ * dt_ > dx * (1.0 + 1e-12))
      throw NumericalError("CFL violation: alpha dt = " + std::to_string(alpha_ * dt_) +
                           " > dx = " + std::to_string(dx));
    for (std::size_t i = 0; i < n; ++i) {
      const double pbar = 0.5 * (pm_[i] + pp_[i]);
      const double h = spec_.hamiltonian(t, grid_.x(i), pbar) - 0.5 * alpha_ * (pp_[i] - pm_[i]);
      const double val = w[i] - dt_ * h;
      if (!std::isfinite(val))
        throw NumericalError("non-finite HJ value at index " + std::to_string(i));
      next_[i] = std::max(val, 0.0);
    }
    w.swap(next_);
  }

private:
  PiecewiseHamiltonianSpec spec_;
  Grid1D grid_;
  double left_;
  double right_;
  std::optional<double> fixed_alpha_;
  double floor_ = 0.0;
  double dt_ = 0.0;
  double alpha_ = 0.0;
  std::vector<double> pm_, pp_, next_;
};

inline HJSolution hj_solve(const PiecewiseHamiltonianSpec& spec, const HJGrid& hg,
                           const HJOptions& opt = {}) {
  detail::require(hg.t_end > 0.0, "t_end must be > 0");
  HJMarcher m(spec, hg, opt.fixed_alpha);
  const auto steps = static_cast<std::size_t>(std::ceil(hg.t_end / m.dt() - 1e-9));
  HJGrid adjusted = hg;
  adjusted.dt = hg.t_end / static_cast<double>(steps);
  HJMarcher marcher(spec, adjusted, opt.fixed_alpha);
  const double dt = marcher.dt();

  std::vector<std::size_t> out_steps;
  for (double t : opt.output_times) {
    detail::require(t >= 0.0 && t <= hg.t_end * (1.0 + 1e-12), "output time outside [0, t_end]");
    out_steps.push_back(static_cast<std::size_t>(std::llround(t / dt)));
  }

  HJSolution sol;
  sol.grid = hg.grid;
  sol.dt = dt;
  sol.alpha_floor = marcher.alpha_floor();
  sol.steps = steps;
  std::vector<double> w = hg.initial_field();
  auto store = [&](std::size_t n) {
    for (std::size_t s : out_steps)
      if (s == n && n != steps) {
        sol.times.push_back(static_cast<double>(n) * dt);
        sol.fields.push_back(w);
      }
  };
  store(0);
  for (std::size_t n = 1; n <= steps; ++n) {
    marcher.step(w, static_cast<double>(n - 1) * dt);
    sol.max_alpha = std::max(sol.max_alpha, marcher.last_alpha());
    store(n);
  }
  sol.times.push_back(hg.t_end);
  sol.fields.push_back(std::move(w));
  return sol;
}

// ---------------------------------------------------------------------------
// Closed-form piecewise solutions

enum class ExplicitTag {
  SuperW1SmallLambda,
  SuperW1LargeLambda,
  SuperW2CaseA,
  SuperW2CaseB,
  SubW2LargeLambdaU,
  SubW2SmallLambdaU,
  SubW3
};

inline std::string_view to_string(ExplicitTag t) {
  switch (t) {
    case ExplicitTag::SuperW1SmallLambda: return "super_w1_small_lambda";
    case ExplicitTag::SuperW1LargeLambda: return "super_w1_large_lambda";
    case ExplicitTag::SuperW2CaseA: return "super_w2_case_a";
    case ExplicitTag::SuperW2CaseB: return "super_w2_case_b";
    case ExplicitTag::SubW2LargeLambdaU: return "sub_w2_large_lambda_u";
    case ExplicitTag::SubW2SmallLambdaU: return "sub_w2_small_lambda_u";
    case ExplicitTag::SubW3: return "sub_w3";
  }
  return "?";
}

struct ExplicitSolution {
  ExplicitTag tag = ExplicitTag::SubW2SmallLambdaU;
  double lambda = 1.0;  ///< lambda_v+ (w1), lambda_u (w2) or lambda_v- (w3)
  double sigma1 = 2.0;
  double a = 0.0;
  double d = 1.0;
  double r = 1.0;

  /// v-exponent supersolution for decay lambda_v+.
  static ExplicitSolution super_w1(double d, double r, double lambda_v_plus) {
    detail::require(d > 0.0 && r > 0.0 && lambda_v_plus > 0.0, "super_w1 needs d, r, lambda > 0");
    const auto tag = lambda_v_plus <= std::sqrt(r / d) ? ExplicitTag::SuperW1SmallLambda
                                                       : ExplicitTag::SuperW1LargeLambda;
    return {tag, lambda_v_plus, kpp_speed(d, r, lambda_v_plus), 0.0, d, r};
  }
  /// u-exponent supersolution; case a when sigma1 < 2 lambda_u.
  static ExplicitSolution super_w2(double sigma1, double lambda_u, double a) {
    detail::require(sigma1 > 0.0 && lambda_u > 0.0 && a >= 0.0 && a < 1.0,
                    "super_w2 needs sigma1, lambda_u > 0 and a in [0,1)");
    detail::require(sigma1 >= kpp_speed(1.0, 1.0, lambda_u) * (1.0 - 1e-12),
                    "super_w2 needs sigma1 >= sigma2 (faster v)");
    if (sigma1 < 2.0 * lambda_u) {
      detail::require(0.5 * sigma1 > std::sqrt(a), "super_w2 case a needs sigma1 > 2 sqrt(a)");
      detail::require(sigma1 <= 2.0 * (std::sqrt(a) + std::sqrt(1.0 - a)),
                      "super_w2 case a needs sigma1 <= 2 (sqrt(a) + sqrt(1-a))");
      return {ExplicitTag::SuperW2CaseA, lambda_u, sigma1, a, 1.0, 1.0};
    }
    const double lt = tilde_lambda_nlp(sigma1, lambda_u, a);
    detail::require(lt > 0.0 && lt <= std::sqrt(1.0 - a),
                    "super_w2 case b needs 0 < nonlocal decay rate <= sqrt(1-a)");
    return {ExplicitTag::SuperW2CaseB, lambda_u, sigma1, a, 1.0, 1.0};
  }
  /// True when one of the two explicit super_w2 formulas applies.
  static bool super_w2_available(double sigma1, double lambda_u, double a) {
    if (!(sigma1 > 0.0 && lambda_u > 0.0 && a >= 0.0 && a < 1.0)) return false;
    if (sigma1 < kpp_speed(1.0, 1.0, lambda_u) * (1.0 - 1e-12)) return false;
    if (sigma1 < 2.0 * lambda_u)
      return 0.5 * sigma1 > std::sqrt(a) && sigma1 <= 2.0 * (std::sqrt(a) + std::sqrt(1.0 - a));
    const double lt = tilde_lambda_nlp(sigma1, lambda_u, a);
    return lt > 0.0 && lt <= std::sqrt(1.0 - a);
  }
  /// u-exponent subsolution (no competition).
  static ExplicitSolution sub_w2(double lambda_u) {
    detail::require(lambda_u > 0.0, "sub_w2 needs lambda_u > 0");
    return {lambda_u > 1.0 ? ExplicitTag::SubW2LargeLambdaU : ExplicitTag::SubW2SmallLambdaU,
            lambda_u, 2.0, 0.0, 1.0, 1.0};
  }
  /// Reflected v-exponent subsolution for decay lambda_v-.
  static ExplicitSolution sub_w3(double d, double r, double lambda_v_minus) {
    detail::require(d > 0.0 && r > 0.0 && lambda_v_minus > 0.0, "sub_w3 needs d, r, lambda > 0");
    return {ExplicitTag::SubW3, lambda_v_minus, 0.0, 0.0, d, r};
  }
};

/// Exact evaluation; breakpoints follow the non-strict inequalities of each
/// formula. At t = 0 the common initial datum lambda max(x, 0) is returned.
inline double eval_explicit(const ExplicitSolution& s, double t, double x) {
  detail::require(t >= 0.0, "explicit solutions are defined for t >= 0");
  const double lam = s.lambda;
  if (t == 0.0) return lam * std::max(x, 0.0);
  const double z = x / t;
  switch (s.tag) {
    case ExplicitTag::SuperW1SmallLambda: {
      const double c = s.d * lam + s.r / lam;
      if (x < 0.0 || z <= c) return 0.0;
      return lam * (x - c * t);
    }
    case ExplicitTag::SuperW1LargeLambda: {
      if (x < 0.0) return 0.0;
      if (z > 2.0 * s.d * lam) return lam * (x - (s.d * lam + s.r / lam) * t);
      if (z > 2.0 * std::sqrt(s.d * s.r)) return t / (4.0 * s.d) * (z * z - 4.0 * s.d * s.r);
      return 0.0;
    }
    case ExplicitTag::SuperW2CaseA: {
      const double s1 = s.sigma1;
      const double sl = 0.5 * s1 - std::sqrt(s.a);
      const double c_bar = sl + (1.0 - s.a) / sl;
      if (z >= 2.0 * lam) return lam * (x - (lam + 1.0 / lam) * t);
      if (z >= s1) return 0.25 * t * (z * z - 4.0);
      if (z > c_bar) return sl * (x - c_bar * t);
      return 0.0;
    }
    case ExplicitTag::SuperW2CaseB: {
      const double s1 = s.sigma1;
      const double lt = tilde_lambda_nlp(s1, lam, s.a);
      const double ct = lt + (1.0 - s.a) / lt;
      if (z >= s1) return lam * (x - (lam + 1.0 / lam) * t);
      if (z > ct) return lt * (x - ct * t);
      return 0.0;
    }
    case ExplicitTag::SubW2LargeLambdaU: {
      if (z >= 2.0 * lam) return lam * (x - (lam + 1.0 / lam) * t);
      if (z >= 2.0) return 0.25 * t * (z * z - 4.0);
      return 0.0;
    }
    case ExplicitTag::SubW2SmallLambdaU:
      return lam * std::max(x - (lam + 1.0 / lam) * t, 0.0);
    case ExplicitTag::SubW3:
      return lam * std::max(x - (s.d * lam + s.r / lam) * t, 0.0);
  }
  return 0.0;
}

inline std::vector<double> sample_explicit(const ExplicitSolution& s, const Grid1D& g, double t) {
  std::vector<double> w(g.n);
  for (std::size_t i = 0; i < g.n; ++i) w[i] = eval_explicit(s, t, g.x(i));
  return w;
}

/// Largest violations of sub <= w <= super over positions in [x_lo, x_hi].
struct SandwichGap {
  double below_sub = 0.0;    ///< max(sub - w), <= 0 when w lies above the subsolution
  double above_super = 0.0;  ///< max(w - super)
  std::size_t points = 0;
};

inline SandwichGap sandwich_gap(const std::vector<double>& x, const std::vector<double>& w, double t,
                                const ExplicitSolution& sub, const std::optional<ExplicitSolution>& super,
                                double x_lo, double x_hi) {
  detail::require(x.size() == w.size(), "position and value arrays differ in length");
  SandwichGap g{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < x_lo || x[i] > x_hi) continue;
    g.below_sub = std::max(g.below_sub, eval_explicit(sub, t, x[i]) - w[i]);
    if (super) g.above_super = std::max(g.above_super, w[i] - eval_explicit(*super, t, x[i]));
    ++g.points;
  }
  if (g.points == 0) throw ValidationError("no grid points inside the comparison window");
  if (!super) g.above_super = 0.0;
  return g;
}

// ---------------------------------------------------------------------------
// Free boundary of the zero set

namespace detail {
/// Rightmost crossing of level `eps` by a field that is zero on the left.
inline std::optional<double> level_crossing(const std::vector<double>& w, const Grid1D& g,
                                            double eps) {
  for (std::size_t i = g.n - 1; i-- > 0;)
    if (w[i] < eps && w[i + 1] >= eps) return g.x(i) + g.dx * (eps - w[i]) / (w[i + 1] - w[i]);
  return std::nullopt;
}
}  // namespace detail

/// Speed of the right edge of {w = 0} at time t. The edge is located at level
/// eps = 10 dx s (s the local slope) and extrapolated linearly back to w = 0,
/// which removes the O(10 dx) offset of the raw level crossing.
inline double zero_set_speed(const std::vector<double>& w, const Grid1D& g, double t) {
  detail::require(w.size() == g.n, "field size does not match grid");
  detail::require(t > 0.0, "zero_set_speed needs t > 0");
  bool has_zero = false;
  for (double val : w) {
    detail::require(val >= 0.0 && std::isfinite(val), "field must be finite and nonnegative");
    has_zero = has_zero || val <= 1e-14;
  }
  if (!has_zero) throw ValidationError("zero set is empty");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < g.n; ++i) s = std::max(s, (w[i + 1] - w[i]) / g.dx);
  if (!(s > 0.0) || w.back() <= 1e-14) throw ValidationError("zero set touches the right boundary");

  double x_eps = 0.0, eps = 0.0;
  for (int it = 0; it < 8; ++it) {
    eps = 10.0 * g.dx * s;
    const auto hi = detail::level_crossing(w, g, eps);
    const auto lo = detail::level_crossing(w, g, 0.5 * eps);
    if (!hi || !lo) throw ValidationError("zero set touches the right boundary");
    x_eps = *hi;
    const double s_new = 0.5 * eps / std::max(*hi - *lo, 1e-300);
    const bool done = std::abs(s_new - s) <= 1e-6 * s;
    s = s_new;
    if (done) break;
  }
  return (x_eps - eps / s) / t;
}

// ---------------------------------------------------------------------------
// WKB transform

struct WkbField {
  double t = 0.0;            ///< rescaled time eps * t_sim
  std::vector<double> x;     ///< rescaled positions eps * x_sim
  std::vector<double> w;     ///< -eps log(field)
};

inline WkbField wkb_transform(const std::vector<double>& field, const Grid1D& g, double t_sim,
                              double epsilon, double x_lo = -std::numeric_limits<double>::infinity(),
                              double x_hi = std::numeric_limits<double>::infinity()) {
  detail::require(epsilon > 0.0, "epsilon must be > 0");
  detail::require(field.size() == g.n, "field size does not match grid");
  WkbField out;
  out.t = epsilon * t_sim;
  for (std::size_t i = 0; i < g.n; ++i) {
    const double xs = epsilon * g.x(i);
    if (xs < x_lo || xs > x_hi) continue;
    if (!(field[i] > 0.0))
      throw ValidationError("WKB transform needs a positive field (index " + std::to_string(i) + ")");
    out.x.push_back(xs);
    out.w.push_back(-epsilon * std::log(field[i]));
  }
  return out;
}

}  // namespace lvspread
