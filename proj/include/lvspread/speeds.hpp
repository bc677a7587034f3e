#pragma once

// Closed-form spreading speeds for the two-species Lotka-Volterra
// competition-diffusion system
//
//   u_t - u_xx   = u (1 - u - a v)
//   v_t - d v_xx = r v (1 - b u - v)
//
// with exponentially decaying initial data u0 ~ exp(-lambda_u x),
// v0 ~ exp(-lambda_v+ x) at +inf and v0 ~ exp(lambda_v- x) at -inf.
// Species v is the faster one (sigma1 >= sigma2).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lvspread/error.hpp"

namespace lvspread {

enum class Regime { WeakCompetition, MixedCase, Unsupported };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::WeakCompetition: return "weak_competition";
    case Regime::MixedCase: return "mixed_case";
    case Regime::Unsupported: return "unsupported";
  }
  return "?";
}

struct ModelParams {
  double d = 1.0;  ///< diffusion ratio of v
  double r = 1.0;  ///< growth-rate ratio of v
  double a = 0.5;  ///< competition of v on u
  double b = 0.5;  ///< competition of u on v

  void validate() const {
    detail::require(std::isfinite(d) && d > 0.0, "d must be > 0");
    detail::require(std::isfinite(r) && r > 0.0, "r must be > 0");
    detail::require(std::isfinite(a) && a >= 0.0, "a must be >= 0");
    detail::require(std::isfinite(b) && b >= 0.0, "b must be >= 0");
  }

  [[nodiscard]] Regime regime() const {
    if (a < 1.0 && b < 1.0) return Regime::WeakCompetition;
    if (a < 1.0 && b > 1.0) return Regime::MixedCase;
    return Regime::Unsupported;
  }
};

struct DecayRates {
  double lambda_u = 1.0;
  double lambda_v_plus = 1.0;
  double lambda_v_minus = 1.0;

  void validate() const {
    detail::require(std::isfinite(lambda_u) && lambda_u > 0.0, "lambda_u must be > 0");
    detail::require(std::isfinite(lambda_v_plus) && lambda_v_plus > 0.0,
                    "lambda_v_plus must be > 0");
    detail::require(std::isfinite(lambda_v_minus) && lambda_v_minus > 0.0,
                    "lambda_v_minus must be > 0");
  }
};

/// Linear spreading speeds. sigma3 exists only when b < 1 (v can invade (1,0)),
/// sigma2_prime only when a < 1.
struct SigmaSet {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  std::optional<double> sigma3;
  std::optional<double> sigma2_prime;
};

/// Speed of a KPP front with diffusion `diff`, growth `growth` and initial
/// decay `lambda`: diff*m + growth/m with m = min(lambda, sqrt(growth/diff)).
inline double kpp_speed(double diff, double growth, double lambda) {
  const double m = std::min(lambda, std::sqrt(growth / diff));
  return diff * m + growth / m;
}

inline std::pair<double, double> coexistence_equilibrium(const ModelParams& p) {
  p.validate();
  const double den = 1.0 - p.a * p.b;
  if (std::abs(den) < 1e-14) throw ValidationError("coexistence state undefined: a*b == 1");
  return {(1.0 - p.a) / den, (1.0 - p.b) / den};
}

inline SigmaSet sigma_set(const ModelParams& p, const DecayRates& decay) {
  p.validate();
  decay.validate();
  SigmaSet s;
  s.sigma1 = kpp_speed(p.d, p.r, decay.lambda_v_plus);
  s.sigma2 = kpp_speed(1.0, 1.0, decay.lambda_u);
  if (p.b < 1.0) s.sigma3 = kpp_speed(p.d, p.r * (1.0 - p.b), decay.lambda_v_minus);
  if (p.a < 1.0) s.sigma2_prime = kpp_speed(1.0, 1.0 - p.a, decay.lambda_u);
  return s;
}

// ---------------------------------------------------------------------------
// Nonlocally pulled speed of the slower species

enum class NlpCase { PulledByFaster, NonlocalLambda, LocallyPulled };

inline std::string_view to_string(NlpCase c) {
  switch (c) {
    case NlpCase::PulledByFaster: return "pulled_by_faster";
    case NlpCase::NonlocalLambda: return "nonlocal_lambda";
    case NlpCase::LocallyPulled: return "locally_pulled";
  }
  return "?";
}

struct NlpSpeed {
  double speed = 0.0;
  NlpCase tag = NlpCase::LocallyPulled;
  double lambda = 0.0;  ///< decay rate behind the u-front; speed = lambda + (1-a)/lambda
};

namespace detail {
inline void check_nlp_args(double sigma1, double lambda_u, double a) {
  require(std::isfinite(sigma1) && sigma1 > 0.0, "sigma1 must be > 0");
  require(std::isfinite(lambda_u) && lambda_u > 0.0, "lambda_u must be > 0");
  require(std::isfinite(a) && a >= 0.0 && a < 1.0, "a must lie in [0, 1)");
}
}  // namespace detail

inline double tilde_lambda_nlp(double sigma1, double lambda_u, double a) {
  detail::check_nlp_args(sigma1, lambda_u, a);
  const double q = sigma1 - 2.0 * lambda_u;
  // Small root written without cancellation: (s - sqrt(q^2 + 4a)) / 2.
  return 2.0 * (lambda_u * (sigma1 - lambda_u) - a) / (sigma1 + std::sqrt(q * q + 4.0 * a));
}

/// Three-branch evaluation. Ties go to the branch whose inequality is
/// non-strict (sigma1 == 2 lambda_u selects the nonlocal-lambda branch).
inline NlpSpeed hat_c_nlp(double sigma1, double lambda_u, double a) {
  detail::check_nlp_args(sigma1, lambda_u, a);
  const double sa = std::sqrt(a);
  const double s1a = std::sqrt(1.0 - a);
  if (sigma1 < 2.0 * lambda_u && sigma1 <= 2.0 * (sa + s1a)) {
    const double lam = 0.5 * sigma1 - sa;
    if (!(lam > 0.0)) throw ValidationError("sigma1 <= 2 sqrt(a): outside the speed formula domain");
    return {lam + (1.0 - a) / lam, NlpCase::PulledByFaster, lam};
  }
  if (sigma1 >= 2.0 * lambda_u) {
    const double lam = tilde_lambda_nlp(sigma1, lambda_u, a);
    if (lam <= s1a) {
      if (!(lam > 0.0))
        throw ValidationError("nonlocal decay rate <= 0: requires lambda_u (sigma1 - lambda_u) > a");
      return {lam + (1.0 - a) / lam, NlpCase::NonlocalLambda, lam};
    }
  }
  return {2.0 * s1a, NlpCase::LocallyPulled, s1a};
}

/// Exponent of the u-density at the leading v-front, i.e. the subsolution
/// exponent evaluated at (t, x) = (1, sigma1), written through the nlp quantities.
inline double mu_hat(double sigma1, double lambda_u, double a) {
  detail::check_nlp_args(sigma1, lambda_u, a);
  if (sigma1 < 2.0 * lambda_u) {
    const double s = 0.5 * sigma1 - std::sqrt(a);
    const double c_bar = s + (1.0 - a) / s;
    return s * (sigma1 - c_bar);
  }
  const double lam = tilde_lambda_nlp(sigma1, lambda_u, a);
  const double c_tilde = lam + (1.0 - a) / lam;
  return lam * (sigma1 - c_tilde);
}

// ---------------------------------------------------------------------------
// LLW traveling-wave speeds: only an interval is known in closed form.

struct LLWBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool degenerate = false;  ///< set when the competitor does not admit a coexistence front

  [[nodiscard]] bool contains(double c, double rel_slack = 0.0) const {
    return c >= lower * (1.0 - rel_slack) && c <= upper * (1.0 + rel_slack);
  }
  [[nodiscard]] double clamp(double c) const { return std::clamp(c, lower, upper); }
};

/// First: bounds on c_LLW (u invading the v-state). Second: bounds on the
/// mirrored speed (v invading the u-state).
inline std::pair<LLWBounds, LLWBounds> llw_bounds(const ModelParams& p) {
  p.validate();
  detail::require(p.a < 1.0, "c_LLW bounds require a < 1");
  LLWBounds c{2.0 * std::sqrt(1.0 - p.a), 2.0, false};
  LLWBounds ct;
  if (p.b < 1.0) {
    ct = {2.0 * std::sqrt(p.d * p.r * (1.0 - p.b)), 2.0 * std::sqrt(p.d * p.r), false};
  } else {
    ct = {0.0, 2.0 * std::sqrt(p.d * p.r), true};
  }
  return {c, ct};
}

/// Decay rate of the minimal LLW wave: (c - sqrt(c^2 - 4(1-a))) / 2.
inline double lambda_llw(double c_llw, double a) {
  const double disc = std::max(0.0, c_llw * c_llw - 4.0 * (1.0 - a));
  return 0.5 * (c_llw - std::sqrt(disc));
}

inline double tilde_lambda_llw(double c_llw, double d, double r, double b) {
  const double disc = std::max(0.0, c_llw * c_llw - 4.0 * d * r * (1.0 - b));
  return (c_llw - std::sqrt(disc)) / (2.0 * d);
}

/// Upper bound on the u-speed inside 0 <= x <= c_hat t when u decays like
/// exp(-mu_hat t) on the ray x = c_hat t.
inline double lemma_b2_speed_cap(double c_hat, double mu_hat_value, double c_llw, double a) {
  detail::require(a >= 0.0 && a < 1.0, "a must lie in [0, 1)");
  detail::require(c_hat > 2.0, "speed cap requires c_hat > 2");
  detail::require(mu_hat_value > 0.0, "speed cap requires mu_hat > 0");
  detail::require(c_llw >= 2.0 * std::sqrt(1.0 - a) * (1.0 - 1e-12),
                  "c_llw below 2 sqrt(1-a) has no real decay rate");
  const double lam = lambda_llw(c_llw, a);
  if (mu_hat_value >= lam * (c_hat - c_llw)) return c_llw;
  const double disc = c_hat * c_hat - 4.0 * (mu_hat_value + 1.0 - a);
  if (disc < 0.0) throw ValidationError("speed cap: negative discriminant c_hat^2 - 4(mu_hat + 1 - a)");
  return c_hat - 2.0 * mu_hat_value / (c_hat - std::sqrt(disc));
}

/// Mirrored cap for v spreading leftward into the (1,0) state.
inline double lemma_b2_speed_cap_mirrored(double c_hat, double mu_hat_value, double tilde_c_llw,
                                          double d, double r, double b) {
  detail::require(d > 0.0 && r > 0.0, "d, r must be > 0");
  detail::require(b >= 0.0 && b < 1.0, "b must lie in [0, 1)");
  detail::require(c_hat > 2.0 * std::sqrt(d * r), "speed cap requires c_hat > 2 sqrt(d r)");
  detail::require(mu_hat_value > 0.0, "speed cap requires mu_hat > 0");
  detail::require(tilde_c_llw >= 2.0 * std::sqrt(d * r * (1.0 - b)) * (1.0 - 1e-12),
                  "tilde_c_llw below 2 sqrt(d r (1-b)) has no real decay rate");
  const double lam = tilde_lambda_llw(tilde_c_llw, d, r, b);
  if (mu_hat_value >= lam * (c_hat - tilde_c_llw)) return tilde_c_llw;
  const double disc = c_hat * c_hat - 4.0 * d * (mu_hat_value + r * (1.0 - b));
  if (disc < 0.0) throw ValidationError("speed cap: negative discriminant");
  return c_hat - 2.0 * d * mu_hat_value / (c_hat - std::sqrt(disc));
}

// ---------------------------------------------------------------------------
// Assembled report

enum class Provenance { Measured, LowerBound, UpperBound, UserSupplied };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Measured: return "measured";
    case Provenance::LowerBound: return "lower-bound";
    case Provenance::UpperBound: return "upper-bound";
    case Provenance::UserSupplied: return "user-supplied";
  }
  return "?";
}

struct LlwInput {
  double value = 0.0;
  Provenance provenance = Provenance::UserSupplied;
};

enum class SpeedRegime { Separated, TangFife, MixedCase };

inline std::string_view to_string(SpeedRegime r) {
  switch (r) {
    case SpeedRegime::Separated: return "separated";
    case SpeedRegime::TangFife: return "tang_fife";
    case SpeedRegime::MixedCase: return "mixed_case";
  }
  return "?";
}

struct SpeedReport {
  SpeedRegime regime = SpeedRegime::Separated;
  SigmaSet sigma;
  double c1 = 0.0;
  std::optional<double> c2;  ///< absent in the Tang-Fife regime
  std::optional<double> c3;  ///< absent in the mixed case
  std::optional<NlpSpeed> nlp;
  std::optional<double> tilde_lambda_nlp;
  std::optional<double> mu_hat;
  LlwInput c_llw_input;
  std::optional<LlwInput> tilde_c_llw_input;
  std::optional<std::pair<double, double>> coexistence;
  std::vector<std::string> warnings;
};

/// `c_llw` is c_LLW in the weak-competition regime and the (1,0)->(0,1)
/// front speed in the mixed case. `tilde_c_llw` is required when b < 1.
inline SpeedReport assemble_speeds(const ModelParams& p, const DecayRates& decay, LlwInput c_llw,
                                   std::optional<LlwInput> tilde_c_llw) {
  p.validate();
  decay.validate();
  const Regime regime = p.regime();
  if (regime == Regime::Unsupported)
    throw ValidationError("parameters outside the supported regimes (need a < 1 and b != 1)");

  SpeedReport rep;
  rep.sigma = sigma_set(p, decay);
  const double s1 = rep.sigma.sigma1;
  const double s2 = rep.sigma.sigma2;
  const double tie = 1e-12 * std::max(1.0, s1);
  if (s1 < s2 - tie)
    throw ValidationError("sigma1 < sigma2: v must be the faster species; swap the roles of u and v");
  const bool tang_fife = std::abs(s1 - s2) <= tie;

  const auto [cb, ctb] = llw_bounds(p);
  if (!cb.contains(c_llw.value)) {
    rep.warnings.push_back("c_llw input " + std::to_string(c_llw.value) + " outside [" +
                           std::to_string(cb.lower) + ", " + std::to_string(cb.upper) +
                           "]; clamped");
    c_llw.value = cb.clamp(c_llw.value);
  }
  rep.c_llw_input = c_llw;
  rep.c1 = s1;

  if (regime == Regime::WeakCompetition) {
    if (!tilde_c_llw) throw ValidationError("tilde_c_llw input is required when b < 1");
    if (!ctb.contains(tilde_c_llw->value)) {
      rep.warnings.push_back("tilde_c_llw input " + std::to_string(tilde_c_llw->value) +
                             " outside [" + std::to_string(ctb.lower) + ", " +
                             std::to_string(ctb.upper) + "]; clamped");
      tilde_c_llw->value = ctb.clamp(tilde_c_llw->value);
    }
    rep.tilde_c_llw_input = tilde_c_llw;
    rep.c3 = -std::max(tilde_c_llw->value, *rep.sigma.sigma3);
    rep.coexistence = coexistence_equilibrium(p);
  }

  if (tang_fife) {
    if (regime == Regime::MixedCase)
      throw ValidationError("mixed case requires sigma1 > sigma2");
    rep.regime = SpeedRegime::TangFife;
    return rep;
  }

  rep.regime = regime == Regime::MixedCase ? SpeedRegime::MixedCase : SpeedRegime::Separated;
  rep.nlp = hat_c_nlp(s1, decay.lambda_u, p.a);
  if (s1 >= 2.0 * decay.lambda_u) rep.tilde_lambda_nlp = tilde_lambda_nlp(s1, decay.lambda_u, p.a);
  rep.mu_hat = mu_hat(s1, decay.lambda_u, p.a);
  rep.c2 = std::max(c_llw.value, rep.nlp->speed);

  const bool ordered = *rep.c2 < rep.c1 && *rep.c2 > 0.0 && (!rep.c3 || *rep.c3 < 0.0);
  if (!ordered) rep.warnings.push_back("speed ordering c3 < 0 < c2 < c1 violated");
  return rep;
}

// ---------------------------------------------------------------------------
// Trade-off curves between c1 = sigma1 and c2 (mixed case, a < 1 < b)

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_open = false;
};

class TradeoffCurves {
public:
  TradeoffCurves(double a, double lambda_u) : a_(a), lambda_u_(lambda_u) {
    detail::require(a >= 0.0 && a < 1.0, "a must lie in [0, 1)");
    detail::require(lambda_u > 0.0, "lambda_u must be > 0");
  }

  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double lambda_u() const { return lambda_u_; }

  /// c2 when the u-front is pulled by the v-front (first nlp branch).
  [[nodiscard]] double f(double sigma1) const {
    const double s = 0.5 * sigma1 - std::sqrt(a_);
    detail::require(s > 0.0, "f requires sigma1 > 2 sqrt(a)");
    return s + (1.0 - a_) / s;
  }

  /// c2 in the nonlocal-lambda branch.
  [[nodiscard]] double g(double sigma1) const {
    const double q = sigma1 - 2.0 * lambda_u_;
    const double lam = 2.0 * (lambda_u_ * (sigma1 - lambda_u_) - a_) / (sigma1 + std::sqrt(q * q + 4.0 * a_));
    detail::require(lam > 0.0, "g requires lambda_u (sigma1 - lambda_u) > a");
    return lam + (1.0 - a_) / lam;
  }

  [[nodiscard]] double f_inverse(double c2) const {
    return 2.0 * small_root(c2) + 2.0 * std::sqrt(a_);
  }

  [[nodiscard]] double g_inverse(double c2) const {
    const double ell = small_root(c2);
    detail::require(ell < lambda_u_, "g_inverse requires (c2 - sqrt(c2^2 - 4(1-a)))/2 < lambda_u");
    return lambda_u_ + ell + a_ / (lambda_u_ - ell);
  }

  [[nodiscard]] double g_infinity() const { return lambda_u_ + (1.0 - a_) / lambda_u_; }

  /// sigma1 range on which f is decreasing and invertible.
  [[nodiscard]] Interval f_domain() const {
    return {2.0 * std::sqrt(a_), 2.0 * (std::sqrt(a_) + std::sqrt(1.0 - a_)), true};
  }

  /// sigma1 range on which g is decreasing and invertible (nonlocal rate in (0, sqrt(1-a)]).
  /// upper is +inf when lambda_u <= sqrt(1-a).
  [[nodiscard]] Interval g_domain() const {
    const double s1a = std::sqrt(1.0 - a_);
    const double lo = lambda_u_ + a_ / lambda_u_;
    const double hi = lambda_u_ > s1a ? lambda_u_ + s1a + a_ / (lambda_u_ - s1a)
                                      : std::numeric_limits<double>::infinity();
    return {lo, hi, true};
  }

  /// c2 range on which g_inverse is a right inverse of g.
  [[nodiscard]] Interval g_inverse_domain() const {
    const double s1a = std::sqrt(1.0 - a_);
    if (lambda_u_ > s1a) return {2.0 * s1a, std::numeric_limits<double>::infinity(), false};
    return {g_infinity(), std::numeric_limits<double>::infinity(), true};
  }

private:
  /// (c2 - sqrt(c2^2 - 4(1-a))) / 2 in cancellation-free form.
  [[nodiscard]] double small_root(double c2) const {
    return 2.0 * (1.0 - a_) / (c2 + std::sqrt(disc(c2)));
  }

  [[nodiscard]] double disc(double c2) const {
    const double v = c2 * c2 - 4.0 * (1.0 - a_);
    detail::require(v >= -1e-14, "inverse requires c2 >= 2 sqrt(1-a)");
    return std::max(0.0, v);
  }

  double a_;
  double lambda_u_;
};

/// c2(sigma1) in the mixed case for a measured (1,0)->(0,1) front speed.
inline double mixed_case_c2(double sigma1, double lambda_u, double a, double hat_c_llw) {
  return std::max(hat_c_llw, hat_c_nlp(sigma1, lambda_u, a).speed);
}

enum class Realizability { NotRealizable, UniqueLambdaVPlus, UniquePair };

inline std::string_view to_string(Realizability r) {
  switch (r) {
    case Realizability::NotRealizable: return "not_realizable";
    case Realizability::UniqueLambdaVPlus: return "unique_lambda_v_plus";
    case Realizability::UniquePair: return "unique_pair";
  }
  return "?";
}

struct Realization {
  Realizability kind = Realizability::NotRealizable;
  std::optional<double> lambda_v_plus;
  std::optional<double> lambda_u;          ///< UniquePair only
  std::optional<double> lambda_u_min;      ///< UniqueLambdaVPlus: any lambda_u >= this works
  int iterations = 0;
};

/// Which decay rates (if any) produce the speed pair (c_bar, c_under) in the
/// mixed case. `hat_c_llw` is the (1,0)->(0,1) front speed.
inline Realization realizability(double c_bar, double c_under, const ModelParams& p,
                                 double hat_c_llw) {
  p.validate();
  detail::require(p.a < 1.0, "realizability requires a < 1");
  detail::require(c_bar > 2.0 * std::sqrt(p.d * p.r), "c_bar must exceed 2 sqrt(d r)");
  detail::require(c_under > hat_c_llw, "c_under must exceed the (1,0)->(0,1) front speed");
  detail::require(c_bar > c_under, "c_bar must exceed c_under");
  detail::require(c_bar > 2.0 * std::sqrt(p.a), "c_bar must exceed 2 sqrt(a)");

  const double a = p.a;
  const double sa = std::sqrt(a);
  const double s1a = std::sqrt(1.0 - a);
  // Lowest attainable c2 for this c1: f on its monotone range, 2 sqrt(1-a) beyond it.
  const double f_bar =
      c_bar <= 2.0 * (sa + s1a) ? TradeoffCurves(a, 1.0).f(c_bar) : 2.0 * s1a;
  const double lvp = (c_bar - std::sqrt(c_bar * c_bar - 4.0 * p.d * p.r)) / (2.0 * p.d);

  Realization out;
  if (std::abs(c_under - f_bar) <= 1e-12 * std::max(1.0, std::abs(f_bar))) {
    out.kind = Realizability::UniqueLambdaVPlus;
    out.lambda_v_plus = lvp;
    out.lambda_u_min = 0.5 * c_bar;
    return out;
  }
  if (c_under < f_bar) return out;

  double lo = 0.5 * (c_bar - std::sqrt(c_bar * c_bar - 4.0 * a));
  double hi = 0.5 * c_bar;
  if (c_bar > 2.0 * (s1a + sa)) {
    const double q = c_bar - 2.0 * s1a;
    hi = 0.5 * (c_bar - std::sqrt(q * q - 4.0 * a));
  }
  auto g_at = [&](double lu) {
    const double q = c_bar - 2.0 * lu;
    const double lam = 0.5 * (c_bar - std::sqrt(q * q + 4.0 * a));
    return lam + (1.0 - a) / lam;
  };
  if (!(c_under > g_at(hi)))
    throw NumericalError("realizability: c_under not bracketed by the lambda_u interval");

  int it = 0;
  for (; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g_at(mid) > c_under)
      lo = mid;
    else
      hi = mid;
  }
  out.kind = Realizability::UniquePair;
  out.lambda_v_plus = lvp;
  out.lambda_u = 0.5 * (lo + hi);
  out.iterations = it;
  return out;
}

/// Sub-case labels (a1)-(b3) of the mixed-case c2(sigma1) diagram.
enum class MixedSubcase { A1, A2, A3, B1, B2, B3, Unclassified };

inline std::string_view to_string(MixedSubcase s) {
  switch (s) {
    case MixedSubcase::A1: return "a1";
    case MixedSubcase::A2: return "a2";
    case MixedSubcase::A3: return "a3";
    case MixedSubcase::B1: return "b1";
    case MixedSubcase::B2: return "b2";
    case MixedSubcase::B3: return "b3";
    case MixedSubcase::Unclassified: return "unclassified";
  }
  return "?";
}

/// Boundaries between sub-cases are not asserted to be exclusive.
inline MixedSubcase mixed_case_subcase(const ModelParams& p, double lambda_u, double hat_c_llw) {
  p.validate();
  detail::require(p.a < 1.0 && lambda_u > 0.0, "requires a < 1 and lambda_u > 0");
  const TradeoffCurves curves(p.a, lambda_u);
  const bool group_a = curves.g_infinity() <= hat_c_llw;
  const double upper = std::sqrt(p.a) + std::sqrt(1.0 - p.a);
  const double sdr = std::sqrt(p.d * p.r);
  if (lambda_u >= upper) return group_a ? MixedSubcase::A1 : MixedSubcase::B1;
  if (lambda_u < sdr) return group_a ? MixedSubcase::A3 : MixedSubcase::B3;
  if (!group_a) return MixedSubcase::B2;
  try {
    if (curves.g_inverse(hat_c_llw) > 2.0 * lambda_u) return MixedSubcase::A2;
  } catch (const ValidationError&) {
  }
  return MixedSubcase::Unclassified;
}

}  // namespace lvspread
