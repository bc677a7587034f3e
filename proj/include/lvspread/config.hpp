#pragma once

// JSON experiment configuration: parsing, defaults, validation.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lvspread/error.hpp"
#include "lvspread/speeds.hpp"

namespace lvspread {

using json = nlohmann::json;

enum class ExperimentKind { Speeds, Simulate, MeasureLlw, Hj, TangFife, MixedCase, Forced, Sweep };

inline std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Speeds: return "speeds";
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::MeasureLlw: return "measure_llw";
    case ExperimentKind::Hj: return "hj";
    case ExperimentKind::TangFife: return "tangfife";
    case ExperimentKind::MixedCase: return "mixedcase";
    case ExperimentKind::Forced: return "forced";
    case ExperimentKind::Sweep: return "sweep";
  }
  return "?";
}

inline ExperimentKind parse_kind(std::string_view s, std::string_view field = "kind") {
  for (auto k : {ExperimentKind::Speeds, ExperimentKind::Simulate, ExperimentKind::MeasureLlw,
                 ExperimentKind::Hj, ExperimentKind::TangFife, ExperimentKind::MixedCase,
                 ExperimentKind::Forced, ExperimentKind::Sweep})
    if (s == to_string(k)) return k;
  // CLI spelling
  if (s == "measure-llw") return ExperimentKind::MeasureLlw;
  throw ValidationError(std::string(field) + ": unknown experiment kind '" + std::string(s) + "'");
}

inline bool is_simulation(ExperimentKind k) {
  return k == ExperimentKind::Simulate || k == ExperimentKind::TangFife ||
         k == ExperimentKind::MixedCase || k == ExperimentKind::Forced;
}

enum class LlwSource { Measure, Lower, Upper, Given };

inline std::string_view to_string(LlwSource s) {
  switch (s) {
    case LlwSource::Measure: return "measure";
    case LlwSource::Lower: return "lower";
    case LlwSource::Upper: return "upper";
    case LlwSource::Given: return "given";
  }
  return "?";
}

struct GridSettings {
  std::optional<double> x_min;  ///< empty: sized from the expected front speeds
  std::optional<double> x_max;
  double dx = 0.1;
};

struct TimeSettings {
  double t_end = 100.0;
  double dt = 0.0;  ///< 0: largest stable step
  double sample_interval = 1.0;
  std::vector<double> snapshot_times;  ///< empty: t_end only
};

struct LlwSettings {
  LlwSource source = LlwSource::Lower;
  std::optional<double> c_llw;        ///< Given: c_LLW (or the (1,0)->(0,1) speed in the mixed case)
  std::optional<double> tilde_c_llw;  ///< Given: mirrored speed (b < 1)
  double t_end = 200.0;
  std::optional<double> dx;  ///< empty: grid dx
};

struct ProfileSettings {
  bool enabled = true;
  double eta = 0.15;
  double tol = 0.05;
};

struct Tolerances {
  double c1 = 0.03;
  double c2 = 0.05;
  double c3 = 0.05;
};

struct ForcingSettings {
  double h0 = 0.2;
  double c0 = 1.0;
};

struct HjSettings {
  std::string equation = "u";  ///< u, u_super, u_between, v
  double dx = 0.05;
  double x_min = -2.0;
  std::optional<double> x_max;  ///< empty: covers every breakpoint of the oracles
  double t_end = 1.0;
  std::vector<double> output_times;
  std::optional<double> fixed_alpha;
  double speed_tol = 0.02;
};

struct SweepSettings {
  ExperimentKind kind = ExperimentKind::Speeds;
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  std::vector<double> values;  ///< explicit points instead of min/max/count
};

struct WkbSettings {
  double epsilon = 0.01;
  double band_factor = 3.0;  ///< band = factor * eps |log eps|
};

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::Speeds;
  ModelParams params;
  DecayRates decay;
  GridSettings grid;
  TimeSettings time;
  LlwSettings llw;
  ProfileSettings profile;
  Tolerances tolerances;
  std::optional<ForcingSettings> forcing;
  HjSettings hj;
  std::optional<SweepSettings> sweep;
  std::optional<WkbSettings> wkb;
  double theta0 = 1.0;
  double v_amplitude = 1.0;
  std::string output_dir = "out";
  std::uint64_t seed = 0;  ///< recorded only; every run is deterministic
};

/// Parameter names a sweep may vary.
inline const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"d", "r", "a", "b", "lambda_u", "lambda_v_plus",
                                              "lambda_v_minus", "sigma1"};
  return names;
}

/// Decay rate lambda_v+ <= sqrt(r/d) with d lambda + r / lambda = sigma1.
inline double lambda_v_plus_for_sigma1(const ModelParams& p, double sigma1) {
  const double disc = sigma1 * sigma1 - 4.0 * p.d * p.r;
  detail::require(disc >= 0.0, "sigma1 must be >= 2 sqrt(d r)");
  return (sigma1 - std::sqrt(disc)) / (2.0 * p.d);
}

inline void apply_parameter(ExperimentConfig& c, const std::string& name, double value) {
  if (name == "d") c.params.d = value;
  else if (name == "r") c.params.r = value;
  else if (name == "a") c.params.a = value;
  else if (name == "b") c.params.b = value;
  else if (name == "lambda_u") c.decay.lambda_u = value;
  else if (name == "lambda_v_plus") c.decay.lambda_v_plus = value;
  else if (name == "lambda_v_minus") c.decay.lambda_v_minus = value;
  else if (name == "sigma1") c.decay.lambda_v_plus = lambda_v_plus_for_sigma1(c.params, value);
  else throw ValidationError("sweep.parameter: unknown parameter '" + name + "'");
}

inline std::vector<double> sweep_values(const SweepSettings& s) {
  if (!s.values.empty()) return s.values;
  std::vector<double> v(s.count);
  for (std::size_t i = 0; i < s.count; ++i)
    v[i] = s.count == 1 ? s.min : s.min + (s.max - s.min) * static_cast<double>(i) / static_cast<double>(s.count - 1);
  return v;
}

namespace detail {

class Reader {
public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(where() + "expected an object");
  }

  /// Rejects keys that were never queried.
  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ValidationError("unknown key '" + field(k) + "'");
  }

  bool has(const std::string& k) {
    seen_.insert(k);
    return j_.contains(k) && !j_.at(k).is_null();
  }

  double number(const std::string& k, double def) { return has(k) ? number(k) : def; }
  double number(const std::string& k) {
    seen_.insert(k);
    if (!j_.contains(k)) throw ValidationError("missing required field '" + field(k) + "'");
    const auto& v = j_.at(k);
    if (!v.is_number()) throw ValidationError(field(k) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(field(k) + ": must be finite");
    return x;
  }
  std::optional<double> opt_number(const std::string& k) {
    if (!has(k)) return std::nullopt;
    return number(k);
  }
  std::string string(const std::string& k, const std::string& def) {
    if (!has(k)) return def;
    const auto& v = j_.at(k);
    if (!v.is_string()) throw ValidationError(field(k) + ": expected a string");
    return v.get<std::string>();
  }
  bool boolean(const std::string& k, bool def) {
    if (!has(k)) return def;
    const auto& v = j_.at(k);
    if (!v.is_boolean()) throw ValidationError(field(k) + ": expected true or false");
    return v.get<bool>();
  }
  std::uint64_t unsigned_int(const std::string& k, std::uint64_t def) {
    if (!has(k)) return def;
    const auto& v = j_.at(k);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ValidationError(field(k) + ": expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }
  std::vector<double> numbers(const std::string& k) {
    if (!has(k)) return {};
    const auto& v = j_.at(k);
    if (!v.is_array()) throw ValidationError(field(k) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>()))
        throw ValidationError(field(k) + ": expected an array of finite numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::optional<Reader> object(const std::string& k) {
    if (!has(k)) return std::nullopt;
    return Reader(j_.at(k), field(k));
  }
  [[nodiscard]] std::string field(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

private:
  [[nodiscard]] std::string where() const { return path_.empty() ? "" : path_ + ": "; }
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline void positive(double v, const std::string& field) {
  if (!(v > 0.0)) throw ValidationError(field + ": must be > 0");
}
inline void nonnegative(double v, const std::string& field) {
  if (!(v >= 0.0)) throw ValidationError(field + ": must be >= 0");
}

}  // namespace detail

/// Validates cross-field constraints; throws ValidationError naming the field.
inline void validate(const ExperimentConfig& c) {
  using detail::nonnegative;
  using detail::positive;
  positive(c.params.d, "params.d");
  positive(c.params.r, "params.r");
  nonnegative(c.params.a, "params.a");
  nonnegative(c.params.b, "params.b");
  positive(c.decay.lambda_u, "decay.lambda_u");
  positive(c.decay.lambda_v_plus, "decay.lambda_v_plus");
  positive(c.decay.lambda_v_minus, "decay.lambda_v_minus");
  positive(c.grid.dx, "grid.dx");
  if (c.grid.x_min && c.grid.x_max && !(*c.grid.x_max > *c.grid.x_min))
    throw ValidationError("grid.x_max: must exceed grid.x_min");
  positive(c.time.t_end, "time.t_end");
  nonnegative(c.time.dt, "time.dt");
  positive(c.time.sample_interval, "time.sample_interval");
  for (double t : c.time.snapshot_times)
    if (t < 0.0 || t > c.time.t_end) throw ValidationError("time.snapshot_times: entries must lie in [0, t_end]");
  positive(c.llw.t_end, "llw.t_end");
  if (c.llw.dx) positive(*c.llw.dx, "llw.dx");
  if (c.llw.source == LlwSource::Given && !c.llw.c_llw)
    throw ValidationError("llw.c_llw: required when llw.source is 'given'");
  positive(c.profile.eta, "profile.eta");
  positive(c.profile.tol, "profile.tol");
  positive(c.tolerances.c1, "tolerances.c1");
  positive(c.tolerances.c2, "tolerances.c2");
  positive(c.tolerances.c3, "tolerances.c3");
  if (c.forcing) {
    nonnegative(c.forcing->h0, "forcing.h0");
  }
  positive(c.hj.dx, "hj.dx");
  positive(c.hj.t_end, "hj.t_end");
  positive(c.hj.speed_tol, "hj.speed_tol");
  if (c.hj.x_max && !(*c.hj.x_max > c.hj.x_min)) throw ValidationError("hj.x_max: must exceed hj.x_min");
  if (c.hj.fixed_alpha) positive(*c.hj.fixed_alpha, "hj.fixed_alpha");
  if (c.hj.equation != "u" && c.hj.equation != "u_super" && c.hj.equation != "u_between" &&
      c.hj.equation != "v")
    throw ValidationError("hj.equation: expected one of u, u_super, u_between, v");
  if (c.wkb) {
    positive(c.wkb->epsilon, "wkb.epsilon");
    positive(c.wkb->band_factor, "wkb.band_factor");
  }
  positive(c.theta0, "initial.theta0");
  positive(c.v_amplitude, "initial.v_amplitude");
  if (c.theta0 > 1.0) throw ValidationError("initial.theta0: must be <= 1");
  if (c.v_amplitude > 1.0) throw ValidationError("initial.v_amplitude: must be <= 1");
  if (c.output_dir.empty()) throw ValidationError("output_dir: must not be empty");

  if (c.kind == ExperimentKind::Sweep) {
    if (!c.sweep) throw ValidationError("sweep: required for kind 'sweep'");
    const auto& s = *c.sweep;
    if (s.kind == ExperimentKind::Sweep) throw ValidationError("sweep.kind: sweeps cannot be nested");
    bool known = false;
    for (const auto& n : sweep_parameters()) known = known || n == s.parameter;
    if (!known) throw ValidationError("sweep.parameter: unknown parameter '" + s.parameter + "'");
    if (s.values.empty()) {
      if (s.count == 0) throw ValidationError("sweep.count: must be >= 1 (empty sweep)");
      if (s.count > 1 && !(s.max > s.min)) throw ValidationError("sweep.max: must exceed sweep.min");
    }
  } else if (c.sweep) {
    throw ValidationError("sweep: only allowed for kind 'sweep'");
  }
  if (c.kind == ExperimentKind::Forced && !c.forcing)
    throw ValidationError("forcing: required for kind 'forced'");
}

/// `kind` (from the CLI subcommand) takes precedence over the "kind" key; the
/// two must agree when both are present.
inline ExperimentConfig config_from_json(const json& j, std::optional<ExperimentKind> kind = {}) {
  ExperimentConfig c;
  detail::Reader r(j, "");
  c.name = r.string("name", c.name);
  if (r.has("kind")) {
    c.kind = parse_kind(r.string("kind", ""));
    if (kind && *kind != c.kind)
      throw ValidationError("kind: config says '" + std::string(to_string(c.kind)) +
                            "' but '" + std::string(to_string(*kind)) + "' was requested");
  } else if (kind) {
    c.kind = *kind;
  }
  if (auto p = r.object("params")) {
    c.params.d = p->number("d");
    c.params.r = p->number("r");
    c.params.a = p->number("a");
    c.params.b = p->number("b");
    p->finish();
  } else {
    throw ValidationError("missing required field 'params'");
  }
  if (auto d = r.object("decay")) {
    c.decay.lambda_u = d->number("lambda_u");
    c.decay.lambda_v_plus = d->number("lambda_v_plus");
    c.decay.lambda_v_minus = d->number("lambda_v_minus", c.decay.lambda_v_plus);
    d->finish();
  } else {
    throw ValidationError("missing required field 'decay'");
  }
  if (auto g = r.object("grid")) {
    c.grid.x_min = g->opt_number("x_min");
    c.grid.x_max = g->opt_number("x_max");
    c.grid.dx = g->number("dx", c.grid.dx);
    g->finish();
  }
  if (auto t = r.object("time")) {
    c.time.t_end = t->number("t_end", c.time.t_end);
    c.time.dt = t->number("dt", c.time.dt);
    c.time.sample_interval = t->number("sample_interval", c.time.sample_interval);
    c.time.snapshot_times = t->numbers("snapshot_times");
    t->finish();
  }
  bool llw_source_given = false;
  if (auto l = r.object("llw")) {
    llw_source_given = l->has("source");
    const std::string src = l->string("source", "lower");
    if (src == "measure") c.llw.source = LlwSource::Measure;
    else if (src == "lower") c.llw.source = LlwSource::Lower;
    else if (src == "upper") c.llw.source = LlwSource::Upper;
    else if (src == "given") c.llw.source = LlwSource::Given;
    else throw ValidationError("llw.source: expected measure, lower, upper or given");
    c.llw.c_llw = l->opt_number("c_llw");
    c.llw.tilde_c_llw = l->opt_number("tilde_c_llw");
    c.llw.t_end = l->number("t_end", c.llw.t_end);
    c.llw.dx = l->opt_number("dx");
    l->finish();
  }
  if (auto p = r.object("profile")) {
    c.profile.enabled = p->boolean("enabled", c.profile.enabled);
    c.profile.eta = p->number("eta", c.profile.eta);
    c.profile.tol = p->number("tol", c.profile.tol);
    p->finish();
  }
  if (auto t = r.object("tolerances")) {
    c.tolerances.c1 = t->number("c1", c.tolerances.c1);
    c.tolerances.c2 = t->number("c2", c.tolerances.c2);
    c.tolerances.c3 = t->number("c3", c.tolerances.c3);
    t->finish();
  }
  if (auto f = r.object("forcing")) {
    ForcingSettings fs;
    fs.h0 = f->number("h0", fs.h0);
    fs.c0 = f->number("c0", fs.c0);
    f->finish();
    c.forcing = fs;
  } else if (c.kind == ExperimentKind::Forced) {
    c.forcing = ForcingSettings{};
  }
  if (auto h = r.object("hj")) {
    c.hj.equation = h->string("equation", c.hj.equation);
    c.hj.dx = h->number("dx", c.hj.dx);
    c.hj.x_min = h->number("x_min", c.hj.x_min);
    c.hj.x_max = h->opt_number("x_max");
    c.hj.t_end = h->number("t_end", c.hj.t_end);
    c.hj.output_times = h->numbers("output_times");
    c.hj.fixed_alpha = h->opt_number("fixed_alpha");
    c.hj.speed_tol = h->number("speed_tol", c.hj.speed_tol);
    h->finish();
  }
  if (auto s = r.object("sweep")) {
    SweepSettings ss;
    ss.kind = parse_kind(s->string("kind", "speeds"), "sweep.kind");
    ss.parameter = s->string("parameter", "");
    if (ss.parameter.empty()) throw ValidationError("missing required field 'sweep.parameter'");
    ss.values = s->numbers("values");
    if (ss.values.empty()) {
      ss.min = s->number("min");
      ss.max = s->number("max");
      ss.count = static_cast<std::size_t>(s->unsigned_int("count", 0));
    }
    s->finish();
    c.sweep = ss;
  }
  if (auto w = r.object("wkb")) {
    WkbSettings ws;
    ws.epsilon = w->number("epsilon", ws.epsilon);
    ws.band_factor = w->number("band_factor", ws.band_factor);
    w->finish();
    c.wkb = ws;
  }
  if (auto i = r.object("initial")) {
    c.theta0 = i->number("theta0", c.theta0);
    c.v_amplitude = i->number("v_amplitude", c.v_amplitude);
    i->finish();
  }
  c.output_dir = r.string("output_dir", c.output_dir);
  c.seed = r.unsigned_int("seed", c.seed);
  r.finish();
  // Simulations measure the LLW speeds by default; closed-form kinds use the lower bounds.
  if (!llw_source_given) {
    const ExperimentKind k = c.sweep ? c.sweep->kind : c.kind;
    c.llw.source = is_simulation(k) || k == ExperimentKind::MeasureLlw ? LlwSource::Measure
                                                                        : LlwSource::Lower;
  }
  validate(c);
  return c;
}

/// Canonical JSON form with every default filled in (keys sorted).
inline json config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["kind"] = std::string(to_string(c.kind));
  j["params"] = {{"d", c.params.d}, {"r", c.params.r}, {"a", c.params.a}, {"b", c.params.b}};
  j["decay"] = {{"lambda_u", c.decay.lambda_u},
                {"lambda_v_plus", c.decay.lambda_v_plus},
                {"lambda_v_minus", c.decay.lambda_v_minus}};
  j["grid"] = {{"dx", c.grid.dx}};
  if (c.grid.x_min) j["grid"]["x_min"] = *c.grid.x_min;
  if (c.grid.x_max) j["grid"]["x_max"] = *c.grid.x_max;
  j["time"] = {{"t_end", c.time.t_end},
               {"dt", c.time.dt},
               {"sample_interval", c.time.sample_interval},
               {"snapshot_times", c.time.snapshot_times}};
  j["llw"] = {{"source", std::string(to_string(c.llw.source))}, {"t_end", c.llw.t_end}};
  if (c.llw.c_llw) j["llw"]["c_llw"] = *c.llw.c_llw;
  if (c.llw.tilde_c_llw) j["llw"]["tilde_c_llw"] = *c.llw.tilde_c_llw;
  if (c.llw.dx) j["llw"]["dx"] = *c.llw.dx;
  j["profile"] = {{"enabled", c.profile.enabled}, {"eta", c.profile.eta}, {"tol", c.profile.tol}};
  j["tolerances"] = {{"c1", c.tolerances.c1}, {"c2", c.tolerances.c2}, {"c3", c.tolerances.c3}};
  if (c.forcing) j["forcing"] = {{"h0", c.forcing->h0}, {"c0", c.forcing->c0}};
  j["hj"] = {{"equation", c.hj.equation}, {"dx", c.hj.dx},         {"x_min", c.hj.x_min},
             {"t_end", c.hj.t_end},       {"output_times", c.hj.output_times},
             {"speed_tol", c.hj.speed_tol}};
  if (c.hj.x_max) j["hj"]["x_max"] = *c.hj.x_max;
  if (c.hj.fixed_alpha) j["hj"]["fixed_alpha"] = *c.hj.fixed_alpha;
  if (c.sweep) {
    j["sweep"] = {{"kind", std::string(to_string(c.sweep->kind))}, {"parameter", c.sweep->parameter}};
    if (!c.sweep->values.empty()) {
      j["sweep"]["values"] = c.sweep->values;
    } else {
      j["sweep"]["min"] = c.sweep->min;
      j["sweep"]["max"] = c.sweep->max;
      j["sweep"]["count"] = c.sweep->count;
    }
  }
  if (c.wkb) j["wkb"] = {{"epsilon", c.wkb->epsilon}, {"band_factor", c.wkb->band_factor}};
  j["initial"] = {{"theta0", c.theta0}, {"v_amplitude", c.v_amplitude}};
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  return j;
}

namespace detail {
inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}
}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>",
                                     std::optional<ExperimentKind> kind = {}) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ":" + std::to_string(detail::line_of(text, e.byte)) +
                          ": JSON parse error: " + e.what());
  }
  try {
    return config_from_json(j, kind);
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

inline ExperimentConfig load_config(const std::filesystem::path& path,
                                    std::optional<ExperimentKind> kind = {}) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path.string(), kind);
}

}  // namespace lvspread
