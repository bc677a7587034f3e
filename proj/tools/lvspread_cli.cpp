// Command-line front end: one subcommand per experiment kind plus `plot`.
// Exit codes: 0 pass, 1 a verdict failed, 2 validation error, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lvspread/lvspread.hpp"

namespace {

using namespace lvspread;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<double> dx;
  std::optional<double> t_end;
};

void print_summary(const RunRecord& rec) {
  std::cout << rec.name << " (" << to_string(rec.kind) << ") -> " << rec.output_dir.string() << "\n";
  if (rec.report) {
    const auto& r = *rec.report;
    std::printf("  regime %s  c1 %.6g", std::string(to_string(r.regime)).c_str(), r.c1);
    if (r.c2) std::printf("  c2 %.6g", *r.c2);
    if (r.c3) std::printf("  c3 %.6g", *r.c3);
    if (r.nlp) std::printf("  nlp %.6g (%s)", r.nlp->speed, std::string(to_string(r.nlp->tag)).c_str());
    std::printf("\n");
    for (const auto& w : r.warnings) std::printf("  warning: %s\n", w.c_str());
  }
  for (const auto& [k, e] : rec.llw) std::printf("  %s measured %.6g\n", k.c_str(), e.speed);
  for (const auto& [k, e] : rec.measured) std::printf("  %s measured %.6g\n", k.c_str(), e.speed);
  for (const auto& v : rec.verdicts)
    std::printf("  %-4s %-18s measured %.6g expected %.6g %s %.3g\n", v.pass ? "ok" : "FAIL", v.name.c_str(),
                v.measured, v.expected, v.absolute ? "+" : "rel", v.tolerance);
  if (rec.profile)
    for (const auto& z : rec.profile->zones)
      std::printf("  %-4s zone %-10s deviation %.4g (tol %.3g)\n", z.pass ? "ok" : "FAIL", z.name.c_str(), z.value,
                  rec.profile->tol);
  std::cout << (rec.pass() ? "PASS" : "FAIL") << std::endl;
}

int run_kind(ExperimentKind kind, const CommonFlags& f) {
  ExperimentConfig c = load_config(f.config, kind);
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.dx) (kind == ExperimentKind::Hj ? c.hj.dx : c.grid.dx) = *f.dx;
  if (f.t_end) (kind == ExperimentKind::Hj ? c.hj.t_end : c.time.t_end) = *f.t_end;
  validate(c);
  const RunRecord rec = run_experiment(c);
  print_summary(rec);
  return rec.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spreading speeds of two-species competition-diffusion fronts"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::optional<ExperimentKind> chosen;
  const std::pair<const char*, ExperimentKind> kinds[] = {
      {"speeds", ExperimentKind::Speeds},       {"simulate", ExperimentKind::Simulate},
      {"measure-llw", ExperimentKind::MeasureLlw}, {"hj", ExperimentKind::Hj},
      {"tangfife", ExperimentKind::TangFife},   {"mixedcase", ExperimentKind::MixedCase},
      {"forced", ExperimentKind::Forced},       {"sweep", ExperimentKind::Sweep}};
  for (const auto& [name, kind] : kinds) {
    auto* sub = app.add_subcommand(name, std::string("run a '") + name + "' experiment");
    sub->add_option("--config", flags.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output directory (overrides output_dir)");
    sub->add_option("--dx", flags.dx, "grid spacing override");
    sub->add_option("--t-end", flags.t_end, "final time override");
    const ExperimentKind k = kind;
    sub->callback([&chosen, k] { chosen = k; });
  }

  std::string plot_in, plot_out, plot_kind = "profile", plot_title;
  auto* plot = app.add_subcommand("plot", "render a CSV as SVG");
  plot->add_option("--input", plot_in, "CSV file")->required()->check(CLI::ExistingFile);
  plot->add_option("--kind", plot_kind, "profile, front_trace or speed_curve");
  plot->add_option("--out", plot_out, "SVG file")->required();
  plot->add_option("--title", plot_title, "plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (plot->parsed()) {
      write_plot(plot_out, read_csv(plot_in), parse_plot_kind(plot_kind), plot_title);
      std::cout << plot_out << std::endl;
      return 0;
    }
    return run_kind(*chosen, flags);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << std::endl;
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return 3;
  }
}
