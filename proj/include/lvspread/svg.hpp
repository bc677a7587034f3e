#pragma once

// Minimal deterministic SVG line plots for profiles, front traces and speed
// curves. Identical tables give identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "lvspread/csv.hpp"
#include "lvspread/error.hpp"

namespace lvspread {

enum class PlotKind { Profile, FrontTrace, SpeedCurve };

inline std::string_view to_string(PlotKind k) {
  switch (k) {
    case PlotKind::Profile: return "profile";
    case PlotKind::FrontTrace: return "front_trace";
    case PlotKind::SpeedCurve: return "speed_curve";
  }
  return "?";
}

inline PlotKind parse_plot_kind(std::string_view s) {
  if (s == "profile") return PlotKind::Profile;
  if (s == "front_trace") return PlotKind::FrontTrace;
  if (s == "speed_curve") return PlotKind::SpeedCurve;
  throw ValidationError("unknown plot kind '" + std::string(s) +
                        "' (expected profile, front_trace or speed_curve)");
}

namespace detail {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

struct Band {
  double x0, x1;
  int code;
};

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                           "#8c564b"};
inline constexpr const char* kBandPalette[] = {"#fde0dd", "#e0f3db", "#deebf7", "#fff7bc",
                                               "#efedf5"};

inline std::string render(const std::vector<Series>& series, const std::vector<Band>& bands,
                          const std::string& title, const std::string& xlabel,
                          const std::string& ylabel) {
  constexpr double W = 720, H = 480, L = 70, R = 150, T = 40, B = 60;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!std::isfinite(xmin)) throw ValidationError("plot has no finite data points");
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" viewBox=\"0 0 720 480\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" fill=\"white\"/>\n";
  for (const auto& b : bands) {
    const double x0 = px(std::max(b.x0, xmin)), x1 = px(std::min(b.x1, xmax));
    o += "<rect x=\"" + fmt("%.2f", x0) + "\" y=\"" + fmt("%.2f", T) + "\" width=\"" +
         fmt("%.2f", std::max(0.0, x1 - x0)) + "\" height=\"" + fmt("%.2f", H - T - B) +
         "\" fill=\"" + kBandPalette[static_cast<std::size_t>(std::abs(b.code)) % 5] +
         "\" data-case=\"" + std::to_string(b.code) + "\"/>\n";
  }
  o += "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
       xml_escape(title) + "</text>\n";
  o += "<rect x=\"" + fmt("%.2f", L) + "\" y=\"" + fmt("%.2f", T) + "\" width=\"" +
       fmt("%.2f", W - L - R) + "\" height=\"" + fmt("%.2f", H - T - B) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0, yv = ymin + (ymax - ymin) * k / 5.0;
    o += "<line x1=\"" + fmt("%.2f", px(xv)) + "\" y1=\"" + fmt("%.2f", H - B) + "\" x2=\"" +
         fmt("%.2f", px(xv)) + "\" y2=\"" + fmt("%.2f", H - B + 5) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt("%.2f", px(xv)) + "\" y=\"" + fmt("%.2f", H - B + 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + fmt("%.4g", xv) +
         "</text>\n";
    o += "<line x1=\"" + fmt("%.2f", L - 5) + "\" y1=\"" + fmt("%.2f", py(yv)) + "\" x2=\"" +
         fmt("%.2f", L) + "\" y2=\"" + fmt("%.2f", py(yv)) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt("%.2f", L - 8) + "\" y=\"" + fmt("%.2f", py(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt("%.4g", yv) +
         "</text>\n";
  }
  o += "<text x=\"" + fmt("%.2f", L + (W - L - R) / 2) + "\" y=\"" + fmt("%.2f", H - 15) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + xlabel + "</text>\n";
  o += "<text x=\"18\" y=\"" + fmt("%.2f", T + (H - T - B) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
       fmt("%.2f", T + (H - T - B) / 2) + ")\">" + ylabel + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % 6];
    std::string pts;
    auto flush = [&] {
      if (!pts.empty())
        o += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
      pts.clear();
    };
    // Thin dense series to at most ~2000 vertices.
    const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 2000);
    for (std::size_t i = 0; i < s.x.size(); i += stride) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += fmt("%.2f", px(s.x[i])) + "," + fmt("%.2f", py(s.y[i]));
    }
    flush();
    const double ly = T + 15 + 18 * static_cast<double>(k);
    o += "<line x1=\"" + fmt("%.2f", W - R + 10) + "\" y1=\"" + fmt("%.2f", ly) + "\" x2=\"" +
         fmt("%.2f", W - R + 30) + "\" y2=\"" + fmt("%.2f", ly) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + fmt("%.2f", W - R + 35) + "\" y=\"" + fmt("%.2f", ly + 4) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(s.name) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

}  // namespace detail

/// Renders `table` as an SVG document.
///  profile:     column x plus any of u, v, w (rows with the largest t if a t column exists)
///  front_trace: column t plus one or more position columns
///  speed_curve: column value plus any of c1, c2, c3; optional integer column case
///               shades contiguous runs of equal case codes
inline std::string render_plot(const CsvTable& table, PlotKind kind, const std::string& title = "") {
  if (table.rows.empty()) throw ValidationError("cannot plot an empty CSV");
  std::vector<detail::Series> series;
  std::vector<detail::Band> bands;
  std::string xlabel, ylabel;
  switch (kind) {
    case PlotKind::Profile: {
      if (!table.has_column("x")) throw ValidationError("profile plot needs an 'x' column");
      std::vector<std::size_t> rows;
      if (table.has_column("t")) {
        const auto ts = table.values("t");
        const double tmax = *std::max_element(ts.begin(), ts.end());
        for (std::size_t i = 0; i < ts.size(); ++i)
          if (ts[i] == tmax) rows.push_back(i);
      } else {
        for (std::size_t i = 0; i < table.rows.size(); ++i) rows.push_back(i);
      }
      const std::size_t cx = table.column("x");
      for (const char* name : {"u", "v", "w"}) {
        if (!table.has_column(name)) continue;
        const std::size_t c = table.column(name);
        detail::Series s{name, {}, {}};
        for (std::size_t i : rows) {
          s.x.push_back(table.rows[i][cx]);
          s.y.push_back(table.rows[i][c]);
        }
        series.push_back(std::move(s));
      }
      if (series.empty()) throw ValidationError("profile plot needs a 'u', 'v' or 'w' column");
      xlabel = "x";
      ylabel = "density";
      break;
    }
    case PlotKind::FrontTrace: {
      if (!table.has_column("t")) throw ValidationError("front_trace plot needs a 't' column");
      const auto t = table.values("t");
      for (const auto& h : table.header) {
        if (h == "t") continue;
        series.push_back({h, t, table.values(h)});
      }
      if (series.empty()) throw ValidationError("front_trace plot needs a position column");
      xlabel = "t";
      ylabel = "front position";
      break;
    }
    case PlotKind::SpeedCurve: {
      if (!table.has_column("value")) throw ValidationError("speed_curve plot needs a 'value' column");
      const auto x = table.values("value");
      for (const char* name : {"c1", "c2", "c3"})
        if (table.has_column(name)) series.push_back({name, x, table.values(name)});
      if (series.empty()) throw ValidationError("speed_curve plot needs a c1, c2 or c3 column");
      if (table.has_column("case")) {
        const auto cs = table.values("case");
        std::size_t start = 0;
        for (std::size_t i = 1; i <= cs.size(); ++i) {
          if (i < cs.size() && cs[i] == cs[start]) continue;
          const double x0 = start == 0 ? x[0] : 0.5 * (x[start - 1] + x[start]);
          const double x1 = i == cs.size() ? x.back() : 0.5 * (x[i - 1] + x[i]);
          bands.push_back({std::min(x0, x1), std::max(x0, x1), static_cast<int>(cs[start])});
          start = i;
        }
      }
      xlabel = "swept parameter";
      ylabel = "speed";
      break;
    }
  }
  return detail::render(series, bands, title.empty() ? std::string(to_string(kind)) : title, xlabel,
                        ylabel);
}

inline void write_plot(const std::filesystem::path& path, const CsvTable& table, PlotKind kind,
                       const std::string& title = "") {
  const std::string svg = render_plot(table, kind, title);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open " + path.string() + " for writing");
  f << svg;
}

}  // namespace lvspread
