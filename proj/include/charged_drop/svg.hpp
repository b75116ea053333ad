#pragma once

// Minimal standalone SVG line/scatter plots.  Output depends only on the
// data: coordinates are printed with fixed precision through fmt.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <fmt/format.h>

#include "charged_drop/error.hpp"
#include "charged_drop/io.hpp"

namespace charged_drop::svg {

enum class PlotKind { Profile, BoundaryCurve, Uniformity };

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  ///< scatter markers instead of a polyline
};

namespace detail {

inline const char* color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  return palette[i % 4];
}

struct Frame {
  double x0, x1, y0, y1;
  static constexpr double W = 640, H = 480, L = 80, R = 20, T = 40, B = 60;

  double px(double x) const { return L + (x - x0) / (x1 - x0) * (W - L - R); }
  double py(double y) const { return H - B - (y - y0) / (y1 - y0) * (H - T - B); }
};

inline void widen(double& lo, double& hi) {
  if (hi - lo <= 0) {
    const double pad = lo == 0 ? 1.0 : std::abs(lo) * 0.05;
    lo -= pad;
    hi += pad;
  } else {
    const double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
  }
}

}  // namespace detail

/// Render series into an SVG document.  `reference_y`, when finite, draws a
/// dashed horizontal line.
inline std::string render(const std::string& title, const std::string& xlabel,
                          const std::string& ylabel,
                          const std::vector<Series>& series,
                          double reference_y = std::numeric_limits<double>::quiet_NaN()) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  std::size_t points = 0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size())
      throw DomainError("svg: series with mismatched x/y lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
        throw DomainError("svg: non-finite data");
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
      ++points;
    }
  }
  if (points == 0) throw DomainError("svg: no data to plot");
  if (std::isfinite(reference_y)) {
    y0 = std::min(y0, reference_y);
    y1 = std::max(y1, reference_y);
  }
  detail::widen(x0, x1);
  detail::widen(y0, y1);
  const detail::Frame f{x0, x1, y0, y1};
  using F = detail::Frame;

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" "
      "height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      F::W, F::H, F::W, F::H);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += fmt::format(
      "<text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"16\">{}</text>\n",
      F::W / 2, title);
  // Axes box.
  out += fmt::format(
      "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
      "fill=\"none\" stroke=\"black\"/>\n",
      F::L, F::T, F::W - F::L - F::R, F::H - F::T - F::B);
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"11\">{:.4g}</text>\n",
        f.px(xv), F::H - F::B + 16, xv);
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\" "
        "font-family=\"sans-serif\" font-size=\"11\">{:.4g}</text>\n",
        F::L - 6, f.py(yv) + 4, yv);
  }
  out += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" "
      "font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
      (F::L + F::W - F::R) / 2, F::H - 16, xlabel);
  out += fmt::format(
      "<text x=\"18\" y=\"{:.1f}\" text-anchor=\"middle\" "
      "font-family=\"sans-serif\" font-size=\"13\" "
      "transform=\"rotate(-90 18 {:.1f})\">{}</text>\n",
      (F::T + F::H - F::B) / 2, (F::T + F::H - F::B) / 2, ylabel);

  if (std::isfinite(reference_y))
    out += fmt::format(
        "<line class=\"reference\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" "
        "y2=\"{:.2f}\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n",
        F::L, f.py(reference_y), F::W - F::R, f.py(reference_y));

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        out += fmt::format(
            "<circle class=\"marker\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" "
            "fill=\"{}\"/>\n",
            f.px(s.x[i]), f.py(s.y[i]), detail::color(k));
    } else {
      out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" points=\"",
                         detail::color(k));
      for (std::size_t i = 0; i < s.x.size(); ++i)
        out += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", f.px(s.x[i]),
                           f.py(s.y[i]));
      out += "\"/>\n";
    }
    if (!s.name.empty())
      out += fmt::format(
          "<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" "
          "font-size=\"12\" fill=\"{}\">{}</text>\n",
          F::L + 10, F::T + 16 + 14.0 * double(k), detail::color(k), s.name);
  }
  out += "</svg>\n";
  return out;
}

/// Render a plot of the given kind and write it to `path`.  Empty data is an
/// error and leaves no file behind.
inline void emit_plot(PlotKind kind, const std::vector<Series>& data,
                      const std::string& path) {
  const double eight_pi = 8 * boost::math::constants::pi<double>();
  std::string doc;
  switch (kind) {
    case PlotKind::Profile:
      doc = render("Unduloid meridian", "x", "z", data);
      break;
    case PlotKind::BoundaryCurve:
      doc = render("Two-charge existence threshold", "eps", "gamma_c * eps",
                   data, eight_pi);
      break;
    case PlotKind::Uniformity:
      doc = render("Uniformity diagnostics", "n", "value", data);
      break;
  }
  io::write_file(path, doc);
}

}  // namespace charged_drop::svg
