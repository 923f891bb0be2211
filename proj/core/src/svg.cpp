//
// Deterministic SVG rendering.
//

#include "sqsc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>

namespace sqsc {

namespace {

constexpr double kW = 640.0, kH = 420.0;
constexpr double kLeft = 62.0, kRight = 20.0, kTop = 30.0, kBottom = 46.0;
constexpr double kRightAxis = 62.0;  // extra right margin for dual-axis plots

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round a raw step to the nearest {1, 2, 5} x 10^k.
double nice_step(double raw) {
  if (!(raw > 0.0)) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  if (frac <= 1.0) return mag;
  if (frac <= 2.0) return 2.0 * mag;
  if (frac <= 5.0) return 5.0 * mag;
  return 10.0 * mag;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  void expand(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  static Range of(std::initializer_list<const std::vector<double>*> arrays) {
    Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto* a : arrays) {
      for (const double v : *a) r.expand(v);
    }
    if (!(r.lo <= r.hi)) {  // no finite data
      r.lo = 0.0;
      r.hi = 1.0;
    }
    if (r.hi - r.lo < 1e-300) {
      r.lo -= 0.5;
      r.hi += 0.5;
    }
    return r;
  }
  void pad(double frac) {
    const double d = (hi - lo) * frac;
    lo -= d;
    hi += d;
  }
};

class Canvas {
 public:
  Canvas(Range xr, Range yr, double right_margin)
      : xr_(xr), yr_(yr), right_(right_margin) {
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kW) + "\" height=\"" +
             fmt(kH) + "\" viewBox=\"0 0 " + fmt(kW) + " " + fmt(kH) + "\">\n";
    body_ += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kW) + "\" height=\"" + fmt(kH) +
             "\" fill=\"#ffffff\"/>\n";
  }

  double px(double x) const {
    return kLeft + (x - xr_.lo) / (xr_.hi - xr_.lo) * (kW - kLeft - right_);
  }
  double py(double y) const {
    return kH - kBottom - (y - yr_.lo) / (yr_.hi - yr_.lo) * (kH - kTop - kBottom);
  }
  double plot_x0() const { return kLeft; }
  double plot_x1() const { return kW - right_; }
  double plot_y0() const { return kTop; }
  double plot_y1() const { return kH - kBottom; }

  void line(double x1, double y1, double x2, double y2, const std::string& style) {
    body_ += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" +
             fmt(y2) + "\" " + style + "/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& style) {
    body_ += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) + "\" height=\"" +
             fmt(h) + "\" " + style + "/>\n";
  }
  void circle(double x, double y, double r, const std::string& style) {
    body_ += "<circle cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) + "\" r=\"" + fmt(r) + "\" " + style +
             "/>\n";
  }
  void text(double x, double y, const std::string& s, const std::string& anchor,
            double size = 11.0, const std::string& fill = "#333333") {
    body_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-family=\"sans-serif\" " +
             "font-size=\"" + fmt(size) + "\" text-anchor=\"" + anchor + "\" fill=\"" + fill +
             "\">" + xml_escape(s) + "</text>\n";
  }
  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& style) {
    if (xs.empty()) return;
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
      pts += fmt(px(xs[i])) + "," + fmt(py(ys[i])) + " ";
    }
    if (pts.empty()) return;
    body_ += "<polyline points=\"" + pts + "\" fill=\"none\" " + style + "/>\n";
  }

  void axes(const std::string& xlabel, const std::string& ylabel, const std::string& title) {
    const std::string axis_style = "stroke=\"#333333\" stroke-width=\"1\"";
    line(plot_x0(), plot_y1(), plot_x1(), plot_y1(), axis_style);
    line(plot_x0(), plot_y0(), plot_x0(), plot_y1(), axis_style);

    const double xstep = nice_step((xr_.hi - xr_.lo) / 7.0);
    for (double t = std::ceil(xr_.lo / xstep) * xstep; t <= xr_.hi + 1e-12 * xstep; t += xstep) {
      const double gx = px(t);
      line(gx, plot_y0(), gx, plot_y1(), "stroke=\"#e5e5e5\" stroke-width=\"0.6\"");
      line(gx, plot_y1(), gx, plot_y1() + 4.0, axis_style);
      text(gx, plot_y1() + 16.0, fmt(t + 0.0), "middle");
    }
    const double ystep = nice_step((yr_.hi - yr_.lo) / 6.0);
    for (double t = std::ceil(yr_.lo / ystep) * ystep; t <= yr_.hi + 1e-12 * ystep; t += ystep) {
      const double gy = py(t);
      line(plot_x0(), gy, plot_x1(), gy, "stroke=\"#e5e5e5\" stroke-width=\"0.6\"");
      line(plot_x0() - 4.0, gy, plot_x0(), gy, axis_style);
      text(plot_x0() - 7.0, gy + 3.5, fmt(t + 0.0), "end");
    }
    text(0.5 * (plot_x0() + plot_x1()), kH - 10.0, xlabel, "middle");
    body_ += "<text x=\"" + fmt(14.0) + "\" y=\"" + fmt(0.5 * (plot_y0() + plot_y1())) +
             "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" "
             "fill=\"#333333\" transform=\"rotate(-90 14 " +
             fmt(0.5 * (plot_y0() + plot_y1())) + ")\">" + xml_escape(ylabel) + "</text>\n";
    text(0.5 * (plot_x0() + plot_x1()), 18.0, title, "middle", 13.0);
  }

  void no_data() {
    text(0.5 * (plot_x0() + plot_x1()), 0.5 * (plot_y0() + plot_y1()), "no data", "middle", 14.0,
         "#999999");
  }

  std::string finish() {
    body_ += "</svg>\n";
    return body_;
  }

 private:
  Range xr_, yr_;
  double right_;
  std::string body_;
};

}  // namespace

std::string svg_histogram(const SvgBars& bars, const SvgSeries& curve, const SvgMarks& spikes,
                          const std::vector<double>& support_edges, const std::string& title) {
  Range xr = Range::of({&bars.edges, &curve.x, &spikes.x, &support_edges});
  Range yr = Range::of({&bars.height, &curve.y});
  yr.lo = std::min(yr.lo, 0.0);
  xr.pad(0.02);
  yr.pad(0.05);

  Canvas cv(xr, yr, kRight);
  const bool empty = bars.height.empty() && curve.x.empty();

  for (const double e : support_edges) {
    cv.line(cv.px(e), cv.plot_y0(), cv.px(e), cv.plot_y1(),
            "stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"4 3\"");
  }
  for (std::size_t b = 0; b + 1 < bars.edges.size() && b < bars.height.size(); ++b) {
    const double x0 = cv.px(bars.edges[b]);
    const double x1 = cv.px(bars.edges[b + 1]);
    const double y0 = cv.py(bars.height[b]);
    cv.rect(x0, y0, std::max(x1 - x0, 0.1), std::max(cv.py(0.0) - y0, 0.0),
            "fill=\"#4c78a8\" fill-opacity=\"0.65\" stroke=\"#35567a\" stroke-width=\"0.4\"");
  }
  cv.polyline(curve.x, curve.y, "stroke=\"#d62728\" stroke-width=\"1.6\"");
  for (std::size_t i = 0; i < spikes.x.size(); ++i) {
    const double gx = cv.px(spikes.x[i]);
    const double gy = cv.py(0.0);
    const bool emph = i < spikes.emphasized.size() && spikes.emphasized[i];
    const std::string st =
        emph ? "stroke=\"#d62728\" stroke-width=\"2\"" : "stroke=\"#d62728\" stroke-width=\"1.2\"";
    cv.line(gx - 5.0, gy - 5.0, gx + 5.0, gy + 5.0, st);
    cv.line(gx - 5.0, gy + 5.0, gx + 5.0, gy - 5.0, st);
  }
  cv.axes("eigenvalue", "density", title);
  if (empty) cv.no_data();
  return cv.finish();
}

std::string svg_curve(const SvgPoints& points, const SvgSeries& theory, double vline,
                      const std::string& title, const std::string& xlabel,
                      const std::string& ylabel) {
  std::vector<double> ylo, yhi;
  for (std::size_t i = 0; i < points.y.size(); ++i) {
    const double e = i < points.err.size() && std::isfinite(points.err[i]) ? points.err[i] : 0.0;
    ylo.push_back(points.y[i] - e);
    yhi.push_back(points.y[i] + e);
  }
  std::vector<double> vbuf;
  if (std::isfinite(vline)) vbuf.push_back(vline);
  Range xr = Range::of({&points.x, &theory.x, &vbuf});
  Range yr = Range::of({&ylo, &yhi, &theory.y});
  xr.pad(0.03);
  yr.pad(0.07);

  Canvas cv(xr, yr, kRight);
  const bool empty = points.x.empty() && theory.x.empty();

  if (std::isfinite(vline)) {
    cv.line(cv.px(vline), cv.plot_y0(), cv.px(vline), cv.plot_y1(),
            "stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"5 3\"");
    cv.text(cv.px(vline) + 4.0, cv.plot_y0() + 12.0, "transition", "start", 10.0, "#777777");
  }
  cv.polyline(theory.x, theory.y, "stroke=\"#d62728\" stroke-width=\"1.6\"");
  for (std::size_t i = 0; i < points.x.size(); ++i) {
    if (!std::isfinite(points.x[i]) || !std::isfinite(points.y[i])) continue;
    const double gx = cv.px(points.x[i]);
    if (i < points.err.size() && std::isfinite(points.err[i]) && points.err[i] > 0.0) {
      cv.line(gx, cv.py(ylo[i]), gx, cv.py(yhi[i]), "stroke=\"#4c78a8\" stroke-width=\"1\"");
      cv.line(gx - 3.0, cv.py(ylo[i]), gx + 3.0, cv.py(ylo[i]),
              "stroke=\"#4c78a8\" stroke-width=\"1\"");
      cv.line(gx - 3.0, cv.py(yhi[i]), gx + 3.0, cv.py(yhi[i]),
              "stroke=\"#4c78a8\" stroke-width=\"1\"");
    }
    cv.circle(gx, cv.py(points.y[i]), 2.6, "fill=\"#4c78a8\"");
  }
  cv.axes(xlabel, ylabel, title);
  if (empty) cv.no_data();
  return cv.finish();
}

std::string svg_tradeoff(const SvgSeries& error_curve, const SvgSeries& storage_curve,
                         const std::string& title, const std::string& xlabel) {
  Range xr = Range::of({&error_curve.x, &storage_curve.x});
  Range yl = Range::of({&error_curve.y});
  Range yrr = Range::of({&storage_curve.y});
  yl.lo = std::min(yl.lo, 0.0);
  yrr.lo = std::min(yrr.lo, 0.0);
  xr.pad(0.03);
  yl.pad(0.07);
  yrr.pad(0.07);

  Canvas cv(xr, yl, kRightAxis);
  const bool empty = error_curve.x.empty() && storage_curve.x.empty();

  cv.polyline(error_curve.x, error_curve.y, "stroke=\"#d62728\" stroke-width=\"1.8\"");

  // Right axis: map storage into the same pixel space.
  std::vector<double> sx, sy;
  for (std::size_t i = 0; i < storage_curve.x.size(); ++i) {
    const double t = (storage_curve.y[i] - yrr.lo) / (yrr.hi - yrr.lo);
    sx.push_back(storage_curve.x[i]);
    sy.push_back(yl.lo + t * (yl.hi - yl.lo));
  }
  cv.polyline(sx, sy, "stroke=\"#4c78a8\" stroke-width=\"1.8\" stroke-dasharray=\"6 3\"");

  const double rx = cv.plot_x1();
  cv.line(rx, cv.plot_y0(), rx, cv.plot_y1(), "stroke=\"#4c78a8\" stroke-width=\"1\"");
  const double rstep = nice_step((yrr.hi - yrr.lo) / 6.0);
  for (double t = std::ceil(yrr.lo / rstep) * rstep; t <= yrr.hi + 1e-12 * rstep; t += rstep) {
    const double frac = (t - yrr.lo) / (yrr.hi - yrr.lo);
    const double gy = cv.py(yl.lo + frac * (yl.hi - yl.lo));
    cv.line(rx, gy, rx + 4.0, gy, "stroke=\"#4c78a8\" stroke-width=\"1\"");
    cv.text(rx + 7.0, gy + 3.5, fmt(t + 0.0), "start", 11.0, "#4c78a8");
  }
  cv.text(rx + 40.0, cv.plot_y0() - 8.0, "storage (bits)", "end", 11.0, "#4c78a8");
  cv.text(cv.plot_x0() + 4.0, cv.plot_y0() - 8.0, "error", "start", 11.0, "#d62728");

  cv.axes(xlabel, "error", title);
  if (empty) cv.no_data();
  return cv.finish();
}

}  // namespace sqsc
