#pragma once
//
// Deterministic SVG plot rendering from geometry primitives — no plotting
// dependency, byte-stable output for identical inputs.
//

#include <string>
#include <vector>

namespace sqsc {

struct SvgSeries {
  std::vector<double> x, y;
};

struct SvgPoints {
  std::vector<double> x, y, err;  // err: half-height of the error bar (may be empty)
};

struct SvgBars {
  std::vector<double> edges;   // size nb + 1
  std::vector<double> height;  // size nb
};

struct SvgMarks {
  std::vector<double> x;
  std::vector<bool> emphasized;  // e.g. informative spikes
};

/// Histogram bars + density polyline + spike crosses + dashed support edges.
std::string svg_histogram(const SvgBars& bars, const SvgSeries& curve, const SvgMarks& spikes,
                          const std::vector<double>& support_edges, const std::string& title);

/// Mean +- stderr markers vs a theory polyline, optional vertical marker.
std::string svg_curve(const SvgPoints& points, const SvgSeries& theory, double vline,
                      const std::string& title, const std::string& xlabel,
                      const std::string& ylabel);

/// Dual-axis trade-off: error (left axis) and storage (right axis) vs x.
std::string svg_tradeoff(const SvgSeries& error_curve, const SvgSeries& storage_curve,
                         const std::string& title, const std::string& xlabel);

}  // namespace sqsc
