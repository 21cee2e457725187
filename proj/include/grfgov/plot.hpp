#pragma once

#include <string>
#include <vector>

#include "grfgov/simulation.hpp"

namespace grfgov {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct LineChart {
  std::string title;
  std::string x_label = "t [s]";
  std::string y_label;
  std::vector<Series> series;
  bool zero_line = false;
};

/// Self-contained SVG document with the charts stacked vertically.
std::string renderSvg(const std::vector<LineChart>& charts, int width = 900,
                      int panel_height = 260);

/// Writes <prefix>_states.svg, _grf.svg, _constraints.svg and _lyapunov.svg
/// and returns the paths. The GRF chart overlays +/- mu_s u_gz.
std::vector<std::string> emitPlots(const std::vector<TelemetryRecord>& records,
                                   const std::string& prefix, double mu_s);

}  // namespace grfgov
