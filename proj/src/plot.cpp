#include "grfgov/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace grfgov {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Round step for roughly n ticks over span.
double niceStep(double span, int n) {
  const double raw = span / n;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

void renderPanel(std::ostringstream& os, const LineChart& chart, double x0, double y0,
                 double w, double h) {
  const double left = 70, right = 150, top = 28, bottom = 40;
  const double pw = w - left - right, ph = h - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Series& s : chart.series) {
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (chart.zero_line) {
    ymin = std::min(ymin, 0.0);
    ymax = std::max(ymax, 0.0);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double x) { return x0 + left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return y0 + top + (ymax - y) / (ymax - ymin) * ph; };

  os << "<g>\n";
  os << "<text x=\"" << x0 + left + pw / 2 << "\" y=\"" << y0 + 18
     << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(chart.title) << "</text>\n";
  os << "<rect x=\"" << x0 + left << "\" y=\"" << y0 + top << "\" width=\"" << pw
     << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";

  const double xs = niceStep(xmax - xmin, 8);
  for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-9 * xs; t += xs) {
    os << "<line x1=\"" << px(t) << "\" y1=\"" << y0 + top << "\" x2=\"" << px(t)
       << "\" y2=\"" << y0 + top + ph << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << px(t) << "\" y=\"" << y0 + top + ph + 15
       << "\" text-anchor=\"middle\" font-size=\"10\">" << (std::abs(t) < 1e-12 ? 0.0 : t)
       << "</text>\n";
  }
  const double ys = niceStep(ymax - ymin, 5);
  for (double v = std::ceil(ymin / ys) * ys; v <= ymax + 1e-9 * ys; v += ys) {
    os << "<line x1=\"" << x0 + left << "\" y1=\"" << py(v) << "\" x2=\"" << x0 + left + pw
       << "\" y2=\"" << py(v) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << x0 + left - 5 << "\" y=\"" << py(v) + 3
       << "\" text-anchor=\"end\" font-size=\"10\">" << (std::abs(v) < 1e-12 * ys ? 0.0 : v)
       << "</text>\n";
  }
  if (chart.zero_line && ymin < 0.0 && ymax > 0.0) {
    os << "<line x1=\"" << x0 + left << "\" y1=\"" << py(0) << "\" x2=\"" << x0 + left + pw
       << "\" y2=\"" << py(0) << "\" stroke=\"#000\" stroke-width=\"0.8\"/>\n";
  }
  os << "<text x=\"" << x0 + left + pw / 2 << "\" y=\"" << y0 + h - 6
     << "\" text-anchor=\"middle\" font-size=\"11\">" << escape(chart.x_label) << "</text>\n";
  os << "<text transform=\"translate(" << x0 + 16 << "," << y0 + top + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"11\">" << escape(chart.y_label)
     << "</text>\n";

  for (size_t k = 0; k < chart.series.size(); ++k) {
    const Series& s = chart.series[k];
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\"";
    if (s.dashed) os << " stroke-dasharray=\"5,3\"";
    os << " points=\"";
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    const double ly = y0 + top + 12 + 16 * static_cast<double>(k);
    os << "<line x1=\"" << x0 + left + pw + 10 << "\" y1=\"" << ly << "\" x2=\""
       << x0 + left + pw + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color << "\"";
    if (s.dashed) os << " stroke-dasharray=\"5,3\"";
    os << "/>\n<text x=\"" << x0 + left + pw + 35 << "\" y=\"" << ly + 4
       << "\" font-size=\"11\">" << escape(s.label) << "</text>\n";
  }
  os << "</g>\n";
}

Series column(const std::vector<TelemetryRecord>& recs, const std::string& label,
              double (*get)(const TelemetryRecord&, int), int idx, bool dashed = false) {
  Series s;
  s.label = label;
  s.dashed = dashed;
  s.x.reserve(recs.size());
  s.y.reserve(recs.size());
  for (const auto& r : recs) {
    s.x.push_back(r.t);
    s.y.push_back(get(r, idx));
  }
  return s;
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

std::string renderSvg(const std::vector<LineChart>& charts, int width, int panel_height) {
  std::ostringstream os;
  const int height = std::max<int>(1, static_cast<int>(charts.size())) * panel_height;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << ' ' << height
     << "\" font-family=\"sans-serif\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (size_t i = 0; i < charts.size(); ++i) {
    renderPanel(os, charts[i], 0, static_cast<double>(i) * panel_height, width, panel_height);
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::string> emitPlots(const std::vector<TelemetryRecord>& recs,
                                   const std::string& prefix, double mu_s) {
  const int n_x = recs.empty() ? kRefDim : static_cast<int>(recs.front().x_r.size());
  const int n_c = recs.empty() ? 0 : static_cast<int>(recs.front().h_r.size());

  auto pos = [](const TelemetryRecord& r, int i) { return r.c(i); };
  auto pend = [](const TelemetryRecord& r, int i) {
    return i == 0 ? r.theta : i == 1 ? r.phi : r.l;
  };
  auto xr = [](const TelemetryRecord& r, int i) { return r.x_r(i); };
  auto xw = [](const TelemetryRecord& r, int i) { return r.x_w(i); };
  auto ug = [](const TelemetryRecord& r, int i) { return r.u_g(i); };
  auto cone = [](const TelemetryRecord& r, int sign) { return sign * r.u_g.z(); };
  auto hr = [](const TelemetryRecord& r, int i) { return r.h_r(i); };
  auto hw = [](const TelemetryRecord& r, int i) { return r.h_w(i); };
  auto lyap = [](const TelemetryRecord& r, int i) { return i == 0 ? r.V : r.V_dot; };

  LineChart pendulum{"Pendulum coordinates", "t [s]", "rad, m", {}, false};
  pendulum.series = {column(recs, "theta", pend, 0), column(recs, "phi", pend, 1),
                     column(recs, "l", pend, 2)};
  LineChart position{"Mass position", "t [s]", "m", {}, false};
  position.series = {column(recs, "cx", pos, 0), column(recs, "cy", pos, 1),
                     column(recs, "cz", pos, 2)};
  LineChart refs{"Applied (solid) vs target (dashed) reference", "t [s]", "", {}, false};
  for (int i = 0; i < std::min(n_x, 3); ++i) {
    refs.series.push_back(column(recs, "xw_" + std::to_string(i), xw, i));
    refs.series.push_back(column(recs, "xr_" + std::to_string(i), xr, i, true));
  }

  LineChart tangential{"Tangential GRF and friction cone", "t [s]", "N", {}, true};
  tangential.series = {column(recs, "ugx", ug, 0), column(recs, "ugy", ug, 1)};
  Series up = column(recs, "+mu ugz", cone, 1, true);
  Series down = column(recs, "-mu ugz", cone, -1, true);
  for (double& v : up.y) v *= mu_s;
  for (double& v : down.y) v *= mu_s;
  tangential.series.push_back(std::move(up));
  tangential.series.push_back(std::move(down));
  LineChart normal{"Normal GRF", "t [s]", "N", {column(recs, "ugz", ug, 2)}, true};

  LineChart applied{"Constraints at applied reference", "t [s]", "h_w", {}, true};
  LineChart target{"Constraints at target reference", "t [s]", "h_r", {}, true};
  for (int i = 0; i < n_c; ++i) {
    applied.series.push_back(column(recs, "hw_" + std::to_string(i), hw, i));
    target.series.push_back(column(recs, "hr_" + std::to_string(i), hr, i));
  }

  LineChart value{"Lyapunov function", "t [s]", "V", {column(recs, "V", lyap, 0)}, false};
  LineChart rate{"Lyapunov rate", "t [s]", "dV/dt", {column(recs, "Vdot", lyap, 1)}, true};

  const std::vector<std::pair<std::string, std::vector<LineChart>>> files = {
      {"_states.svg", {pendulum, position, refs}},
      {"_grf.svg", {tangential, normal}},
      {"_constraints.svg", {applied, target}},
      {"_lyapunov.svg", {value, rate}},
  };
  std::vector<std::string> paths;
  for (const auto& [suffix, charts] : files) {
    const std::string path = prefix + suffix;
    writeFile(path, renderSvg(charts));
    paths.push_back(path);
  }
  return paths;
}

}  // namespace grfgov
