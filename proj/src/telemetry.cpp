#include "grfgov/telemetry.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace grfgov {

namespace {

void putNumber(std::ostream& os, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, res.ptr - buf);
}

double getNumber(const std::string& s, int line, int col) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  // from_chars does not accept a leading '+'.
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": bad number '" << s << "'";
    throw std::runtime_error(os.str());
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<std::string> csvHeader(const CsvLayout& layout) {
  std::vector<std::string> h = {"t",  "cx",    "cy",    "cz", "cdx",
                                "cdy", "cdz", "theta", "phi", "l"};
  for (int i = 0; i < layout.n_x; ++i) h.push_back("xr_" + std::to_string(i));
  for (int i = 0; i < layout.n_x; ++i) h.push_back("xw_" + std::to_string(i));
  for (const char* s : {"utc_x", "utc_y", "utc_z", "ur", "lambda", "ugx", "ugy", "ugz"}) {
    h.emplace_back(s);
  }
  for (int i = 0; i < layout.n_c; ++i) h.push_back("hr_" + std::to_string(i));
  for (int i = 0; i < layout.n_c; ++i) h.push_back("hw_" + std::to_string(i));
  h.emplace_back("V");
  h.emplace_back("Vdot");
  h.emplace_back("branch");
  return h;
}

void writeCsv(std::ostream& os, const std::vector<TelemetryRecord>& records,
              const CsvLayout& fallback) {
  CsvLayout layout = fallback;
  if (!records.empty()) {
    layout.n_x = static_cast<int>(records.front().x_r.size());
    layout.n_c = static_cast<int>(records.front().h_r.size());
  }
  const auto header = csvHeader(layout);
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';

  for (const TelemetryRecord& r : records) {
    if (r.x_r.size() != layout.n_x || r.x_w.size() != layout.n_x ||
        r.h_r.size() != layout.n_c || r.h_w.size() != layout.n_c) {
      throw std::invalid_argument("writeCsv: records have inconsistent widths");
    }
    auto put = [&](double v) {
      putNumber(os, v);
      os << ',';
    };
    put(r.t);
    for (int i = 0; i < 3; ++i) put(r.c(i));
    for (int i = 0; i < 3; ++i) put(r.c_dot(i));
    put(r.theta);
    put(r.phi);
    put(r.l);
    for (int i = 0; i < layout.n_x; ++i) put(r.x_r(i));
    for (int i = 0; i < layout.n_x; ++i) put(r.x_w(i));
    for (int i = 0; i < 3; ++i) put(r.u_tc(i));
    put(r.u_r);
    put(r.lambda);
    for (int i = 0; i < 3; ++i) put(r.u_g(i));
    for (int i = 0; i < layout.n_c; ++i) put(r.h_r(i));
    for (int i = 0; i < layout.n_c; ++i) put(r.h_w(i));
    put(r.V);
    put(r.V_dot);
    os << branchName(r.branch) << '\n';
  }
}

void exportCsv(const std::vector<TelemetryRecord>& records, const std::string& path,
               const CsvLayout& fallback) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  writeCsv(out, records, fallback);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<TelemetryRecord> parseCsv(std::istream& is, CsvLayout* layout_out) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("missing CSV header");
  const auto header = split(line);

  CsvLayout layout{0, 0};
  for (const auto& h : header) {
    if (h.rfind("xr_", 0) == 0) ++layout.n_x;
    if (h.rfind("hr_", 0) == 0) ++layout.n_c;
  }
  if (header != csvHeader(layout)) throw std::runtime_error("unexpected CSV header");
  if (layout_out) *layout_out = layout;

  std::vector<TelemetryRecord> records;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " columns, got " +
                               std::to_string(cells.size()));
    }
    int col = 0;
    auto next = [&]() {
      const double v = getNumber(cells[col], line_no, col + 1);
      ++col;
      return v;
    };
    TelemetryRecord r;
    r.t = next();
    for (int i = 0; i < 3; ++i) r.c(i) = next();
    for (int i = 0; i < 3; ++i) r.c_dot(i) = next();
    r.theta = next();
    r.phi = next();
    r.l = next();
    r.x_r.resize(layout.n_x);
    r.x_w.resize(layout.n_x);
    for (int i = 0; i < layout.n_x; ++i) r.x_r(i) = next();
    for (int i = 0; i < layout.n_x; ++i) r.x_w(i) = next();
    for (int i = 0; i < 3; ++i) r.u_tc(i) = next();
    r.u_r = next();
    r.lambda = next();
    for (int i = 0; i < 3; ++i) r.u_g(i) = next();
    r.h_r.resize(layout.n_c);
    r.h_w.resize(layout.n_c);
    for (int i = 0; i < layout.n_c; ++i) r.h_r(i) = next();
    for (int i = 0; i < layout.n_c; ++i) r.h_w(i) = next();
    r.V = next();
    r.V_dot = next();
    try {
      r.branch = branchFromName(cells[col]);
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<TelemetryRecord> readCsv(const std::string& path, CsvLayout* layout) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  try {
    return parseCsv(in, layout);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error("'" + path + "': " + e.what());
  }
}

}  // namespace grfgov
