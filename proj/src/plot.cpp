#include "rachsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rachsim {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginL = 70;
constexpr int kMarginR = 160;  // legend column
constexpr int kMarginT = 30;
constexpr int kMarginB = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

double parse_num(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("plot: bad numeric field for ") + what + ": '" +
                                s + "'");
  }
}

// "nice" tick step: 1/2/5 times a power of ten covering the span
double tick_step(double span, int target_ticks) {
  if (span <= 0) return 1.0;
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) return mag * mult;
  }
  return mag * 10.0;
}

}  // namespace

std::string render_plot(const std::vector<CsvRow>& rows, const std::string& kind) {
  int metric_col;
  std::string y_label;
  if (kind == "retransmissions") {
    metric_col = 11;
    y_label = "avg retransmissions";
  } else if (kind == "outage") {
    metric_col = 13;
    y_label = "outage probability";
  } else {
    throw std::invalid_argument("plot: unknown kind '" + kind +
                                "' (use retransmissions or outage)");
  }
  if (rows.empty()) throw std::invalid_argument("plot: no data rows");

  // series key -> x -> (sum, count); repetitions averaged per grid point
  std::map<std::string, std::map<double, std::pair<double, int>>> series;
  for (const CsvRow& row : rows) {
    std::string key = row.fields[4] + " slots=" + row.fields[8];
    if (!row.fields[10].empty()) key += " m=" + row.fields[10];
    const double x = parse_num(row.fields[5], "n_devices");
    const double y = parse_num(row.fields[metric_col], y_label.c_str());
    auto& cell = series[key][x];
    cell.first += y;
    cell.second += 1;
  }

  double x_min = 1e300, x_max = -1e300, y_min = 0.0, y_max = -1e300;
  for (const auto& [key, pts] : series) {
    for (const auto& [x, sc] : pts) {
      const double y = sc.first / sc.second;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) y_max = y_min + 1.0;
  y_max *= 1.05;

  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  auto sx = [&](double x) { return kMarginL + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return kHeight - kMarginB - (y - y_min) / (y_max - y_min) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  // axes
  svg << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL
      << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kMarginL << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
      << kWidth - kMarginR << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"black\"/>\n";

  const double xstep = tick_step(x_max - x_min, 6);
  for (double x = std::ceil(x_min / xstep) * xstep; x <= x_max + 1e-9; x += xstep) {
    svg << "<line x1=\"" << fmt(sx(x)) << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
        << fmt(sx(x)) << "\" y2=\"" << kHeight - kMarginB + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(sx(x)) << "\" y=\"" << kHeight - kMarginB + 20
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" << fmt(x)
        << "</text>\n";
  }
  const double ystep = tick_step(y_max - y_min, 6);
  for (double y = y_min; y <= y_max + 1e-9; y += ystep) {
    svg << "<line x1=\"" << kMarginL - 5 << "\" y1=\"" << fmt(sy(y)) << "\" x2=\"" << kMarginL
        << "\" y2=\"" << fmt(sy(y)) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kMarginL - 8 << "\" y=\"" << fmt(sy(y) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt(y)
        << "</text>\n";
  }
  svg << "<text x=\"" << (kMarginL + kWidth - kMarginR) / 2 << "\" y=\"" << kHeight - 12
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << "simultaneous RA attempts</text>\n"
      << "<text x=\"16\" y=\"" << (kMarginT + kHeight - kMarginB) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "transform=\"rotate(-90 16 " << (kMarginT + kHeight - kMarginB) / 2 << ")\">"
      << y_label << "</text>\n";

  int idx = 0;
  for (const auto& [key, pts] : series) {
    const char* color = kPalette[idx % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::ostringstream poly;
    for (const auto& [x, sc] : pts) {
      poly << fmt(sx(x)) << "," << fmt(sy(sc.first / sc.second)) << " ";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
        << poly.str() << "\"/>\n";
    for (const auto& [x, sc] : pts) {
      svg << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(sc.first / sc.second))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const int ly = kMarginT + 14 + idx * 18;
    svg << "<line x1=\"" << kWidth - kMarginR + 10 << "\" y1=\"" << ly << "\" x2=\""
        << kWidth - kMarginR + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kWidth - kMarginR + 40 << "\" y=\"" << ly + 4
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << key << "</text>\n";
    ++idx;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_plot(const std::string& path, const std::vector<CsvRow>& rows,
                const std::string& kind) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << render_plot(rows, kind);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rachsim
