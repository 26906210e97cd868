#include "plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfgp::plots {
namespace {

constexpr double kW = 640, kH = 400, kLeft = 64, kRight = 150, kTop = 36, kBottom = 48;

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

void save(const std::filesystem::path& file, const std::string& body) {
  std::ofstream f(file);
  f << body;
  if (!f) throw std::runtime_error("cannot write " + file.string());
}

}  // namespace

void write_line_chart(const std::filesystem::path& file, const std::string& title,
                      const std::vector<double>& x, const std::vector<Series>& series,
                      const std::string& x_label, const std::string& y_label) {
  double x0 = *std::min_element(x.begin(), x.end()), x1 = *std::max_element(x.begin(), x.end());
  double y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  if (!(x1 > x0)) x1 = x0 + 1.0;

  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + (y1 - v) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << esc(title)
    << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int n = 0; n <= 4; ++n) {
    const double yv = y0 + (y1 - y0) * n / 4.0, xv = x0 + (x1 - x0) * n / 4.0;
    o << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << py(yv) << "\" y2=\"" << py(yv)
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
      << std::round(yv * 1000) / 1000 << "</text>\n";
    o << "<text x=\"" << px(xv) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
      << std::round(xv * 1000) / 1000 << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">" << esc(x_label)
    << "</text>\n";
  o << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << kTop + ph / 2 << ")\">" << esc(y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& sr = series[s];
    o << "<polyline fill=\"none\" stroke=\"" << sr.color << "\" stroke-width=\"2\""
      << (sr.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < std::min(x.size(), sr.y.size()); ++i) {
      if (std::isfinite(sr.y[i])) o << px(x[i]) << ',' << py(sr.y[i]) << ' ';
    }
    o << "\"/>\n";
    const double ly = kTop + 12 + 18.0 * static_cast<double>(s);
    o << "<line x1=\"" << kW - kRight + 12 << "\" x2=\"" << kW - kRight + 36 << "\" y1=\"" << ly
      << "\" y2=\"" << ly << "\" stroke=\"" << sr.color << "\" stroke-width=\"2\""
      << (sr.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    o << "<text x=\"" << kW - kRight + 42 << "\" y=\"" << ly + 4 << "\">" << esc(sr.label) << "</text>\n";
  }
  o << "</svg>\n";
  save(file, o.str());
}

void write_heatmap(const std::filesystem::path& file, const std::string& title, const GridSpec& grid,
                   const Array2& values) {
  double lo = INFINITY, hi = -INFINITY;
  for (double v : values.flat()) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  const double cw = pw / static_cast<double>(values.cols()), ch = ph / static_cast<double>(values.rows());

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << esc(title)
    << "</text>\n";
  // Time runs upward.
  for (std::size_t k = 0; k < values.rows(); ++k) {
    for (std::size_t i = 0; i < values.cols(); ++i) {
      const double v = values(k, i);
      const double s = std::isfinite(v) ? (v - lo) / (hi - lo) : 0.0;
      const int r = static_cast<int>(255 * s), b = static_cast<int>(255 * (1 - s));
      o << "<rect x=\"" << kLeft + cw * static_cast<double>(i) << "\" y=\""
        << kTop + ph - ch * static_cast<double>(k + 1) << "\" width=\"" << cw + 0.5 << "\" height=\""
        << ch + 0.5 << "\" fill=\"rgb(" << r << ",40," << b << ")\"/>\n";
    }
  }
  o << "<text x=\"" << kLeft << "\" y=\"" << kTop + ph + 16 << "\">x = " << grid.x_lo << "</text>\n";
  o << "<text x=\"" << kLeft + pw << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"end\">x = "
    << grid.space(values.cols() - 1) << "</text>\n";
  o << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + ph << "\" text-anchor=\"end\">t = " << grid.t_lo
    << "</text>\n";
  o << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\">t = "
    << grid.time(values.rows() - 1) << "</text>\n";
  o << "<text x=\"" << kW - kRight + 12 << "\" y=\"" << kTop + 12 << "\">max " << hi << "</text>\n";
  o << "<text x=\"" << kW - kRight + 12 << "\" y=\"" << kTop + 30 << "\">min " << lo << "</text>\n";
  o << "</svg>\n";
  save(file, o.str());
}

}  // namespace mfgp::plots
