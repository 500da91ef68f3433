#include "plot.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mmsbayes/error.hpp"

namespace mmsbayes::cli {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kMargin = 48;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
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

}  // namespace

PlotFormat plot_format_from_string(const std::string& text) {
  if (text == "csv-grid") return PlotFormat::csv_grid;
  if (text == "svg") return PlotFormat::svg;
  throw DomainError("unknown plot format '" + text + "' (csv-grid or svg)");
}

PlotFormat plot_format_for_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == "svg") return PlotFormat::svg;
  }
  return PlotFormat::csv_grid;
}

std::string format_csv_grid(const DensityGrid& grid) {
  std::string out = "theta,density\n";
  char buf[96];
  for (std::size_t i = 0; i < grid.theta.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", grid.theta[i], grid.density[i]);
    out += buf;
  }
  return out;
}

std::string format_svg(const DensityGrid& grid, const std::string& title,
                       std::optional<double> mean) {
  double ymax = 0.0;
  for (double d : grid.density) {
    if (std::isfinite(d)) ymax = std::max(ymax, d);
  }
  if (ymax <= 0.0) ymax = 1.0;
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  auto px = [&](double theta) { return kMargin + theta * plot_w; };
  auto py = [&](double d) {
    return kHeight - kMargin - std::min(d, ymax * 1.05) / (ymax * 1.05) * plot_h;
  };

  std::string svg =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
      "height=\"400\" viewBox=\"0 0 640 400\">\n"
      "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  svg += "<text x=\"320\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + escape_xml(title) + "</text>\n";
  const std::string x0 = fmt("%.2f", kMargin), x1 = fmt("%.2f", kWidth - kMargin);
  const std::string y0 = fmt("%.2f", kHeight - kMargin), y1 = fmt("%.2f", kMargin);
  svg += "<line x1=\"" + x0 + "\" y1=\"" + y0 + "\" x2=\"" + x1 + "\" y2=\"" + y0 +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + x0 + "\" y1=\"" + y0 + "\" x2=\"" + x0 + "\" y2=\"" + y1 +
         "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    svg += "<text x=\"" + fmt("%.2f", px(t)) + "\" y=\"" +
           fmt("%.2f", kHeight - kMargin + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           fmt("%.2f", t) + "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.2f", kMargin - 6) + "\" y=\"" + fmt("%.2f", py(ymax)) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
         fmt("%.3g", ymax) + "</text>\n";

  svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < grid.theta.size(); ++i) {
    if (!std::isfinite(grid.density[i])) continue;
    if (i) svg += ' ';
    svg += fmt("%.2f", px(grid.theta[i])) + "," + fmt("%.2f", py(grid.density[i]));
  }
  svg += "\"/>\n";
  if (mean) {
    const std::string mx = fmt("%.2f", px(*mean));
    svg += "<line x1=\"" + mx + "\" y1=\"" + y0 + "\" x2=\"" + mx + "\" y2=\"" + y1 +
           "\" stroke=\"red\" stroke-dasharray=\"8,3,2,3\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_plot(const PlotArtifact& artifact, const DensityGrid& grid,
                const std::string& title, std::optional<double> mean) {
  std::ofstream file(artifact.path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write plot file " + artifact.path);
  file << (artifact.format == PlotFormat::svg ? format_svg(grid, title, mean)
                                              : format_csv_grid(grid));
  if (!file.flush()) throw std::runtime_error("cannot write plot file " + artifact.path);
}

}  // namespace mmsbayes::cli
