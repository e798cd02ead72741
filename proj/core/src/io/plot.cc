#include "ieoe/io/plot.h"

#include <algorithm>

#include <fmt/format.h>

#include "ieoe/error.h"
#include "ieoe/io/csv.h"

namespace ieoe::io {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf"};

std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

void CheckZMax(double z_max) {
  if (!(z_max > 0.0) || !std::isfinite(z_max)) {
    throw Error(ErrorCode::kNonpositiveZmax,
                fmt::format("z_max = {} must be positive and finite", z_max));
  }
}

}  // namespace

std::vector<CdfPoint> CdfStepPoints(std::vector<double> z, double z_max) {
  CheckZMax(z_max);
  std::sort(z.begin(), z.end());
  const double m = static_cast<double>(z.size());
  auto f_at = [&](double x) {
    if (z.empty()) return 0.0;
    auto it = std::upper_bound(z.begin(), z.end(), x);
    return static_cast<double>(it - z.begin()) / m;
  };
  std::vector<CdfPoint> pts;
  pts.push_back({0.0, f_at(0.0)});
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double v = z[i];
    if (v <= 0.0 || v >= z_max) continue;
    if (i > 0 && z[i - 1] == v) continue;
    pts.push_back({v, f_at(v)});
  }
  pts.push_back({z_max, f_at(z_max)});
  return pts;
}

std::string FormatCdfPointsCsv(const ResultSet& results, double z_max,
                               bool exclude_flagged) {
  std::string out = "estimator,z,F\n";
  for (const auto& name : results.estimators) {
    for (const auto& p :
         CdfStepPoints(results.SquaredErrors(name, exclude_flagged), z_max)) {
      out += fmt::format("{},{},{}\n", EscapeCsvField(name), p.z, p.f);
    }
  }
  return out;
}

std::string RenderCdfSvg(const ResultSet& results, double z_max,
                         bool exclude_flagged) {
  CheckZMax(z_max);
  if (results.records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no results to plot");
  }
  const double width = 720, height = 440;
  const double left = 70, right = 190, top = 30, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double z) { return left + pw * z / z_max; };
  auto sy = [&](double f) { return top + ph * (1.0 - f); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height, width, height);
  // Grid and ticks.
  for (int k = 0; k <= 5; ++k) {
    const double f = k / 5.0, z = z_max * k / 5.0;
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
        "stroke=\"#e0e0e0\"/>\n",
        left, sy(f), left + pw, sy(f));
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.1f}</text>\n",
        left - 6, sy(f) + 4, f);
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
        "stroke=\"#e0e0e0\"/>\n",
        sx(z), top, sx(z), top + ph);
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.3g}</text>\n",
        sx(z), top + ph + 18, z);
  }
  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      left, top, pw, ph);
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">squared "
      "error</text>\n",
      left + pw / 2, height - 15);
  svg += fmt::format(
      "<text x=\"18\" y=\"{:.2f}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 18 {:.2f})\">cumulative probability</text>\n",
      top + ph / 2, top + ph / 2);

  for (std::size_t e = 0; e < results.estimators.size(); ++e) {
    const auto& name = results.estimators[e];
    const char* color = kPalette[e % std::size(kPalette)];
    const auto pts =
        CdfStepPoints(results.SquaredErrors(name, exclude_flagged), z_max);
    std::string path;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == 0) {
        path += fmt::format("M{:.2f},{:.2f}", sx(pts[i].z), sy(pts[i].f));
      } else {
        path += fmt::format(" H{:.2f} V{:.2f}", sx(pts[i].z), sy(pts[i].f));
      }
    }
    svg += fmt::format(
        "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
        path, color);
    const double ly = top + 10 + 20.0 * static_cast<double>(e);
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
        "stroke=\"{}\" stroke-width=\"3\"/>\n",
        left + pw + 15, ly, left + pw + 40, ly, color);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n",
                       left + pw + 46, ly + 4, XmlEscape(name));
  }
  svg += "</svg>\n";
  return svg;
}

void RenderCdfPlot(const ResultSet& results, double z_max,
                   const std::filesystem::path& svg_path,
                   bool exclude_flagged) {
  const std::string svg = RenderCdfSvg(results, z_max, exclude_flagged);
  if (svg_path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(svg_path.parent_path(), ec);
  }
  WriteTextFile(svg_path, svg);
  WriteTextFile(svg_path.parent_path() / "cdf_points.csv",
                FormatCdfPointsCsv(results, z_max, exclude_flagged));
}

}  // namespace ieoe::io
