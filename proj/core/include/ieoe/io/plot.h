#ifndef IEOE_IO_PLOT_H_
#define IEOE_IO_PLOT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "ieoe/evaluator.h"

namespace ieoe::io {

struct CdfPoint {
  double z = 0.0;
  double f = 0.0;
};

// Corners of the empirical CDF on [0, z_max]: the value at 0, at every jump
// inside (0, z_max] and at z_max. F holds from each point to the next.
std::vector<CdfPoint> CdfStepPoints(std::vector<double> z, double z_max);

// cdf_points.csv: estimator,z,F
std::string FormatCdfPointsCsv(const ResultSet& results, double z_max,
                               bool exclude_flagged = false);

std::string RenderCdfSvg(const ResultSet& results, double z_max,
                         bool exclude_flagged = false);

// Writes the SVG to `svg_path` and cdf_points.csv next to it.
void RenderCdfPlot(const ResultSet& results, double z_max,
                   const std::filesystem::path& svg_path,
                   bool exclude_flagged = false);

}  // namespace ieoe::io

#endif  // IEOE_IO_PLOT_H_
