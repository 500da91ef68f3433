#pragma once

#include <optional>
#include <string>

#include "mmsbayes/conjugate.hpp"

namespace mmsbayes::cli {

enum class PlotFormat { csv_grid, svg };

struct PlotArtifact {
  PlotFormat format;
  std::string path;
};

// "csv-grid" or "svg"; anything else throws DomainError.
PlotFormat plot_format_from_string(const std::string& text);
// .svg selects svg, every other extension csv-grid.
PlotFormat plot_format_for_path(const std::string& path);

// Header "theta,density", one "%.12g,%.12g" row per grid point, LF endings.
std::string format_csv_grid(const DensityGrid& grid);

// Axes, one polyline and an optional dash-dotted vertical line at `mean`.
std::string format_svg(const DensityGrid& grid, const std::string& title,
                       std::optional<double> mean);

// Writes the artifact; throws std::runtime_error when the file can't be written.
void write_plot(const PlotArtifact& artifact, const DensityGrid& grid,
                const std::string& title, std::optional<double> mean);

}  // namespace mmsbayes::cli
