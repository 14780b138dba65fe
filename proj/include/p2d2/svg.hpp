#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "p2d2/tail_fit.hpp"

namespace p2d2 {

/// Standalone SVG plots for the harness outputs. CSV files are the
/// canonical record; these exist so a run can be eyeballed without
/// external tooling. Every plot embeds a provenance comment (command line
/// and seed)
/// right after the XML declaration.
///
/// svg_line_plot draws one series of (x, y) points with an optional
/// confidence band (band vectors empty or sized like xs) and an optional
/// overlay series sharing the x coordinates.
std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<double>& xs,
                          const std::vector<double>& ys,
                          const std::vector<double>& band_lo,
                          const std::vector<double>& band_hi,
                          const std::vector<double>& overlay_ys,
                          const std::string& provenance);

/// Heat map of a value grid (rows indexed by ys, columns by xs); NaN cells
/// render grey.
std::string svg_heatmap(const std::string& title, const std::string& x_label,
                        const std::string& y_label,
                        const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        const Eigen::MatrixXd& values,
                        const std::string& provenance);

}  // namespace p2d2
