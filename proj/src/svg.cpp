#include "p2d2/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "p2d2/util.hpp"

namespace p2d2 {

namespace {
constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string escape_comment(std::string text) {
  // "--" may not appear inside an XML comment.
  size_t pos = 0;
  while ((pos = text.find("--", pos)) != std::string::npos) {
    text.replace(pos, 2, "- -");
  }
  return text;
}

std::string escape_text(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

struct Axis {
  double lo = 0, hi = 1;
  double to_px(double v, double px_lo, double px_hi) const {
    if (hi == lo) return (px_lo + px_hi) / 2;
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

Axis fit_axis(std::vector<double> values) {
  Axis ax;
  bool any = false;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    if (!any) {
      ax.lo = ax.hi = v;
      any = true;
    } else {
      ax.lo = std::min(ax.lo, v);
      ax.hi = std::max(ax.hi, v);
    }
  }
  if (!any) throw std::invalid_argument("svg plot: no finite values");
  if (ax.lo == ax.hi) {
    ax.lo -= 1;
    ax.hi += 1;
  }
  return ax;
}

void draw_frame(std::ostringstream& out, const std::string& title,
                const std::string& x_label, const std::string& y_label,
                const Axis& xax, const Axis& yax) {
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-size=\"16\">" << escape_text(title) << "</text>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape_text(x_label)
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 "
         "16 "
      << kHeight / 2 << ")\">" << escape_text(y_label) << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xax.lo + (xax.hi - xax.lo) * t / 4;
    const double px = xax.to_px(fx, kLeft, kWidth - kRight);
    out << "<line x1=\"" << px << "\" y1=\"" << kHeight - kBottom
        << "\" x2=\"" << px << "\" y2=\"" << kHeight - kBottom + 5
        << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\" font-size=\"10\">" << format_double(fx)
        << "</text>\n";
    const double fy = yax.lo + (yax.hi - yax.lo) * t / 4;
    const double py = yax.to_px(fy, kHeight - kBottom, kTop);
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py << "\" x2=\""
        << kLeft << "\" y2=\"" << py << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 3
        << "\" text-anchor=\"end\" font-size=\"10\">" << format_double(fy)
        << "</text>\n";
  }
}

std::string header(const std::string& provenance) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<!-- " << escape_comment(provenance) << " -->\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out.str();
}
}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<double>& xs,
                          const std::vector<double>& ys,
                          const std::vector<double>& band_lo,
                          const std::vector<double>& band_hi,
                          const std::vector<double>& overlay_ys,
                          const std::string& provenance) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw std::invalid_argument("svg_line_plot: xs and ys must match and be non-empty");
  }
  const bool has_band = !band_lo.empty();
  if (has_band && (band_lo.size() != xs.size() || band_hi.size() != xs.size())) {
    throw std::invalid_argument("svg_line_plot: band size mismatch");
  }
  const bool has_overlay = !overlay_ys.empty();
  if (has_overlay && overlay_ys.size() != xs.size()) {
    throw std::invalid_argument("svg_line_plot: overlay size mismatch");
  }
  Axis xax = fit_axis(xs);
  std::vector<double> yvals = ys;
  if (has_band) {
    yvals.insert(yvals.end(), band_lo.begin(), band_lo.end());
    yvals.insert(yvals.end(), band_hi.begin(), band_hi.end());
  }
  if (has_overlay) yvals.insert(yvals.end(), overlay_ys.begin(), overlay_ys.end());
  Axis yax = fit_axis(yvals);

  std::ostringstream out;
  out << header(provenance);
  draw_frame(out, title, x_label, y_label, xax, yax);
  auto px = [&](double x) { return xax.to_px(x, kLeft, kWidth - kRight); };
  auto py = [&](double y) { return yax.to_px(y, kHeight - kBottom, kTop); };
  if (has_band) {
    out << "<polygon fill=\"#4477aa\" fill-opacity=\"0.2\" stroke=\"none\" "
           "points=\"";
    for (size_t i = 0; i < xs.size(); ++i) {
      out << px(xs[i]) << ',' << py(band_hi[i]) << ' ';
    }
    for (size_t i = xs.size(); i-- > 0;) {
      out << px(xs[i]) << ',' << py(band_lo[i]) << ' ';
    }
    out << "\"/>\n";
  }
  if (has_overlay) {
    out << "<polyline fill=\"none\" stroke=\"#cc6677\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6 3\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i) {
      out << px(xs[i]) << ',' << py(overlay_ys[i]) << ' ';
    }
    out << "\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#4477aa\" stroke-width=\"2\" "
         "points=\"";
  for (size_t i = 0; i < xs.size(); ++i) {
    out << px(xs[i]) << ',' << py(ys[i]) << ' ';
  }
  out << "\"/>\n";
  for (size_t i = 0; i < xs.size(); ++i) {
    out << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i])
        << "\" r=\"3\" fill=\"#4477aa\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string svg_heatmap(const std::string& title, const std::string& x_label,
                        const std::string& y_label,
                        const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        const Eigen::MatrixXd& values,
                        const std::string& provenance) {
  if (xs.empty() || ys.empty() ||
      values.rows() != static_cast<Eigen::Index>(ys.size()) ||
      values.cols() != static_cast<Eigen::Index>(xs.size())) {
    throw std::invalid_argument("svg_heatmap: grid shape mismatch");
  }
  double lo = 0, hi = 1;
  {
    bool any = false;
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      for (Eigen::Index j = 0; j < values.cols(); ++j) {
        const double v = values(i, j);
        if (!std::isfinite(v)) continue;
        if (!any) {
          lo = hi = v;
          any = true;
        } else {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    }
    if (!any) throw std::invalid_argument("svg_heatmap: no finite values");
    if (lo == hi) hi = lo + 1;
  }
  std::ostringstream out;
  out << header(provenance);
  Axis xax{xs.front(), xs.back()};
  Axis yax{ys.front(), ys.back()};
  draw_frame(out, title, x_label, y_label, xax, yax);
  const double cell_w = (kWidth - kLeft - kRight) / xs.size();
  const double cell_h = (kHeight - kTop - kBottom) / ys.size();
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      std::string fill;
      if (!std::isfinite(v)) {
        fill = "rgb(128,128,128)";
      } else {
        // Dark blue at the minimum to yellow at the maximum.
        const double t = (v - lo) / (hi - lo);
        const int r = static_cast<int>(std::lround(252 * t));
        const int g = static_cast<int>(std::lround(30 + 200 * t));
        const int b = static_cast<int>(std::lround(120 * (1 - t) + 40));
        std::ostringstream color;
        color << "rgb(" << r << ',' << g << ',' << b << ')';
        fill = color.str();
      }
      // Row i is the i-th y value; draw with y increasing upward.
      const double x = kLeft + j * cell_w;
      const double y = kHeight - kBottom - (i + 1) * cell_h;
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w
          << "\" height=\"" << cell_h << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace p2d2
