#include "flexmat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>

#include "flexmat/csv.hpp"

namespace flexmat {

namespace {

// Geometry in CSS pixels.
constexpr int kCell = 16;
constexpr int kMarginLeft = 56;
constexpr int kMarginTop = 20;
constexpr int kMarginBottom = 52;
constexpr int kMarginRight = 104;
constexpr int kBarGap = 28;
constexpr int kBarWidth = 16;
constexpr int kBarSegments = 64;

// Sequential ramp endpoints: white at zero, dark blue at the maximum.
constexpr int kLowColor[3] = {255, 255, 255};
constexpr int kHighColor[3] = {8, 48, 107};

void append(std::string& out, const char* format, ...)
    __attribute__((format(printf, 2, 3)));

void append(std::string& out, const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  const int written = std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  out.append(buffer, buffer + std::min<int>(written, sizeof(buffer) - 1));
}

void append_color(std::string& out, double fraction) {
  const double f = std::clamp(fraction, 0.0, 1.0);
  const int r = static_cast<int>(
      std::lround(kLowColor[0] + (kHighColor[0] - kLowColor[0]) * f));
  const int g = static_cast<int>(
      std::lround(kLowColor[1] + (kHighColor[1] - kLowColor[1]) * f));
  const int b = static_cast<int>(
      std::lround(kLowColor[2] + (kHighColor[2] - kLowColor[2]) * f));
  append(out, "#%02x%02x%02x", r, g, b);
}

std::string clock_label(double horizon_start_hour, int slot, double delta) {
  const double hour = std::fmod(horizon_start_hour + slot * delta, 24.0);
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", hour);
  return buffer;
}

}  // namespace

std::string render_heatmap_svg(const ReductionPotentialMatrix& matrix,
                               double horizon_start_hour) {
  if (!matrix.any_valid()) {
    throw AllMaskedError();
  }

  const int rows = matrix.rows();
  const int cols = matrix.cols();
  const int plot_width = cols * kCell;
  const int plot_height = rows * kCell;
  const int width = kMarginLeft + plot_width + kMarginRight;
  const int height = kMarginTop + plot_height + kMarginBottom;

  // An all-zero (or negative-only) matrix renders against [0, 1) so the
  // ramp never divides by zero.
  const double observed_max = matrix.max_valid_value();
  const double scale_max = observed_max > 0.0 ? observed_max : 1.0;

  std::string svg;
  svg.reserve(static_cast<std::size_t>(rows) * cols * 96 + 4096);
  append(svg,
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
         "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
         width, height, width, height);
  append(svg, "<rect width=\"%d\" height=\"%d\" fill=\"#ffffff\"/>\n", width,
         height);

  // Cells; k = 1 sits at the bottom row.
  for (int k = 1; k <= rows; ++k) {
    const int y = kMarginTop + (rows - k) * kCell;
    for (int t = 0; t < cols; ++t) {
      if (!matrix.valid(k, t)) {
        continue;
      }
      const int x = kMarginLeft + t * kCell;
      append(svg, "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"",
             x, y, kCell, kCell);
      append_color(svg, matrix.at(k, t) / scale_max);
      append(svg, "\"/>\n");
    }
  }
  append(svg,
         "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
         "stroke=\"#666666\" stroke-width=\"1\"/>\n",
         kMarginLeft, kMarginTop, plot_width, plot_height);

  // Row labels (window length k).
  const int row_stride = rows > 16 ? (rows + 15) / 16 : 1;
  for (int k = 1; k <= rows; k += row_stride) {
    const int y = kMarginTop + (rows - k) * kCell + kCell / 2 + 4;
    append(svg,
           "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
           "font-size=\"11\" text-anchor=\"end\" fill=\"#333333\">%d</text>\n",
           kMarginLeft - 6, y, k);
  }
  append(svg,
         "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\" fill=\"#333333\" transform=\"rotate(-90 %d "
         "%d)\">window length k (slots)</text>\n",
         14, kMarginTop + plot_height / 2, 14, kMarginTop + plot_height / 2);

  // Column labels as clock hours.
  const int col_stride = cols > 16 ? (cols + 15) / 16 : 1;
  for (int t = 0; t < cols; t += col_stride) {
    const int x = kMarginLeft + t * kCell + kCell / 2;
    append(svg,
           "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
           "font-size=\"11\" text-anchor=\"middle\" fill=\"#333333\">%s"
           "</text>\n",
           x, kMarginTop + plot_height + 16,
           clock_label(horizon_start_hour,
                       t, matrix.horizon.slot_duration_hours)
               .c_str());
  }
  append(svg,
         "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\" fill=\"#333333\">window start (clock "
         "hour)</text>\n",
         kMarginLeft + plot_width / 2, kMarginTop + plot_height + 38);

  // Color bar, max at the top.
  const int bar_x = kMarginLeft + plot_width + kBarGap;
  const double segment_height =
      static_cast<double>(plot_height) / kBarSegments;
  for (int s = 0; s < kBarSegments; ++s) {
    const double y0 = kMarginTop + s * segment_height;
    append(svg, "<rect x=\"%d\" y=\"%.2f\" width=\"%d\" height=\"%.2f\" "
                "fill=\"",
           bar_x, y0, kBarWidth, segment_height + 0.5);
    append_color(svg, 1.0 - static_cast<double>(s) / (kBarSegments - 1));
    append(svg, "\"/>\n");
  }
  append(svg,
         "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
         "stroke=\"#666666\" stroke-width=\"1\"/>\n",
         bar_x, kMarginTop, kBarWidth, plot_height);
  const char* unit = matrix.normalization == Normalization::kPerVehicle
                         ? "kW per vehicle"
                         : "kW";
  append(svg,
         "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
         "fill=\"#333333\">%.3g</text>\n",
         bar_x + kBarWidth + 5, kMarginTop + 10, scale_max);
  append(svg,
         "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
         "fill=\"#333333\">0</text>\n",
         bar_x + kBarWidth + 5, kMarginTop + plot_height);
  append(svg,
         "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#333333\">%s</text>\n",
         bar_x - 4, kMarginTop - 6, unit);

  append(svg, "</svg>\n");
  return svg;
}

void render_heatmap(const ReductionPotentialMatrix& matrix,
                    const std::string& path, double horizon_start_hour) {
  write_text_file(path, render_heatmap_svg(matrix, horizon_start_hour));
}

}  // namespace flexmat
