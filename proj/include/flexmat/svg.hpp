#pragma once

#include <string>

#include "flexmat/matrix.hpp"

namespace flexmat {

// Renders the matrix as an SVG heatmap: one rectangle per valid cell,
// column = window start (labeled as clock time), row = window length with
// k = 1 at the bottom, a white-to-dark sequential ramp with white at 0 and
// the darkest shade at the matrix maximum, plus a labeled color bar. Masked
// cells are left unpainted. An all-zero matrix renders against a [0, 1)
// scale. Byte output is deterministic for identical input.
// Throws AllMaskedError when no cell is valid.
std::string render_heatmap_svg(const ReductionPotentialMatrix& matrix,
                               double horizon_start_hour = 12.0);

void render_heatmap(const ReductionPotentialMatrix& matrix,
                    const std::string& path,
                    double horizon_start_hour = 12.0);

}  // namespace flexmat
