#pragma once

#include <cstdint>
#include <vector>

#include "growcut/image.hpp"

namespace growcut {

/// Outer boundary of one 8-connected component, as visited pixel centers and
/// the Freeman chain code between them (0 = east, clockwise with y down).
struct Contour {
  std::vector<Point> points;
  std::vector<std::uint8_t> chain;
};

/// Moore-neighbor tracing from `start`, which must be the first pixel of its
/// component in raster order. Stops on re-entering `start` in the initial
/// direction. A lone pixel yields one point and an empty chain.
Contour trace_boundary(const BinaryMask& mask, Point start);

/// One outer contour per 8-connected component, in raster order of the
/// component's first pixel.
std::vector<Contour> outer_contours(const BinaryMask& mask);

/// Corrected chain-code length: 0.980 per even step, 1.406 per odd step,
/// minus 0.091 per change of direction.
double contour_length(const Contour& c);

/// Closed polyline of the longest outer boundary in the mask; empty for an
/// empty mask.
std::vector<Point> boundary_polyline(const BinaryMask& mask);

}  // namespace growcut
