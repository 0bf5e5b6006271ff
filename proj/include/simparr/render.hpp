#pragma once

#include <optional>
#include <string>

#include "simparr/io.hpp"

namespace simparr {

// ---------------------------------------------------------------------------
// Deterministic SVG 1.1 pictures of an arrangement in a fixed affine chart.
// The view box is [-4,4]^2 (y axis up); every line is clipped to the box and
// every finite vertex inside it is drawn as a dot whose radius grows with the
// vertex order. Selecting `chart_line` first applies the exact projective
// change of coordinates that sends that arrangement line to infinity, so it
// disappears from the finite picture while all incidences are preserved.
// Identical input bytes produce identical SVG bytes.
// ---------------------------------------------------------------------------
struct RenderOptions {
  std::optional<std::size_t> chart_line;
};

std::string render_svg(const LoadedArrangement& la, const RenderOptions& opt = {});
void save_svg(const std::string& path, const LoadedArrangement& la,
              const RenderOptions& opt = {});

}  // namespace simparr
