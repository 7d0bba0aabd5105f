#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agpv/image.hpp"

namespace agpv {

/// Stroke font for 0-9 and A-Z. Centre lines live in a 6 x 8 unit box
/// (y down); strokes are one unit wide, so ink covers 7 x 9 units.
struct GlyphStroke {
    std::vector<PointF> points;
};

const std::vector<GlyphStroke>& glyph_strokes(char label);

struct GlyphPlacement {
    PointF center;              // canvas position of the glyph box centre
    double unit = 48.0 / 9.0;   // pixels per font unit
    double rotation = 0.0;      // radians, clockwise on screen (y down)
    std::uint8_t ink = 30;
};

/// Anti-aliased stroke rendering blended onto `canvas`. Returns the bounding
/// box of touched pixels.
Box draw_glyph(GrayImage& canvas, char label, const GlyphPlacement& placement);

constexpr int kCorpusSize = 64;
constexpr std::uint8_t kCorpusInk = 30;
constexpr std::uint8_t kCorpusBackground = 225;

/// One clean glyph, ink 48 px tall (before rotation), centred on a
/// size x size canvas.
GrayImage render_corpus_glyph(char label, int size = kCorpusSize, double rotation = 0.0,
                              Box* ink_box = nullptr);

} // namespace agpv
