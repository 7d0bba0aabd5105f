#include "agpv/glyphs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace agpv {

namespace {

using Pts = std::vector<PointF>;

using Font = std::map<char, std::vector<GlyphStroke>>;

Font make_font()
{
    Font f;
    auto s = [](Pts p) { return GlyphStroke{std::move(p)}; };
    // Chamfered octagon used by the round characters.
    const Pts ring = {{1.5, 0}, {4.5, 0}, {6, 1.5}, {6, 6.5}, {4.5, 8}, {1.5, 8}, {0, 6.5}, {0, 1.5}, {1.5, 0}};

    f['0'] = {s(ring), s({{0.75, 7.25}, {5.25, 0.75}})};
    f['1'] = {s({{1.0, 2.0}, {3.5, 0}, {3.5, 8}}), s({{0.5, 8}, {5.5, 8}})};
    f['2'] = {s({{0, 1.5}, {1.5, 0}, {4.5, 0}, {6, 1.5}, {6, 3}, {0, 8}, {6, 8}})};
    f['3'] = {s({{0, 0}, {6, 0}, {3, 3.5}, {4.5, 3.5}, {6, 5}, {6, 6.5}, {4.5, 8}, {1.5, 8}, {0, 6.5}})};
    f['4'] = {s({{4.5, 8}, {4.5, 0}, {0, 5.5}, {6, 5.5}})};
    f['5'] = {s({{6, 0}, {0, 0}, {0, 3.7}, {4.5, 3.7}, {6, 5.2}, {6, 6.5}, {4.5, 8}, {0, 8}})};
    f['6'] = {s({{5.5, 0}, {2, 0}, {0, 2}, {0, 6.5}, {1.5, 8}, {4.5, 8}, {6, 6.5}, {6, 5}, {4.5, 3.5}, {0, 3.5}})};
    f['7'] = {s({{0, 0}, {6, 0}, {2, 8}}), s({{2, 4}, {5.5, 4}})};
    f['8'] = {s({{1.5, 0}, {4.5, 0}, {5.5, 1}, {5.5, 3}, {4.5, 4}, {1.5, 4}, {0.5, 3}, {0.5, 1}, {1.5, 0}}),
              s({{1.5, 4}, {4.5, 4}, {6, 5.5}, {6, 6.5}, {4.5, 8}, {1.5, 8}, {0, 6.5}, {0, 5.5}, {1.5, 4}})};
    f['9'] = {s({{6, 4.5}, {1.5, 4.5}, {0, 3}, {0, 1.5}, {1.5, 0}, {4.5, 0}, {6, 1.5}, {6, 8}})};

    f['A'] = {s({{0, 8}, {3, 0}, {6, 8}}), s({{1.1, 5}, {4.9, 5}})};
    f['B'] = {s({{0, 4}, {4.5, 4}, {5.5, 3}, {5.5, 1}, {4.5, 0}, {0, 0}, {0, 8}, {4.5, 8}, {6, 6.5},
                 {6, 5.5}, {4.5, 4}})};
    f['C'] = {s({{6, 1.5}, {4.5, 0}, {1.5, 0}, {0, 1.5}, {0, 6.5}, {1.5, 8}, {4.5, 8}, {6, 6.5}})};
    f['D'] = {s({{0, 0}, {4, 0}, {6, 2}, {6, 6}, {4, 8}, {0, 8}, {0, 0}})};
    f['E'] = {s({{6, 0}, {0, 0}, {0, 8}, {6, 8}}), s({{0, 4}, {4.5, 4}})};
    f['F'] = {s({{6, 0}, {0, 0}, {0, 8}}), s({{0, 4}, {4.5, 4}})};
    f['G'] = {s({{6, 1.5}, {4.5, 0}, {1.5, 0}, {0, 1.5}, {0, 6.5}, {1.5, 8}, {4.5, 8}, {6, 6.5}, {6, 4.5},
                 {3.5, 4.5}})};
    f['H'] = {s({{0, 0}, {0, 8}}), s({{6, 0}, {6, 8}}), s({{0, 3.5}, {6, 3.5}})};
    f['I'] = {s({{3, 0}, {3, 8}}), s({{0.5, 0}, {5.5, 0}}), s({{0.5, 8}, {5.5, 8}})};
    f['J'] = {s({{0, 0}, {6, 0}, {6, 6.5}, {4.5, 8}, {1.5, 8}, {0, 6.5}, {0, 5}})};
    f['K'] = {s({{0, 0}, {0, 8}}), s({{6, 0}, {0, 5}}), s({{2, 3.4}, {6, 8}})};
    f['L'] = {s({{0, 0}, {0, 8}, {6, 8}})};
    f['M'] = {s({{0, 8}, {0, 0}, {3, 4.5}, {6, 0}, {6, 8}})};
    f['N'] = {s({{0, 8}, {0, 0}, {6, 8}, {6, 0}})};
    f['O'] = {s(ring)};
    f['P'] = {s({{0, 8}, {0, 0}, {4.5, 0}, {6, 1.5}, {6, 3}, {4.5, 4.5}, {0, 4.5}})};
    f['Q'] = {s(ring), s({{4, 6}, {6, 8}})};
    f['R'] = {s({{0, 8}, {0, 0}, {4.5, 0}, {6, 1.5}, {6, 3}, {4.5, 4.5}, {0, 4.5}}), s({{4.5, 4.5}, {6, 8}})};
    f['S'] = {s({{6, 1.5}, {4.5, 0}, {1.5, 0}, {0, 1.5}, {0, 2.5}, {1.5, 4}, {4.5, 4}, {6, 5.5}, {6, 6.5},
                 {4.5, 8}, {1.5, 8}, {0, 6.5}})};
    f['T'] = {s({{0, 0}, {6, 0}}), s({{3, 0}, {3, 8}})};
    f['U'] = {s({{0, 0}, {0, 6.5}, {1.5, 8}, {4.5, 8}, {6, 6.5}, {6, 0}})};
    f['V'] = {s({{0, 0}, {3, 8}, {6, 0}})};
    f['W'] = {s({{0, 0}, {1.5, 8}, {3, 3.5}, {4.5, 8}, {6, 0}})};
    f['X'] = {s({{0, 0}, {6, 8}}), s({{6, 0}, {0, 8}})};
    f['Y'] = {s({{0, 0}, {3, 4}, {6, 0}}), s({{3, 4}, {3, 8}})};
    f['Z'] = {s({{0, 0}, {6, 0}, {0, 8}, {6, 8}}), s({{1.5, 4}, {4.5, 4}})};
    return f;
}

double segment_distance(PointF p, PointF a, PointF b)
{
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double wx = p.x - a.x, wy = p.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? (wx * vx + wy * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = wx - t * vx, dy = wy - t * vy;
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace

const std::vector<GlyphStroke>& glyph_strokes(char label)
{
    static const Font font = make_font();
    const auto it = font.find(label);
    if (it == font.end())
        throw std::invalid_argument(std::string("no glyph for label '") + label + "'");
    return it->second;
}

Box draw_glyph(GrayImage& canvas, char label, const GlyphPlacement& pl)
{
    const auto& strokes = glyph_strokes(label);
    constexpr double half_width = 0.5;
    constexpr int ss = 4;   // supersampling per axis

    const double c = std::cos(pl.rotation), s = std::sin(pl.rotation);
    // font unit -> canvas, about the box centre (3, 4)
    auto to_canvas = [&](PointF p) {
        const double x = (p.x - 3.0) * pl.unit, y = (p.y - 4.0) * pl.unit;
        return PointF{pl.center.x + c * x - s * y, pl.center.y + s * x + c * y};
    };
    auto to_font = [&](PointF q) {
        const double x = q.x - pl.center.x, y = q.y - pl.center.y;
        return PointF{(c * x + s * y) / pl.unit + 3.0, (-s * x + c * y) / pl.unit + 4.0};
    };

    double min_x = 1e18, min_y = 1e18, max_x = -1e18, max_y = -1e18;
    for (const auto& st : strokes)
        for (const auto& p : st.points) {
            const PointF q = to_canvas(p);
            min_x = std::min(min_x, q.x);
            max_x = std::max(max_x, q.x);
            min_y = std::min(min_y, q.y);
            max_y = std::max(max_y, q.y);
        }
    const double pad = half_width * pl.unit + 2.0;
    const int x0 = std::max(0, static_cast<int>(std::floor(min_x - pad)));
    const int y0 = std::max(0, static_cast<int>(std::floor(min_y - pad)));
    const int x1 = std::min(canvas.width() - 1, static_cast<int>(std::ceil(max_x + pad)));
    const int y1 = std::min(canvas.height() - 1, static_cast<int>(std::ceil(max_y + pad)));

    int bx0 = x1 + 1, by0 = y1 + 1, bx1 = x0 - 1, by1 = y0 - 1;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            int hits = 0;
            for (int sy = 0; sy < ss; ++sy) {
                for (int sx = 0; sx < ss; ++sx) {
                    const PointF f = to_font({x + (sx + 0.5) / ss, y + (sy + 0.5) / ss});
                    bool inside = false;
                    for (const auto& st : strokes) {
                        for (std::size_t i = 0; i + 1 < st.points.size() && !inside; ++i)
                            inside = segment_distance(f, st.points[i], st.points[i + 1]) <= half_width;
                        if (inside)
                            break;
                    }
                    hits += inside ? 1 : 0;
                }
            }
            if (hits == 0)
                continue;
            const double cov = static_cast<double>(hits) / (ss * ss);
            canvas.at(x, y) = quantize(canvas.at(x, y) * (1.0 - cov) + pl.ink * cov);
            bx0 = std::min(bx0, x);
            by0 = std::min(by0, y);
            bx1 = std::max(bx1, x);
            by1 = std::max(by1, y);
        }
    }
    if (bx1 < bx0)
        return {0, 0, 0, 0};
    return {bx0, by0, bx1 - bx0 + 1, by1 - by0 + 1};
}

GrayImage render_corpus_glyph(char label, int size, double rotation, Box* ink_box)
{
    GrayImage img(size, size, kCorpusBackground);
    GlyphPlacement pl;
    pl.center = {size / 2.0, size / 2.0};
    pl.unit = 48.0 / 9.0;
    pl.rotation = rotation;
    pl.ink = kCorpusInk;
    const Box b = draw_glyph(img, label, pl);
    if (ink_box)
        *ink_box = b;
    return img;
}

} // namespace agpv
