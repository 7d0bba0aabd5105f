#include "agpv/extraction.hpp"

#include <algorithm>
#include <limits>

namespace agpv {

const char* to_string(Polarity p)
{
    return p == Polarity::Positive ? "positive" : "negative";
}

Mask threshold_dog(const DogImage& dog, Polarity polarity, int t_dog)
{
    Mask mask(dog.width(), dog.height(), 0);
    auto out = mask.pixels();
    const auto in = dog.pixels();
    if (polarity == Polarity::Positive) {
        for (std::size_t i = 0; i < in.size(); ++i)
            out[i] = in[i] > t_dog ? 1 : 0;
    } else {
        for (std::size_t i = 0; i < in.size(); ++i)
            out[i] = in[i] < -t_dog ? 1 : 0;
    }
    return mask;
}

std::vector<std::vector<Point>> connected_components(const Mask& mask)
{
    const int w = mask.width();
    const int h = mask.height();
    std::vector<int> label(mask.size(), -1);
    std::vector<std::vector<Point>> components;
    std::vector<Point> stack;

    // A raster scan meets each component first at its smallest (y, x) pixel,
    // so discovery order is the required output order.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (!mask.at(x, y) || label[idx] >= 0)
                continue;
            const int id = static_cast<int>(components.size());
            std::vector<Point> comp;
            label[idx] = id;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                comp.push_back(p);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = p.x + dx;
                        const int ny = p.y + dy;
                        if ((dx == 0 && dy == 0) || !mask.contains(nx, ny) || !mask.at(nx, ny))
                            continue;
                        const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                        if (label[nidx] >= 0)
                            continue;
                        label[nidx] = id;
                        stack.push_back({nx, ny});
                    }
                }
            }
            std::sort(comp.begin(), comp.end(), [](const Point& a, const Point& b) {
                return a.y != b.y ? a.y < b.y : a.x < b.x;
            });
            components.push_back(std::move(comp));
        }
    }
    return components;
}

std::vector<CharCandidate> filter_by_size(const std::vector<std::vector<Point>>& components,
                                          const Octave& octave, Polarity polarity,
                                          const ExtractOptions& opts)
{
    std::vector<CharCandidate> out;
    const GrayImage& base = octave.initial;
    for (const auto& comp : components) {
        if (comp.empty())
            continue;
        int x0 = std::numeric_limits<int>::max(), y0 = x0;
        int x1 = std::numeric_limits<int>::min(), y1 = x1;
        for (const auto& p : comp) {
            x0 = std::min(x0, p.x);
            y0 = std::min(y0, p.y);
            x1 = std::max(x1, p.x);
            y1 = std::max(y1, p.y);
        }
        const int bw = x1 - x0 + 1;
        const int bh = y1 - y0 + 1;
        if (bw < opts.min_size || bw > opts.max_size || bh < opts.min_size || bh > opts.max_size)
            continue;

        CharCandidate c;
        c.octave = octave.index;
        c.polarity = polarity;
        c.pixels = comp;
        c.bbox = {x0, y0, bw, bh};
        const int s = octave.scale_factor;
        c.source_bbox = {x0 * s, y0 * s, bw * s, bh * s};

        const int px0 = std::max(0, x0 - 1);
        const int py0 = std::max(0, y0 - 1);
        const int px1 = std::min(base.width(), x1 + 2);
        const int py1 = std::min(base.height(), y1 + 2);
        c.patch_box = {px0, py0, px1 - px0, py1 - py0};
        c.patch = crop(base, c.patch_box);
        c.mask = Mask(c.patch_box.w, c.patch_box.h, 0);
        for (const auto& p : comp)
            c.mask.at(p.x - px0, p.y - py0) = 1;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<CharCandidate> extract_from_pyramid(const std::vector<Octave>& pyramid,
                                                const ExtractOptions& opts)
{
    std::vector<CharCandidate> out;
    for (const auto& oct : pyramid) {
        for (Polarity pol : {Polarity::Positive, Polarity::Negative}) {
            const auto comps = connected_components(threshold_dog(oct.dog, pol, opts.t_dog));
            auto found = filter_by_size(comps, oct, pol, opts);
            std::move(found.begin(), found.end(), std::back_inserter(out));
        }
    }
    return out;
}

std::vector<CharCandidate> extract_candidates(const GrayImage& img, const ExtractOptions& opts)
{
    return extract_from_pyramid(build_pyramid(img, opts.octaves), opts);
}

} // namespace agpv
