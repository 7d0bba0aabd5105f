#pragma once

// Reference implementations used only by the tests. Each one is written
// directly from the defining formula, sharing no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "agpv/image.hpp"

namespace oracle {

using agpv::GrayImage;
using agpv::Image;
using agpv::Mask;
using agpv::Point;

// Smallest odd integer >= 7 sigma, by search.
inline int kernel_width(double sigma)
{
    int w = 1;
    while (w < 7.0 * sigma - 1e-12)
        w += 2;
    return w;
}

inline std::vector<double> gaussian(double sigma)
{
    const int w = kernel_width(sigma);
    const int r = w / 2;
    std::vector<double> g(static_cast<std::size_t>(w));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        g[static_cast<std::size_t>(i + r)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += g[static_cast<std::size_t>(i + r)];
    }
    for (auto& v : g)
        v /= sum;
    return g;
}

inline std::uint8_t round_half_up(double v)
{
    const double r = std::floor(v + 0.5);
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

// Full two-dimensional (non-separable) Gaussian convolution, replicate borders.
inline GrayImage convolve2d(const GrayImage& img, double sigma)
{
    const auto g = gaussian(sigma);
    const int r = static_cast<int>(g.size()) / 2;
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx)
                    acc += g[static_cast<std::size_t>(dy + r)] * g[static_cast<std::size_t>(dx + r)]
                           * img.clamped(x + dx, y + dy);
            out.at(x, y) = round_half_up(acc);
        }
    return out;
}

inline GrayImage take_every(const GrayImage& img, int step)
{
    GrayImage out(img.width() / step, img.height() / step);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            out.at(x, y) = img.at(x * step, y * step);
    return out;
}

inline int linf(const GrayImage& a, const GrayImage& b)
{
    int m = 0;
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x)
            m = std::max(m, std::abs(int(a.at(x, y)) - int(b.at(x, y))));
    return m;
}

// Recursive 8-connected flood fill. Returns, for every set pixel, a component
// id; components are numbered in raster order of their first pixel.
inline std::vector<std::vector<Point>> flood_fill_components(const Mask& mask)
{
    Image<int> label(mask.width(), mask.height(), -1);
    std::vector<std::vector<Point>> comps;
    std::function<void(int, int, int)> fill = [&](int x, int y, int id) {
        if (!mask.contains(x, y) || !mask.at(x, y) || label.at(x, y) >= 0)
            return;
        label.at(x, y) = id;
        comps[static_cast<std::size_t>(id)].push_back({x, y});
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (dx || dy)
                    fill(x + dx, y + dy, id);
    };
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask.at(x, y) && label.at(x, y) < 0) {
                comps.emplace_back();
                fill(x, y, static_cast<int>(comps.size()) - 1);
            }
    for (auto& c : comps)
        std::sort(c.begin(), c.end(), [](Point a, Point b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
    return comps;
}

// Number of maximal runs of nonzero entries.
inline int runs(const std::vector<int>& v)
{
    int n = 0;
    bool inside = false;
    for (int x : v) {
        if (x != 0 && !inside)
            ++n;
        inside = x != 0;
    }
    return n;
}

struct CostTerms {
    int plain = 0;   // |runs(U) - runs(V)|
    int unite = 0;   // |runs(U or V) - runs(V)|
    int meet = 0;    // |runs(U and V) - runs(V)|
    int total() const { return plain + unite + meet; }
};

inline CostTerms cost_terms(const std::vector<int>& u, const std::vector<int>& v)
{
    std::vector<int> uni(u.size()), inter(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        uni[i] = (u[i] != 0 || v[i] != 0) ? 1 : 0;
        inter[i] = (u[i] != 0 && v[i] != 0) ? 1 : 0;
    }
    const int rv = runs(v);
    return {std::abs(runs(u) - rv), std::abs(runs(uni) - rv), std::abs(runs(inter) - rv)};
}

// Triangular-kernel histogram: bin b receives mag * max(0, 1 - d/w) where d
// is the circular distance from theta to the bin centre.
inline std::vector<double> triangle_histogram(const std::vector<std::pair<double, double>>& samples)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double w = two_pi / 64.0;
    std::vector<double> h(64, 0.0);
    for (auto [theta, mag] : samples) {
        if (mag == 0.0)
            continue;
        for (int b = 0; b < 64; ++b) {
            double d = std::fmod(std::abs(theta - b * w), two_pi);
            d = std::min(d, two_pi - d);
            h[static_cast<std::size_t>(b)] += mag * std::max(0.0, 1.0 - d / w);
        }
    }
    return h;
}

// Random test image: smooth blobs plus texture, deterministic per seed.
inline GrayImage test_image(int w, int h, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GrayImage img(w, h);
    struct Blob { double x, y, r, v; };
    std::vector<Blob> blobs;
    for (int i = 0; i < 12; ++i)
        blobs.push_back({u(rng) * w, u(rng) * h, 4 + u(rng) * w / 6, u(rng) * 200 - 100});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 128 + 40 * std::sin(x * 0.07 + seed) * std::cos(y * 0.05);
            for (const auto& b : blobs)
                if ((x - b.x) * (x - b.x) + (y - b.y) * (y - b.y) < b.r * b.r)
                    v += b.v;
            v += (u(rng) - 0.5) * 30;
            img.at(x, y) = round_half_up(v);
        }
    return img;
}

// Photo-like test image: the same scene model with optically soft edges
// (logistic profile, one pixel wide) and mild sensor noise.
inline GrayImage photo_image(int w, int h, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GrayImage img(w, h);
    struct Blob { double x, y, r, v; };
    std::vector<Blob> blobs;
    for (int i = 0; i < 12; ++i)
        blobs.push_back({u(rng) * w, u(rng) * h, 4 + u(rng) * w / 6, u(rng) * 200 - 100});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 128 + 40 * std::sin(x * 0.07 + seed) * std::cos(y * 0.05);
            for (const auto& b : blobs)
                v += b.v / (1.0 + std::exp(std::hypot(x - b.x, y - b.y) - b.r));
            v += (u(rng) - 0.5) * 8;
            img.at(x, y) = round_half_up(v);
        }
    return img;
}

} // namespace oracle
