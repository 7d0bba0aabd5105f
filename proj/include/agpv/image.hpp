#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace agpv {

/// Row-major single-channel raster. Dimensions are always at least 1x1.
template <typename T>
class Image {
public:
    using value_type = T;

    Image() : width_(1), height_(1), data_(1, T{}) {}

    Image(int width, int height, T fill = T{})
        : width_(width), height_(height)
    {
        if (width < 1 || height < 1)
            throw std::invalid_argument("image dimensions must be at least 1x1");
        data_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    Image(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data))
    {
        if (width < 1 || height < 1)
            throw std::invalid_argument("image dimensions must be at least 1x1");
        if (data_.size() != static_cast<std::size_t>(width) * height)
            throw std::invalid_argument("image data length does not match width*height");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    T& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    T at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    /// Replicate-border access.
    T clamped(int x, int y) const
    {
        x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
        y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
        return at(x, y);
    }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    std::span<T> pixels() { return data_; }
    std::span<const T> pixels() const { return data_; }
    std::span<const T> row(int y) const
    {
        return std::span<const T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
    }

    bool operator==(const Image&) const = default;

private:
    int width_;
    int height_;
    std::vector<T> data_;
};

/// 8-bit intensities, 0 = black .. 255 = white.
using GrayImage = Image<std::uint8_t>;
/// Signed difference-of-Gaussian response.
using DogImage = Image<std::int16_t>;
/// Binary raster, 0 or 1.
using Mask = Image<std::uint8_t>;

struct Point {
    int x = 0;
    int y = 0;
    bool operator==(const Point&) const = default;
};

struct PointF {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned box, half-open: [x, x + w) x [y, y + h).
struct Box {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const { return x + w; }
    int bottom() const { return y + h; }
    long area() const { return static_cast<long>(w) * h; }
    bool operator==(const Box&) const = default;
};

double iou(const Box& a, const Box& b);
bool box_contains(const Box& outer, const Box& inner);

/// Round-half-up quantization into [0, 255]; the single rounding rule used
/// for every intensity write in the library.
inline std::uint8_t quantize(double v)
{
    double r = v + 0.5;
    if (r < 0.0)
        return 0;
    if (r >= 255.0)
        return 255;
    return static_cast<std::uint8_t>(r);
}

GrayImage crop(const GrayImage& img, const Box& box);

} // namespace agpv
