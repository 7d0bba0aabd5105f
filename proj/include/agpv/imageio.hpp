#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "agpv/image.hpp"

namespace agpv {

class PgmError : public std::runtime_error {
public:
    enum class Kind { BadMagic, MalformedHeader, UnsupportedDepth, Truncated };

    PgmError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Parses a binary PGM (P5, maxval 255). '#' comments are allowed anywhere
/// whitespace is allowed in the header. Trailing bytes after the payload are
/// ignored.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);

/// Canonical "P5\n<w> <h>\n255\n" header followed by raw rows.
std::vector<std::uint8_t> save_pgm(const GrayImage& img);

GrayImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const std::filesystem::path& path, const GrayImage& img);

/// Replaces exactly round(rate * w * h) distinct pixels with 0 or 255.
GrayImage add_salt_pepper(const GrayImage& img, double rate, std::uint64_t seed);

/// 2x2 real matrix, row-major: [[a, b], [c, d]].
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    double det() const { return a * d - b * c; }
    PointF apply(PointF p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
    Mat2 inverse() const;
    static Mat2 rotation(double radians);
    static Mat2 scale(double s) { return {s, 0.0, 0.0, s}; }
};

struct AffineResult {
    GrayImage image;
    /// Output-canvas position of the source origin; a source point p lands at
    /// m * p - offset.
    PointF offset;
};

/// Resamples img under x_out = m * x_src (pixel-edge coordinates) with
/// bilinear interpolation. The canvas covers the transformed source extent.
AffineResult affine_transform_ex(const GrayImage& img, const Mat2& m, std::uint8_t fill);
GrayImage affine_transform(const GrayImage& img, const Mat2& m, std::uint8_t fill);

/// Maps a source-space box through the same transform, returning the
/// bounding box on the output canvas.
Box transform_box(const Box& box, const Mat2& m, PointF offset);

GrayImage scale_illumination(const GrayImage& img, double k);

enum class LightSource { L1, L2, L3, L4 };

/// Multiplicative illumination factor at (x, y) on a width x height image.
double light_factor(LightSource source, int x, int y, int width, int height);
GrayImage directional_illumination(const GrayImage& img, LightSource source);

} // namespace agpv
