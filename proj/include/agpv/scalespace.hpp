#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "agpv/image.hpp"

namespace agpv {

/// Sampled, unit-sum Gaussian. Width is the smallest odd integer >= 7 sigma.
struct GaussianKernel {
    double sigma = 1.0;
    std::vector<double> coeffs;

    int width() const { return static_cast<int>(coeffs.size()); }
    int radius() const { return width() / 2; }
};

int kernel_width(double sigma);
GaussianKernel make_kernel(double sigma);

/// Separable convolution (rows then columns, replicate borders). The
/// intermediate pass stays in double precision; the result is quantized once.
GrayImage convolve_gaussian(const GrayImage& img, const GaussianKernel& k);

/// 1-D smoothing of a real-valued signal with replicate borders.
std::vector<double> convolve_1d(std::span<const double> signal, const GaussianKernel& k);

/// output(x, y) = input(2x, 2y).
GrayImage subsample(const GrayImage& img);

struct Octave {
    int index = 1;           // 1-based
    GrayImage initial;       // octave's base image, sigma 1 on its own grid
    GrayImage smoothed;      // initial convolved once more with sigma 1
    DogImage dog;            // initial - smoothed
    int scale_factor = 1;    // 2^(index-1): octave coordinates -> input coordinates
};

constexpr int kDefaultOctaves = 4;
constexpr int kMinOctaveSide = 8;

/// Four-octave (by default) difference-of-Gaussian pyramid with
/// sigma_a = sigma_b = 1.
std::vector<Octave> build_pyramid(const GrayImage& img, int octaves = kDefaultOctaves);

/// Smoothing, relative to the input grid, that the pyramid has applied to
/// octave k's initial image: variances compose as 1 + 1 + 4 + 16 + ...
double equivalent_sigma(int octave_index);

/// Writes initial/smoothed/dog (dog offset by +128) PGMs for each octave.
void dump_pyramid(const std::vector<Octave>& pyramid, const std::filesystem::path& dir);

} // namespace agpv
