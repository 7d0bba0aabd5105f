#include "agpv/scalespace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "agpv/imageio.hpp"

namespace agpv {

int kernel_width(double sigma)
{
    if (!(sigma > 0.0))
        throw std::invalid_argument("Gaussian sigma must be positive");
    int width = static_cast<int>(std::ceil(7.0 * sigma - 1e-9));
    if (width % 2 == 0)
        ++width;
    return std::max(width, 1);
}

GaussianKernel make_kernel(double sigma)
{
    const int width = kernel_width(sigma);
    const int radius = width / 2;
    GaussianKernel k;
    k.sigma = sigma;
    k.coeffs.resize(width);
    double sum = 0.0;
    for (int i = 0; i < width; ++i) {
        const double t = i - radius;
        k.coeffs[i] = std::exp(-(t * t) / (2.0 * sigma * sigma));
        sum += k.coeffs[i];
    }
    for (auto& c : k.coeffs)
        c /= sum;
    // Exact mirror symmetry regardless of rounding in the division above.
    for (int i = 0; i < radius; ++i)
        k.coeffs[width - 1 - i] = k.coeffs[i];
    return k;
}

GrayImage convolve_gaussian(const GrayImage& img, const GaussianKernel& k)
{
    const int w = img.width();
    const int h = img.height();
    const int r = k.radius();
    const auto& c = k.coeffs;

    std::vector<double> tmp(static_cast<std::size_t>(w) * h);
    std::vector<double> line(static_cast<std::size_t>(w + 2 * r));
    for (int y = 0; y < h; ++y) {
        const auto src = img.row(y);
        for (int i = 0; i < w + 2 * r; ++i)
            line[i] = src[std::clamp(i - r, 0, w - 1)];
        double* dst = tmp.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = 0; t < k.width(); ++t)
                acc += c[t] * line[x + t];
            dst[x] = acc;
        }
    }

    GrayImage out(w, h);
    std::vector<double> acc(w);
    for (int y = 0; y < h; ++y) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int t = 0; t < k.width(); ++t) {
            const int sy = std::clamp(y + t - r, 0, h - 1);
            const double* src = tmp.data() + static_cast<std::size_t>(sy) * w;
            const double ct = c[t];
            for (int x = 0; x < w; ++x)
                acc[x] += ct * src[x];
        }
        for (int x = 0; x < w; ++x)
            out.at(x, y) = quantize(acc[x]);
    }
    return out;
}

std::vector<double> convolve_1d(std::span<const double> signal, const GaussianKernel& k)
{
    const int n = static_cast<int>(signal.size());
    const int r = k.radius();
    std::vector<double> out(signal.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int t = 0; t < k.width(); ++t)
            acc += k.coeffs[t] * signal[std::clamp(i + t - r, 0, n - 1)];
        out[i] = acc;
    }
    return out;
}

GrayImage subsample(const GrayImage& img)
{
    if (img.width() < 2 || img.height() < 2)
        throw std::invalid_argument("image too small to subsample");
    GrayImage out(img.width() / 2, img.height() / 2);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            out.at(x, y) = img.at(2 * x, 2 * y);
    return out;
}

std::vector<Octave> build_pyramid(const GrayImage& img, int octaves)
{
    if (octaves < 1)
        throw std::invalid_argument("octave count must be positive");
    // Every octave's base must be at least kMinOctaveSide on each side.
    const int shrink = 1 << (octaves - 1);
    if (img.width() / shrink < kMinOctaveSide || img.height() / shrink < kMinOctaveSide)
        throw std::invalid_argument("image " + std::to_string(img.width()) + "x"
                                    + std::to_string(img.height()) + " cannot hold "
                                    + std::to_string(octaves) + " octaves");

    const GaussianKernel g = make_kernel(1.0);
    std::vector<Octave> pyramid;
    pyramid.reserve(octaves);
    GrayImage initial = convolve_gaussian(img, g);
    for (int k = 1; k <= octaves; ++k) {
        Octave oct;
        oct.index = k;
        oct.scale_factor = 1 << (k - 1);
        oct.smoothed = convolve_gaussian(initial, g);
        oct.dog = DogImage(initial.width(), initial.height());
        auto dog = oct.dog.pixels();
        const auto a = initial.pixels();
        const auto b = oct.smoothed.pixels();
        for (std::size_t i = 0; i < dog.size(); ++i)
            dog[i] = static_cast<std::int16_t>(static_cast<int>(a[i]) - static_cast<int>(b[i]));
        GrayImage next = k < octaves ? subsample(oct.smoothed) : GrayImage{};
        oct.initial = std::move(initial);
        pyramid.push_back(std::move(oct));
        initial = std::move(next);
    }
    return pyramid;
}

double equivalent_sigma(int octave_index)
{
    if (octave_index < 1)
        throw std::invalid_argument("octave index is 1-based");
    // I1 carries variance 1. Each octave adds variance 1 on its own grid,
    // i.e. 4^(k-1) on the input grid, before handing off to the next one.
    double variance = 1.0;
    for (int k = 1; k < octave_index; ++k)
        variance += std::pow(4.0, k - 1);
    return std::sqrt(variance);
}

void dump_pyramid(const std::vector<Octave>& pyramid, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    for (const auto& oct : pyramid) {
        const std::string stem = "octave" + std::to_string(oct.index);
        write_pgm_file(dir / (stem + "_initial.pgm"), oct.initial);
        write_pgm_file(dir / (stem + "_smoothed.pgm"), oct.smoothed);
        GrayImage dog(oct.dog.width(), oct.dog.height());
        auto out = dog.pixels();
        const auto in = oct.dog.pixels();
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = static_cast<std::uint8_t>(std::clamp(in[i] + 128, 0, 255));
        write_pgm_file(dir / (stem + "_dog.pgm"), dog);
    }
}

} // namespace agpv
