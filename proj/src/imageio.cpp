#include "agpv/imageio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <random>

namespace agpv {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and comments, then reads one decimal token.
    long next_number(const char* field)
    {
        skip_space_and_comments();
        if (pos_ >= bytes_.size())
            throw PgmError(PgmError::Kind::MalformedHeader,
                           std::string("PGM header ends before ") + field);
        if (!std::isdigit(bytes_[pos_]))
            throw PgmError(PgmError::Kind::MalformedHeader,
                           std::string("PGM header: expected number for ") + field);
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > std::numeric_limits<int>::max())
                throw PgmError(PgmError::Kind::MalformedHeader,
                               std::string("PGM header: ") + field + " out of range");
            ++pos_;
        }
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void single_space()
    {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
            throw PgmError(PgmError::Kind::MalformedHeader,
                           "PGM header: missing whitespace after maxval");
        ++pos_;
    }

    std::size_t position() const { return pos_; }

private:
    void skip_space_and_comments()
    {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r')
                    ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
};

// Unbiased draw in [0, bound) from a 64-bit engine. Written out rather than
// using std::uniform_int_distribution so that outputs do not depend on the
// standard library implementation.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
        - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

} // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw PgmError(PgmError::Kind::BadMagic, "not a binary PGM (expected magic P5)");

    HeaderReader reader(bytes);
    const long width = reader.next_number("width");
    const long height = reader.next_number("height");
    const long maxval = reader.next_number("maxval");
    if (width < 1 || height < 1)
        throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: zero image dimension");
    if (maxval != 255)
        throw PgmError(PgmError::Kind::UnsupportedDepth,
                       "unsupported PGM depth: maxval " + std::to_string(maxval) + " (need 255)");
    reader.single_space();

    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t start = reader.position();
    if (bytes.size() - start < need)
        throw PgmError(PgmError::Kind::Truncated,
                       "truncated PGM payload: expected " + std::to_string(need) + " bytes, got "
                           + std::to_string(bytes.size() - start));
    std::vector<std::uint8_t> data(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(start + need));
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

std::vector<std::uint8_t> save_pgm(const GrayImage& img)
{
    const std::string header = "P5\n" + std::to_string(img.width()) + " "
        + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

GrayImage read_pgm_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return load_pgm(bytes);
}

void write_pgm_file(const std::filesystem::path& path, const GrayImage& img)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::ios_base::failure("cannot write " + path.string());
    const auto bytes = save_pgm(img);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::ios_base::failure("write failed for " + path.string());
}

GrayImage add_salt_pepper(const GrayImage& img, double rate, std::uint64_t seed)
{
    if (!(rate >= 0.0 && rate <= 1.0))
        throw std::invalid_argument("salt/pepper rate must lie in [0, 1]");
    const std::size_t n = img.size();
    const auto count = static_cast<std::size_t>(std::floor(rate * static_cast<double>(n) + 0.5));

    GrayImage out = img;
    if (count == 0)
        return out;

    // Partial Fisher-Yates: the first `count` slots end up a uniform sample
    // without repetition.
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> index(n);
    std::iota(index.begin(), index.end(), 0u);
    auto px = out.pixels();
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(draw_below(rng, n - i));
        std::swap(index[i], index[j]);
        px[index[i]] = (rng() & 1u) ? 255 : 0;
    }
    return out;
}

Mat2 Mat2::inverse() const
{
    const double det = this->det();
    if (std::abs(det) <= 1e-9)
        throw std::invalid_argument("singular affine matrix");
    return {d / det, -b / det, -c / det, a / det};
}

Mat2 Mat2::rotation(double radians)
{
    const double c = std::cos(radians);
    const double s = std::sin(radians);
    return {c, -s, s, c};
}

AffineResult affine_transform_ex(const GrayImage& img, const Mat2& m, std::uint8_t fill)
{
    const Mat2 inv = m.inverse();

    const double w = img.width();
    const double h = img.height();
    const PointF corners[4] = {m.apply({0, 0}), m.apply({w, 0}), m.apply({0, h}), m.apply({w, h})};
    double min_x = corners[0].x, max_x = corners[0].x;
    double min_y = corners[0].y, max_y = corners[0].y;
    for (const auto& c : corners) {
        min_x = std::min(min_x, c.x);
        max_x = std::max(max_x, c.x);
        min_y = std::min(min_y, c.y);
        max_y = std::max(max_y, c.y);
    }
    constexpr double eps = 1e-9;
    const double ox = std::floor(min_x + eps);
    const double oy = std::floor(min_y + eps);
    const int out_w = std::max(1, static_cast<int>(std::ceil(max_x - eps) - ox));
    const int out_h = std::max(1, static_cast<int>(std::ceil(max_y - eps) - oy));

    GrayImage out(out_w, out_h, fill);
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            // Pixel centres live at half-integer edge coordinates.
            const PointF src = inv.apply({x + 0.5 + ox, y + 0.5 + oy});
            if (src.x < -eps || src.y < -eps || src.x > w + eps || src.y > h + eps)
                continue;
            const double gx = std::clamp(src.x - 0.5, 0.0, w - 1.0);
            const double gy = std::clamp(src.y - 0.5, 0.0, h - 1.0);
            const int x0 = static_cast<int>(std::floor(gx));
            const int y0 = static_cast<int>(std::floor(gy));
            const double fx = gx - x0;
            const double fy = gy - y0;
            const double top = (1 - fx) * img.clamped(x0, y0) + fx * img.clamped(x0 + 1, y0);
            const double bot = (1 - fx) * img.clamped(x0, y0 + 1) + fx * img.clamped(x0 + 1, y0 + 1);
            out.at(x, y) = quantize((1 - fy) * top + fy * bot);
        }
    }
    return {std::move(out), {ox, oy}};
}

GrayImage affine_transform(const GrayImage& img, const Mat2& m, std::uint8_t fill)
{
    return affine_transform_ex(img, m, fill).image;
}

Box transform_box(const Box& box, const Mat2& m, PointF offset)
{
    const double x0 = box.x, y0 = box.y, x1 = box.right(), y1 = box.bottom();
    const PointF c[4] = {m.apply({x0, y0}), m.apply({x1, y0}), m.apply({x0, y1}), m.apply({x1, y1})};
    double min_x = c[0].x, max_x = c[0].x, min_y = c[0].y, max_y = c[0].y;
    for (const auto& p : c) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const int bx = static_cast<int>(std::floor(min_x - offset.x));
    const int by = static_cast<int>(std::floor(min_y - offset.y));
    const int bx1 = static_cast<int>(std::ceil(max_x - offset.x));
    const int by1 = static_cast<int>(std::ceil(max_y - offset.y));
    return {bx, by, bx1 - bx, by1 - by};
}

GrayImage scale_illumination(const GrayImage& img, double k)
{
    if (!(k > 0.0))
        throw std::invalid_argument("illumination factor must be positive");
    GrayImage out = img;
    for (auto& p : out.pixels())
        p = quantize(k * p);
    return out;
}

double light_factor(LightSource source, int x, int y, int width, int height)
{
    const double W = width;
    const double L = height;
    const double denom = L + W + 10.0;
    switch (source) {
    case LightSource::L1: return (x + y + 10.0) / denom;
    case LightSource::L2: return ((W - x) + y + 10.0) / denom;
    case LightSource::L3: return (x + (L - y) + 10.0) / denom;
    case LightSource::L4: return ((W - x) + (L - y) + 10.0) / denom;
    }
    throw std::invalid_argument("unknown light source");
}

GrayImage directional_illumination(const GrayImage& img, LightSource source)
{
    GrayImage out = img;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.at(x, y) = quantize(img.at(x, y) * light_factor(source, x, y, img.width(), img.height()));
    return out;
}

} // namespace agpv
