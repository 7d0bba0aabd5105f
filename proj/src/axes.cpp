#include "agpv/axes.hpp"

#include <cmath>
#include <stdexcept>

namespace agpv {

double wrap_angle(double a)
{
    a = std::fmod(a, kTwoPi);
    if (a < 0.0)
        a += kTwoPi;
    if (a >= kTwoPi)
        a -= kTwoPi;
    return a;
}

double wrap_diff(double d)
{
    d = std::fmod(d, kTwoPi);
    if (d > std::numbers::pi)
        d -= kTwoPi;
    else if (d <= -std::numbers::pi)
        d += kTwoPi;
    return d;
}

double angle_distance(double a, double b)
{
    return std::abs(wrap_diff(a - b));
}

GradientField compute_gradients(const GrayImage& patch, const Mask& mask)
{
    if (patch.width() < 3 || patch.height() < 3)
        throw std::invalid_argument("patch must be at least 3x3 for gradients");
    if (mask.width() != patch.width() || mask.height() != patch.height())
        throw std::invalid_argument("mask and patch dimensions differ");

    GradientField field;
    field.width = patch.width();
    field.height = patch.height();
    for (int y = 1; y + 1 < patch.height(); ++y) {
        for (int x = 1; x + 1 < patch.width(); ++x) {
            if (!mask.at(x, y))
                continue;
            auto g = [&](int dx, int dy) { return static_cast<double>(patch.at(x + dx, y + dy)); };
            GradientSample s;
            s.x = x;
            s.y = y;
            s.gx = g(1, -1) - g(-1, -1) + 2.0 * (g(1, 0) - g(-1, 0)) + g(1, 1) - g(-1, 1);
            s.gy = g(-1, 1) - g(-1, -1) + 2.0 * (g(0, 1) - g(0, -1)) + g(1, 1) - g(1, -1);
            s.mag = std::sqrt(s.gx * s.gx + s.gy * s.gy);
            s.theta = wrap_angle(std::atan2(s.gy, s.gx));
            field.samples.push_back(s);
        }
    }
    return field;
}

void add_to_histogram(OrientationHistogram& hist, double theta, double weight)
{
    const double pos = wrap_angle(theta) / kBinWidth;
    int b0 = static_cast<int>(std::floor(pos));
    const double frac = pos - b0;
    b0 %= kHistBins;
    hist.bins[b0] += weight * (1.0 - frac);
    hist.bins[(b0 + 1) % kHistBins] += weight * frac;
}

OrientationHistogram build_histogram(const GradientField& field)
{
    OrientationHistogram hist;
    for (const auto& s : field.samples) {
        if (s.mag <= 0.0)
            continue;
        add_to_histogram(hist, s.theta, s.mag);
        hist.ge += s.mag;
    }
    return hist;
}

std::vector<Peak> find_peaks(const OrientationHistogram& hist)
{
    // Boundary search covers bins strictly closer than 22.5 degrees.
    const int reach = static_cast<int>(std::ceil(kPeakHalfWidth / kBinWidth - 1e-9)) - 1;
    std::vector<Peak> peaks;
    for (int p = 0; p < kHistBins; ++p) {
        const double hp = hist.at(p);
        if (!(hp > hist.at(p - 1) && hp > hist.at(p + 1)))
            continue;
        Peak pk;
        pk.center = p;
        // Minimum on each side; ties go to the bin nearest the centre.
        int best = -1;
        for (int d = 1; d <= reach; ++d)
            if (hist.at(p - d) < hist.at(p + best))
                best = -d;
        pk.start = best;
        best = 1;
        for (int d = 1; d <= reach; ++d)
            if (hist.at(p + d) < hist.at(p + best))
                best = d;
        pk.end = best;

        for (int d = pk.start; d <= pk.end; ++d)
            pk.energy += hist.at(p + d);
        const double span = pk.end - pk.start;
        pk.outstanding = pk.energy - (hist.at(p + pk.start) + hist.at(p + pk.end)) * span / 2.0;
        peaks.push_back(pk);
    }
    return peaks;
}

bool Axis::accepts(double theta) const
{
    const double d = wrap_diff(theta - phi);
    if (kind == AxisKind::Nature)
        return d > lo + kAngleEps && d < hi - kAngleEps;
    return d >= lo - kAngleEps && d <= hi + kAngleEps;
}

Axis Axis::augmented(double phi)
{
    Axis a;
    a.kind = AxisKind::Augmented;
    a.phi = wrap_angle(phi);
    a.lo = -kPeakHalfWidth;
    a.hi = kPeakHalfWidth;
    return a;
}

Axis Axis::nature(const Peak& peak)
{
    Axis a;
    a.kind = AxisKind::Nature;
    a.phi = OrientationHistogram::bin_angle(peak.center);
    a.lo = peak.start * kBinWidth;
    a.hi = peak.end * kBinWidth;
    a.peak = peak;
    return a;
}

std::vector<Axis> select_nature_axes(const std::vector<Peak>& peaks, double ge, AxisMode mode)
{
    const double threshold = ge / (mode == AxisMode::Standard ? 32.0 : 64.0);
    std::vector<Axis> axes;
    for (const auto& p : peaks)
        if (p.outstanding > threshold)
            axes.push_back(Axis::nature(p));
    return axes;
}

std::vector<Axis> augmented_axes(const std::vector<Axis>& nature)
{
    std::vector<Axis> out;
    for (int q = 0; q < 4; ++q) {
        const double phi = q * (std::numbers::pi / 2.0);
        bool present = false;
        for (const auto& n : nature)
            if (angle_distance(n.phi, phi) <= kAngleTolerance + kAngleEps)
                present = true;
        if (!present)
            out.push_back(Axis::augmented(phi));
    }
    return out;
}

} // namespace agpv
