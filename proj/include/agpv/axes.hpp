#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <vector>

#include "agpv/image.hpp"

namespace agpv {

constexpr int kHistBins = 64;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBinWidth = kTwoPi / kHistBins;          // 5.625 degrees
constexpr double kPeakHalfWidth = std::numbers::pi / 8.0;  // 22.5 degrees
constexpr double kAngleTolerance = std::numbers::pi / 32.0;
constexpr double kAngleEps = 1e-9;

/// Wraps into [0, 2pi).
double wrap_angle(double a);
/// Wraps a difference into (-pi, pi].
double wrap_diff(double d);
/// Absolute circular distance in [0, pi].
double angle_distance(double a, double b);

struct GradientSample {
    int x = 0;         // patch coordinates
    int y = 0;
    double gx = 0.0;
    double gy = 0.0;
    double mag = 0.0;
    double theta = 0.0; // [0, 2pi)
};

struct GradientField {
    int width = 0;     // patch dimensions
    int height = 0;
    std::vector<GradientSample> samples;
};

/// Sobel-style 3x3 operator at every masked pixel whose neighbourhood lies
/// inside the patch. x grows rightward, y downward; theta is measured from
/// +x toward +y.
GradientField compute_gradients(const GrayImage& patch, const Mask& mask);

struct OrientationHistogram {
    std::array<double, kHistBins> bins{};
    double ge = 0.0;   // total gradient energy

    double at(int bin) const { return bins[((bin % kHistBins) + kHistBins) % kHistBins]; }
    static double bin_angle(int bin) { return wrap_angle(bin * kBinWidth); }
};

/// Accumulates one weighted orientation into the two nearest bin centres.
void add_to_histogram(OrientationHistogram& hist, double theta, double weight);
OrientationHistogram build_histogram(const GradientField& field);

struct Peak {
    int center = 0;   // bin index
    int start = 0;    // bin offset from center, in (-4, 0]: start bin = center + start
    int end = 0;      // in [0, 4)
    double energy = 0.0;
    double outstanding = 0.0;

    int start_bin() const { return ((center + start) % kHistBins + kHistBins) % kHistBins; }
    int end_bin() const { return (center + end) % kHistBins; }
};

std::vector<Peak> find_peaks(const OrientationHistogram& hist);

enum class AxisKind { Nature, Augmented };
enum class AxisMode { Standard, Test };

struct Axis {
    AxisKind kind = AxisKind::Nature;
    double phi = 0.0;
    // Acceptance interval for gradient orientations. Nature axes use the open
    // interval (lo, hi) spanned by their peak; augmented axes the closed
    // interval phi +- 22.5 degrees. Both stored as offsets from phi.
    double lo = -kPeakHalfWidth;
    double hi = kPeakHalfWidth;
    std::optional<Peak> peak;

    bool accepts(double theta) const;

    static Axis augmented(double phi);
    static Axis nature(const Peak& peak);
};

/// Keeps peaks whose outstanding energy exceeds ge/32 (standard) or ge/64 (test).
std::vector<Axis> select_nature_axes(const std::vector<Peak>& peaks, double ge, AxisMode mode);

/// Fixed directions {0, pi/2, pi, 3pi/2}, minus those already within pi/32 of
/// a nature axis.
std::vector<Axis> augmented_axes(const std::vector<Axis>& nature);

} // namespace agpv
