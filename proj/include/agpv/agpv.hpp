#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "agpv/axes.hpp"
#include "agpv/extraction.hpp"

namespace agpv {

constexpr int kAgpvLength = 32;

using AgpvValues = std::array<std::uint8_t, kAgpvLength>;

/// R (projected) and T (total) gradient accumulations along one axis.
struct ProjectionArrays {
    std::vector<double> r;
    std::vector<double> t;
    int len = 0;            // ceil(patch diagonal) + 1; sets the smoothing scale
    int origin_index = 0;   // array index of projected coordinate 0 (the COG)
    PointF cog;
};

struct Agpv {
    Axis axis;
    AgpvValues values{};
    int x_start = 0;   // effective range in the projection arrays, inclusive
    int x_end = 0;
};

struct AgpvOptions {
    double th_bin_div = 16.0;   // binarization threshold = max(smoothed R in range) / th_bin_div
};

PointF center_of_gravity(std::span<const Point> pixels);

/// Signed coordinate of p's orthogonal projection onto the line through cog
/// with direction phi.
double project_pixel(PointF p, PointF cog, double phi);

ProjectionArrays make_projection_arrays(int patch_width, int patch_height, PointF cog);

/// Splits weight between the two integer slots around `position`.
void deposit(std::vector<double>& array, double position, double weight);

ProjectionArrays accumulate(const GradientField& field, const Axis& axis, PointF cog);

/// Smooths R and T, finds the effective range on T, binarizes R and
/// resamples it to 32 entries. Returns nullopt when the effective range is
/// degenerate (the axis carries no usable feature).
std::optional<Agpv> normalize_to_agpv(const ProjectionArrays& arrays, const Axis& axis,
                                      const AgpvOptions& opts = {});

/// Gradients, COG and everything needed to compute AGPVs on any axis.
struct CandidateField {
    GradientField field;
    PointF cog;
};

CandidateField prepare_candidate(const CharCandidate& candidate);

std::optional<Agpv> compute_agpv(const CandidateField& cf, const Axis& axis,
                                 const AgpvOptions& opts = {});
std::optional<Agpv> compute_agpv(const CharCandidate& candidate, const Axis& axis,
                                 const AgpvOptions& opts = {});

} // namespace agpv
