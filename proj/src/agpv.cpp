#include "agpv/agpv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agpv/scalespace.hpp"

namespace agpv {

PointF center_of_gravity(std::span<const Point> pixels)
{
    if (pixels.empty())
        throw std::invalid_argument("center of gravity of an empty pixel set");
    double sx = 0.0, sy = 0.0;
    for (const auto& p : pixels) {
        sx += p.x;
        sy += p.y;
    }
    const double n = static_cast<double>(pixels.size());
    return {sx / n, sy / n};
}

double project_pixel(PointF p, PointF cog, double phi)
{
    return (p.x - cog.x) * std::cos(phi) + (p.y - cog.y) * std::sin(phi);
}

ProjectionArrays make_projection_arrays(int patch_width, int patch_height, PointF cog)
{
    ProjectionArrays pa;
    const double diag = std::hypot(static_cast<double>(patch_width), static_cast<double>(patch_height));
    pa.len = static_cast<int>(std::ceil(diag)) + 1;
    // Any pixel lies within one diagonal of the COG, on either side.
    pa.origin_index = pa.len;
    pa.r.assign(static_cast<std::size_t>(2 * pa.len + 1), 0.0);
    pa.t.assign(pa.r.size(), 0.0);
    pa.cog = cog;
    return pa;
}

void deposit(std::vector<double>& array, double position, double weight)
{
    const double b = std::floor(position);
    const double frac = position - b;
    const auto lo = static_cast<long>(b);
    if (lo < 0 || lo + 1 >= static_cast<long>(array.size()))
        throw std::logic_error("projection index outside accumulation array");
    array[lo] += weight * (1.0 - frac);
    array[lo + 1] += weight * frac;
}

ProjectionArrays accumulate(const GradientField& field, const Axis& axis, PointF cog)
{
    ProjectionArrays pa = make_projection_arrays(field.width, field.height, cog);
    for (const auto& s : field.samples) {
        if (s.mag <= 0.0)
            continue;
        const double pos = pa.origin_index + project_pixel({double(s.x), double(s.y)}, cog, axis.phi);
        deposit(pa.t, pos, s.mag);
        if (axis.accepts(s.theta))
            deposit(pa.r, pos, std::abs(s.mag * std::cos(s.theta - axis.phi)));
    }
    return pa;
}

std::optional<Agpv> normalize_to_agpv(const ProjectionArrays& arrays, const Axis& axis,
                                      const AgpvOptions& opts)
{
    const GaussianKernel g = make_kernel(arrays.len / 128.0);
    const auto r = convolve_1d(arrays.r, g);
    const auto t = convolve_1d(arrays.t, g);

    const double t_max = *std::max_element(t.begin(), t.end());
    if (!(t_max > 0.0))
        return std::nullopt;
    const double th_t = t_max / 32.0;
    int xs = -1, xe = -1;
    for (int i = 0; i < static_cast<int>(t.size()); ++i) {
        if (t[i] >= th_t) {
            if (xs < 0)
                xs = i;
            xe = i;
        }
    }
    if (xe <= xs)
        return std::nullopt;

    double r_max = 0.0;
    for (int i = xs; i <= xe; ++i)
        r_max = std::max(r_max, r[i]);
    const double th_bin = r_max / opts.th_bin_div;

    Agpv out;
    out.axis = axis;
    out.x_start = xs;
    out.x_end = xe;
    for (int i = 1; i <= kAgpvLength; ++i) {
        const double pos = (static_cast<double>(i) / kAgpvLength) * (xe - xs) + xs;
        const int idx = std::min(static_cast<int>(std::floor(pos + 0.5)), xe);
        const double v = r[idx];
        out.values[i - 1] = (r_max > 0.0 && v >= th_bin) ? 255 : 0;
    }
    return out;
}

CandidateField prepare_candidate(const CharCandidate& candidate)
{
    CandidateField cf;
    cf.field = compute_gradients(candidate.patch, candidate.mask);
    std::vector<Point> local;
    local.reserve(candidate.pixels.size());
    for (const auto& p : candidate.pixels)
        local.push_back({p.x - candidate.patch_box.x, p.y - candidate.patch_box.y});
    cf.cog = center_of_gravity(local);
    return cf;
}

std::optional<Agpv> compute_agpv(const CandidateField& cf, const Axis& axis, const AgpvOptions& opts)
{
    return normalize_to_agpv(accumulate(cf.field, axis, cf.cog), axis, opts);
}

std::optional<Agpv> compute_agpv(const CharCandidate& candidate, const Axis& axis,
                                 const AgpvOptions& opts)
{
    return compute_agpv(prepare_candidate(candidate), axis, opts);
}

} // namespace agpv
