#pragma once

#include <vector>

#include "agpv/image.hpp"
#include "agpv/scalespace.hpp"

namespace agpv {

enum class Polarity { Positive, Negative };

const char* to_string(Polarity p);

struct ExtractOptions {
    int t_dog = 2;                   // strict magnitude threshold on DOG responses
    int octaves = kDefaultOctaves;
    int min_size = 32;               // bbox side range, octave coordinates
    int max_size = 64;
};

/// A connected group of same-sign DOG pixels, with the octave's initial
/// image cropped around it.
struct CharCandidate {
    int octave = 1;
    Polarity polarity = Polarity::Positive;
    std::vector<Point> pixels;       // octave coordinates
    Box bbox;                        // octave coordinates
    Box source_bbox;                 // bbox * scale_factor, input coordinates
    Box patch_box;                   // bbox plus 1-pixel margin, clipped to the octave
    GrayImage patch;                 // initial image over patch_box
    Mask mask;                       // membership, aligned to patch
};

Mask threshold_dog(const DogImage& dog, Polarity polarity, int t_dog = 2);

/// Maximal 8-connected components, ordered by their lexicographically
/// smallest (y, x) pixel. Pixels inside each component are in raster order.
std::vector<std::vector<Point>> connected_components(const Mask& mask);

std::vector<CharCandidate> filter_by_size(const std::vector<std::vector<Point>>& components,
                                          const Octave& octave, Polarity polarity,
                                          const ExtractOptions& opts = {});

std::vector<CharCandidate> extract_from_pyramid(const std::vector<Octave>& pyramid,
                                                const ExtractOptions& opts = {});

std::vector<CharCandidate> extract_candidates(const GrayImage& img, const ExtractOptions& opts = {});

} // namespace agpv
