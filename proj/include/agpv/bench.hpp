#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agpv/extraction.hpp"
#include "agpv/imageio.hpp"
#include "agpv/image.hpp"
#include "agpv/matching.hpp"

namespace agpv {

/// Labelled glyph images, one per label, in standard_labels() order.
struct GlyphCorpus {
    std::vector<std::pair<std::string, GrayImage>> glyphs;

    const GrayImage* find(const std::string& label) const;
};

/// The built-in stroke font rendered at kCorpusSize.
GlyphCorpus synthetic_corpus();
/// Reads <label>.pgm for every standard label; throws std::invalid_argument
/// naming the first missing label.
GlyphCorpus load_corpus(const std::filesystem::path& dir);
void save_corpus(const GlyphCorpus& corpus, const std::filesystem::path& dir);

/// Polarity of the DOG band lying on the ink of a glyph whose ink is darker
/// (or lighter) than its background.
Polarity ink_polarity(bool dark_ink);

/// Picks the ink-side candidate that best covers the glyph: highest IoU with
/// the ink bounding box, ties to the larger component. Ink is taken to be
/// whichever extreme differs from the image border.
std::optional<CharCandidate> standard_candidate(const GrayImage& glyph, const ExtractOptions& opts = {});

StandardDb build_db_from_corpus(const GlyphCorpus& corpus, const ExtractOptions& eopts = {},
                                const AgpvOptions& aopts = {});

enum class SetId { A, B, C, D };
const char* to_string(SetId id);

struct TruthGlyph {
    std::string label;
    Box box;
};

struct BenchScene {
    GrayImage image;
    std::vector<TruthGlyph> truth;
    SetId set = SetId::A;
    std::string provenance;
};

struct SceneOptions {
    int count = 60;
    int width = 1024;
    int height = 768;
};

std::vector<BenchScene> make_scenes(const GlyphCorpus& corpus, std::uint64_t seed,
                                    const SceneOptions& opts = {});

struct DerivedSets {
    std::vector<BenchScene> b, c, d;
};

/// The four shear matrices used for the deformation set, in round-robin order.
const std::vector<Mat2>& shear_matrices();

DerivedSets derive_sets(const std::vector<BenchScene>& a, std::uint64_t seed);

struct SetReport {
    SetId set = SetId::A;
    int scenes = 0;
    int truths = 0;
    int extracted = 0;
    int candidates = 0;             // all extracted candidates
    int recognized = 0;             // candidates of the ink polarity
    int non_character = 0;          // recognized candidates touching no truth box
    int rec_correct[2] = {0, 0};    // [unknown orientation, known orientation]
    int rec_false[2] = {0, 0};      // non-character candidates given a label

    double extraction_tpr() const;
    double rec_tpr(Orientation mode) const;
    double rec_fpr(Orientation mode) const;
};

struct BenchReport {
    std::vector<SetReport> sets;
};

struct BenchOptions {
    ExtractOptions extract;
    MatchOptions match;
    // Only candidates of this polarity are recognized; plates carry dark
    // characters on a light ground.
    Polarity ink = Polarity::Negative;
};

/// Outcome of recognizing every candidate of one image.
struct SceneAnalysis {
    std::vector<CharCandidate> candidates;
    std::vector<bool> recognized;          // candidate has the ink polarity
    std::vector<MatchResult> results[2];   // indexed like SetReport::rec_correct
};

SceneAnalysis analyze_image(const GrayImage& img, const StandardDb& db, const BenchOptions& opts);

/// The label assigned to a ground-truth box: among candidates with
/// IoU >= 0.5 that received a label, the one with the lowest cost.
std::optional<std::string> label_for_box(const SceneAnalysis& analysis, const Box& box, Orientation mode);
bool box_extracted(const SceneAnalysis& analysis, const Box& box);

SetReport evaluate(const std::vector<BenchScene>& scenes, const StandardDb& db,
                   const BenchOptions& opts = {});

BenchReport run_bench(const GlyphCorpus& corpus, const StandardDb& db, std::uint64_t seed,
                      const BenchOptions& opts = {}, const SceneOptions& scene_opts = {});

std::string format_table(const BenchReport& report);
std::string format_csv(const BenchReport& report);

} // namespace agpv
