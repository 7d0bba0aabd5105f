#include "agpv/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "agpv/glyphs.hpp"
#include "agpv/imageio.hpp"

namespace agpv {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi)
    {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    int range(int lo, int hi) // inclusive
    {
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

struct Backdrop {
    GrayImage image;
    Box plate;
};

void fill_rect(GrayImage& img, const Box& b, std::uint8_t v)
{
    for (int y = std::max(0, b.y); y < std::min(img.height(), b.bottom()); ++y)
        for (int x = std::max(0, b.x); x < std::min(img.width(), b.right()); ++x)
            img.at(x, y) = v;
}

void fill_ellipse(GrayImage& img, PointF c, double rx, double ry, std::uint8_t v)
{
    for (int y = std::max(0, int(c.y - ry)); y <= std::min(img.height() - 1, int(c.y + ry)); ++y)
        for (int x = std::max(0, int(c.x - rx)); x <= std::min(img.width() - 1, int(c.x + rx)); ++x) {
            const double dx = (x - c.x) / rx, dy = (y - c.y) / ry;
            if (dx * dx + dy * dy <= 1.0)
                img.at(x, y) = v;
        }
}

bool overlaps(const Box& a, const Box& b, int margin)
{
    return a.x - margin < b.right() && b.x - margin < a.right() && a.y - margin < b.bottom()
        && b.y - margin < a.bottom();
}

// Ink coverage of a corpus glyph: 0 on background, 1 on full ink.
std::vector<double> glyph_alpha(const GrayImage& g)
{
    const auto px = g.pixels();
    const auto [lo_it, hi_it] = std::minmax_element(px.begin(), px.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<double> alpha(px.size(), 0.0);
    if (hi - lo < 1.0)
        return alpha;
    for (std::size_t i = 0; i < px.size(); ++i)
        alpha[i] = std::clamp((hi - px[i]) / (hi - lo), 0.0, 1.0);
    return alpha;
}

Box dark_box(const GrayImage& g)
{
    const auto alpha = glyph_alpha(g);
    int x0 = g.width(), y0 = g.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x)
            if (alpha[static_cast<std::size_t>(y) * g.width() + x] > 0.02) {
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
    if (x1 < 0)
        return {0, 0, 0, 0};
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

} // namespace

const GrayImage* GlyphCorpus::find(const std::string& label) const
{
    for (const auto& [l, img] : glyphs)
        if (l == label)
            return &img;
    return nullptr;
}

GlyphCorpus synthetic_corpus()
{
    GlyphCorpus c;
    for (const auto& label : standard_labels())
        c.glyphs.emplace_back(label, render_corpus_glyph(label[0]));
    return c;
}

GlyphCorpus load_corpus(const std::filesystem::path& dir)
{
    GlyphCorpus c;
    for (const auto& label : standard_labels()) {
        const auto path = dir / (label + ".pgm");
        if (!std::filesystem::exists(path))
            throw std::invalid_argument("corpus is missing glyph " + label + " (" + path.string() + ")");
        c.glyphs.emplace_back(label, read_pgm_file(path));
    }
    return c;
}

void save_corpus(const GlyphCorpus& corpus, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    for (const auto& [label, img] : corpus.glyphs)
        write_pgm_file(dir / (label + ".pgm"), img);
}

Polarity ink_polarity(bool dark_ink)
{
    return dark_ink ? Polarity::Negative : Polarity::Positive;
}

std::optional<CharCandidate> standard_candidate(const GrayImage& glyph, const ExtractOptions& opts)
{
    // Border pixels are background.
    std::vector<std::uint8_t> border;
    for (int x = 0; x < glyph.width(); ++x) {
        border.push_back(glyph.at(x, 0));
        border.push_back(glyph.at(x, glyph.height() - 1));
    }
    for (int y = 0; y < glyph.height(); ++y) {
        border.push_back(glyph.at(0, y));
        border.push_back(glyph.at(glyph.width() - 1, y));
    }
    std::nth_element(border.begin(), border.begin() + border.size() / 2, border.end());
    const int background = border[border.size() / 2];
    const auto [lo, hi] = std::minmax_element(glyph.pixels().begin(), glyph.pixels().end());
    const bool dark_ink = background - *lo >= *hi - background;
    const Polarity want = ink_polarity(dark_ink);

    GrayImage normalized = glyph;
    if (!dark_ink)
        for (auto& p : normalized.pixels())
            p = static_cast<std::uint8_t>(255 - p);
    const Box ink = dark_box(normalized);

    auto cands = extract_candidates(glyph, opts);
    std::optional<CharCandidate> best;
    double best_iou = 0.0;
    for (auto& c : cands) {
        if (c.polarity != want)
            continue;
        const double v = iou(c.source_bbox, ink);
        if (v > best_iou + 1e-12
            || (best && std::abs(v - best_iou) <= 1e-12 && c.pixels.size() > best->pixels.size())) {
            best_iou = v;
            best = std::move(c);
        }
    }
    if (best_iou < 0.5)
        return std::nullopt;
    return best;
}

StandardDb build_db_from_corpus(const GlyphCorpus& corpus, const ExtractOptions& eopts,
                                const AgpvOptions& aopts)
{
    std::vector<std::pair<std::string, CharCandidate>> samples;
    for (const auto& [label, img] : corpus.glyphs) {
        auto cand = standard_candidate(img, eopts);
        if (!cand)
            throw std::invalid_argument("no usable candidate extracted for glyph " + label);
        samples.emplace_back(label, std::move(*cand));
    }
    return build_db(samples, aopts);
}

const char* to_string(SetId id)
{
    switch (id) {
    case SetId::A: return "A";
    case SetId::B: return "B";
    case SetId::C: return "C";
    case SetId::D: return "D";
    }
    return "?";
}

std::vector<BenchScene> make_scenes(const GlyphCorpus& corpus, std::uint64_t seed, const SceneOptions& opts)
{
    for (const auto& label : standard_labels())
        if (!corpus.find(label))
            throw std::invalid_argument("corpus is missing glyph " + label);

    Rng rng(seed);
    std::vector<BenchScene> scenes;
    for (int n = 0; n < opts.count; ++n) {
        BenchScene scene;
        scene.set = SetId::A;
        GrayImage img(opts.width, opts.height);

        // Background: mild planar gradient.
        const double base = rng.uniform(70, 110);
        const double gx = rng.uniform(-30, 30) / opts.width;
        const double gy = rng.uniform(-20, 20) / opts.height;
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x)
                img.at(x, y) = quantize(base + gx * (x - opts.width / 2.0) + gy * (y - opts.height / 2.0));

        // Plate geometry.
        const int glyph_count = rng.range(4, 6);
        const bool large = rng.uniform(0, 1) < 0.35;
        const double scale = large ? rng.uniform(1.8, 2.1) : rng.uniform(0.95, 1.1);
        const int cell = static_cast<int>(std::ceil(kCorpusSize * scale * 0.72));
        const int gap = static_cast<int>(10 * scale);
        const int margin = static_cast<int>(14 * scale);
        const int plate_w = glyph_count * cell + (glyph_count - 1) * gap + 2 * margin;
        const int plate_h = static_cast<int>(kCorpusSize * scale * 0.82) + 2 * margin;
        // Plates sit near the middle of the frame, as in typical captures.
        const auto place = [&](int extent, int size) {
            const int lo = std::max(8, (extent - size) / 2 - extent / 4);
            const int hi = std::max(lo, std::min(extent - size - 8, (extent - size) / 2 + extent / 4));
            return rng.range(lo, hi);
        };
        const int plate_x = place(opts.width, plate_w);
        const int plate_y = place(opts.height, plate_h);
        Box plate{plate_x, plate_y, plate_w, plate_h};

        // Clutter outside the plate: blocks, discs and bars.
        const int clutter = rng.range(4, 8);
        for (int i = 0; i < clutter; ++i) {
            const int kind = rng.range(0, 2);
            const int w = rng.range(20, 140), h = rng.range(20, 140);
            Box b{rng.range(0, opts.width - w), rng.range(0, opts.height - h), w, h};
            if (kind == 2) {
                if (rng.uniform(0, 1) < 0.5)
                    b.h = rng.range(4, 8);
                else
                    b.w = rng.range(4, 8);
            }
            if (overlaps(b, plate, 24))
                continue;
            const auto v = static_cast<std::uint8_t>(rng.range(0, 1) ? rng.range(150, 240) : rng.range(5, 50));
            if (kind == 1)
                fill_ellipse(img, {b.x + b.w / 2.0, b.y + b.h / 2.0}, b.w / 2.0, b.h / 2.0, v);
            else
                fill_rect(img, b, v);
        }

        const auto plate_v = static_cast<std::uint8_t>(rng.range(195, 230));
        const int frame = std::max(3, static_cast<int>(4 * scale));
        fill_rect(img, plate, static_cast<std::uint8_t>(rng.range(25, 50)));
        fill_rect(img, {plate.x + frame, plate.y + frame, plate.w - 2 * frame, plate.h - 2 * frame}, plate_v);

        const double ink = rng.uniform(15, 50);
        std::ostringstream prov;
        prov << "plate " << glyph_count << " glyphs scale " << scale;
        for (int g = 0; g < glyph_count; ++g) {
            const auto& label = standard_labels()[rng.range(0, 35)];
            const GrayImage& src = *corpus.find(label);
            const GrayImage scaled = affine_transform(src, Mat2::scale(scale), src.pixels()[0]);
            const auto alpha = glyph_alpha(scaled);
            const Box ink_box = dark_box(scaled);
            const int cx = plate.x + margin + g * (cell + gap) + cell / 2;
            const int cy = plate.y + plate.h / 2;
            const int ox = cx - (ink_box.x + ink_box.w / 2);
            const int oy = cy - (ink_box.y + ink_box.h / 2);
            for (int y = 0; y < scaled.height(); ++y)
                for (int x = 0; x < scaled.width(); ++x) {
                    const double a = alpha[static_cast<std::size_t>(y) * scaled.width() + x];
                    if (a <= 0.0 || !img.contains(x + ox, y + oy))
                        continue;
                    auto& p = img.at(x + ox, y + oy);
                    p = quantize(p * (1.0 - a) + ink * a);
                }
            scene.truth.push_back({label, {ink_box.x + ox, ink_box.y + oy, ink_box.w, ink_box.h}});
            prov << " " << label;
        }
        scene.image = std::move(img);
        scene.provenance = prov.str();
        scenes.push_back(std::move(scene));
    }
    return scenes;
}

const std::vector<Mat2>& shear_matrices()
{
    static const std::vector<Mat2> m = {
        {1, 0, -1.0 / 6.0, 1},
        {1, 0, -1.0 / 4.0, 1},
        {1, 0, 1.0 / 6.0, 1},
        {1, 0, 1.0 / 4.0, 1},
    };
    return m;
}

DerivedSets derive_sets(const std::vector<BenchScene>& a, std::uint64_t seed)
{
    DerivedSets out;
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const LightSource lights[4] = {LightSource::L1, LightSource::L2, LightSource::L3, LightSource::L4};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const BenchScene& s = a[i];

        BenchScene b = s;
        b.set = SetId::B;
        b.image = add_salt_pepper(s.image, 0.04, rng.next());
        b.provenance += " | salt-pepper 4%";
        out.b.push_back(std::move(b));

        const Mat2& m = shear_matrices()[i % 4];
        auto warped = affine_transform_ex(s.image, m, 128);
        BenchScene c;
        c.set = SetId::C;
        c.image = std::move(warped.image);
        for (const auto& t : s.truth)
            c.truth.push_back({t.label, transform_box(t.box, m, warped.offset)});
        c.provenance = s.provenance + " | shear " + std::to_string(i % 4);
        out.c.push_back(std::move(c));

        BenchScene d = s;
        d.set = SetId::D;
        d.image = directional_illumination(s.image, lights[i % 4]);
        d.provenance += " | light L" + std::to_string(i % 4 + 1);
        out.d.push_back(std::move(d));
    }
    return out;
}

double SetReport::extraction_tpr() const
{
    return truths > 0 ? 100.0 * extracted / truths : 0.0;
}

double SetReport::rec_tpr(Orientation mode) const
{
    const int m = mode == Orientation::Unknown ? 0 : 1;
    return extracted > 0 ? 100.0 * rec_correct[m] / extracted : 0.0;
}

double SetReport::rec_fpr(Orientation mode) const
{
    const int m = mode == Orientation::Unknown ? 0 : 1;
    return candidates > 0 ? 100.0 * rec_false[m] / candidates : 0.0;
}

SceneAnalysis analyze_image(const GrayImage& img, const StandardDb& db, const BenchOptions& opts)
{
    SceneAnalysis a;
    a.candidates = extract_candidates(img, opts.extract);
    for (const auto& c : a.candidates) {
        a.recognized.push_back(c.polarity == opts.ink);
        if (!a.recognized.back()) {
            a.results[0].emplace_back();
            a.results[1].emplace_back();
            continue;
        }
        const TestFeatures tf = make_test_features(c, opts.match.agpv);
        a.results[0].push_back(recognize(tf, db, Orientation::Unknown, opts.match));
        a.results[1].push_back(recognize(tf, db, Orientation::Known, opts.match));
    }
    return a;
}

bool box_extracted(const SceneAnalysis& analysis, const Box& box)
{
    for (const auto& c : analysis.candidates)
        if (iou(c.source_bbox, box) >= 0.5)
            return true;
    return false;
}

std::optional<std::string> label_for_box(const SceneAnalysis& analysis, const Box& box, Orientation mode)
{
    const int m = mode == Orientation::Unknown ? 0 : 1;
    std::optional<std::string> best;
    double best_cmc = 0.0, best_iou = 0.0;
    for (std::size_t i = 0; i < analysis.candidates.size(); ++i) {
        const double v = iou(analysis.candidates[i].source_bbox, box);
        const auto& r = analysis.results[m][i];
        if (v < 0.5 || !r.label)
            continue;
        const bool better = !best || r.cmc < best_cmc
            || (r.cmc == best_cmc && (v > best_iou || (v == best_iou && *r.label < *best)));
        if (better) {
            best = r.label;
            best_cmc = r.cmc;
            best_iou = v;
        }
    }
    return best;
}

SetReport evaluate(const std::vector<BenchScene>& scenes, const StandardDb& db, const BenchOptions& opts)
{
    SetReport rep;
    if (!scenes.empty())
        rep.set = scenes.front().set;
    for (const auto& scene : scenes) {
        ++rep.scenes;
        const SceneAnalysis a = analyze_image(scene.image, db, opts);
        rep.candidates += static_cast<int>(a.candidates.size());
        for (const auto& t : scene.truth) {
            ++rep.truths;
            if (!box_extracted(a, t.box))
                continue;
            ++rep.extracted;
            for (int m = 0; m < 2; ++m) {
                const auto label = label_for_box(a, t.box, m == 0 ? Orientation::Unknown : Orientation::Known);
                if (label && *label == t.label)
                    ++rep.rec_correct[m];
            }
        }
        for (std::size_t i = 0; i < a.candidates.size(); ++i) {
            if (!a.recognized[i])
                continue;
            ++rep.recognized;
            bool touches = false;
            for (const auto& t : scene.truth)
                touches = touches || iou(a.candidates[i].source_bbox, t.box) > 0.0;
            if (touches)
                continue;
            ++rep.non_character;
            for (int m = 0; m < 2; ++m)
                if (a.results[m][i].label)
                    ++rep.rec_false[m];
        }
    }
    return rep;
}

BenchReport run_bench(const GlyphCorpus& corpus, const StandardDb& db, std::uint64_t seed,
                      const BenchOptions& opts, const SceneOptions& scene_opts)
{
    const auto a = make_scenes(corpus, seed, scene_opts);
    const auto derived = derive_sets(a, seed);
    BenchReport report;
    report.sets.push_back(evaluate(a, db, opts));
    report.sets.push_back(evaluate(derived.b, db, opts));
    report.sets.push_back(evaluate(derived.c, db, opts));
    report.sets.push_back(evaluate(derived.d, db, opts));
    return report;
}

std::string format_table(const BenchReport& report)
{
    std::ostringstream out;
    char line[160];
    out << "        Extraction   Recognition 1 (unknown)   Recognition 2 (known)\n";
    out << "Set     TPR          TPR        FPR            TPR        FPR\n";
    for (const auto& s : report.sets) {
        std::snprintf(line, sizeof line, "%-7s %6.1f       %6.1f     %6.1f         %6.1f     %6.1f\n",
                      to_string(s.set), s.extraction_tpr(), s.rec_tpr(Orientation::Unknown),
                      s.rec_fpr(Orientation::Unknown), s.rec_tpr(Orientation::Known),
                      s.rec_fpr(Orientation::Known));
        out << line;
    }
    out << "\n";
    for (const auto& s : report.sets) {
        std::snprintf(line, sizeof line,
                      "set %s: %d scenes, %d glyphs, %d extracted, %d candidates, %d recognized "
                      "(%d non-character), rec1 %d correct/%d false, rec2 %d correct/%d false\n",
                      to_string(s.set), s.scenes, s.truths, s.extracted, s.candidates, s.recognized,
                      s.non_character,
                      s.rec_correct[0], s.rec_false[0], s.rec_correct[1], s.rec_false[1]);
        out << line;
    }
    return out.str();
}

std::string format_csv(const BenchReport& report)
{
    std::ostringstream out;
    out << "set,extraction_tpr,rec1_tpr,rec1_fpr,rec2_tpr,rec2_fpr\n";
    char line[128];
    for (const auto& s : report.sets) {
        std::snprintf(line, sizeof line, "%s,%.1f,%.1f,%.1f,%.1f,%.1f\n", to_string(s.set),
                      s.extraction_tpr(), s.rec_tpr(Orientation::Unknown), s.rec_fpr(Orientation::Unknown),
                      s.rec_tpr(Orientation::Known), s.rec_fpr(Orientation::Known));
        out << line;
    }
    return out.str();
}

} // namespace agpv
