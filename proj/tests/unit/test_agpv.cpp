#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "agpv/agpv.hpp"
#include "agpv/bench.hpp"
#include "agpv/glyphs.hpp"
#include "agpv/matching.hpp"
#include "oracles.hpp"

using namespace agpv;

namespace {

constexpr double pi = std::numbers::pi;

GradientSample sample_at(int x, int y, double theta, double mag)
{
    GradientSample s;
    s.x = x;
    s.y = y;
    s.theta = wrap_angle(theta);
    s.mag = mag;
    s.gx = mag * std::cos(theta);
    s.gy = mag * std::sin(theta);
    return s;
}

// Candidate covering a whole patch: every interior pixel is a member.
CharCandidate whole_patch(const GrayImage& patch)
{
    CharCandidate c;
    c.patch = patch;
    c.patch_box = {0, 0, patch.width(), patch.height()};
    c.bbox = {1, 1, patch.width() - 2, patch.height() - 2};
    c.mask = Mask(patch.width(), patch.height());
    for (int y = 1; y + 1 < patch.height(); ++y)
        for (int x = 1; x + 1 < patch.width(); ++x) {
            c.mask.at(x, y) = 1;
            c.pixels.push_back({x, y});
        }
    return c;
}

// Quarter turn clockwise on screen (y down): (x, y) -> (h - 1 - y, x).
CharCandidate rotate90(const CharCandidate& c)
{
    const int w = c.patch.width(), h = c.patch.height();
    CharCandidate r = c;
    r.patch = GrayImage(h, w);
    r.mask = Mask(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            r.patch.at(h - 1 - y, x) = c.patch.at(x, y);
            r.mask.at(h - 1 - y, x) = c.mask.at(x, y);
        }
    r.patch_box = {0, 0, h, w};
    r.pixels.clear();
    for (const auto& p : c.pixels) {
        const int lx = p.x - c.patch_box.x, ly = p.y - c.patch_box.y;
        r.pixels.push_back({h - 1 - ly, lx});
    }
    return r;
}

int equal_entries(const AgpvValues& a, const AgpvValues& b)
{
    int n = 0;
    for (int i = 0; i < kAgpvLength; ++i)
        n += a[static_cast<std::size_t>(i)] == b[static_cast<std::size_t>(i)];
    return n;
}

bool near_value(const AgpvValues& v, int i, std::uint8_t want)
{
    for (int j = std::max(0, i - 1); j <= std::min(kAgpvLength - 1, i + 1); ++j)
        if (v[static_cast<std::size_t>(j)] == want)
            return true;
    return false;
}

// Entries that agree once run boundaries may move by one resample cell: each
// side's value at i occurs in the other vector within one position of i.
int equal_within_one_cell(const AgpvValues& a, const AgpvValues& b)
{
    int n = 0;
    for (int i = 0; i < kAgpvLength; ++i)
        n += near_value(b, i, a[static_cast<std::size_t>(i)]) && near_value(a, i, b[static_cast<std::size_t>(i)]);
    return n;
}

std::vector<Axis> standard_axes(const CandidateField& cf)
{
    const auto hist = build_histogram(cf.field);
    auto axes = select_nature_axes(find_peaks(hist), hist.ge, AxisMode::Standard);
    const auto aug = augmented_axes(axes);
    axes.insert(axes.end(), aug.begin(), aug.end());
    return axes;
}

} // namespace

TEST_CASE("center_of_gravity is the mean coordinate")
{
    const std::vector<Point> two = {{0, 0}, {2, 0}};
    CHECK(center_of_gravity(two).x == 1.0);
    CHECK(center_of_gravity(two).y == 0.0);
    const std::vector<Point> one = {{5, 7}};
    CHECK(center_of_gravity(one).x == 5.0);
    CHECK(center_of_gravity(one).y == 7.0);
    const std::vector<Point> square = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    CHECK(center_of_gravity(square).x == 0.5);
    CHECK(center_of_gravity(square).y == 0.5);
    CHECK_THROWS_AS(center_of_gravity(std::vector<Point>{}), std::invalid_argument);
}

TEST_CASE("project_pixel is the signed coordinate along the axis")
{
    CHECK(project_pixel({7, 3}, {2, 9}, 0.0) == doctest::Approx(5.0));
    CHECK(project_pixel({7, 3}, {2, 9}, pi) == doctest::Approx(-5.0));
    CHECK(project_pixel({7, 3}, {2, 9}, pi / 2) == doctest::Approx(-6.0));
    for (double phi : {0.0, 0.3, 1.0, 2.0, 4.0})
        CHECK(project_pixel({3.5, -1}, {3.5, -1}, phi) == doctest::Approx(0.0));
    CHECK(project_pixel({1, 1}, {0, 0}, pi / 4) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("projection arrays hold any pixel on either side of the COG")
{
    const auto pa = make_projection_arrays(30, 40, {10, 12});
    CHECK(pa.len == 51);
    CHECK(pa.origin_index == pa.len);
    CHECK(pa.r.size() == static_cast<std::size_t>(2 * pa.len + 1));
    CHECK(pa.t.size() == pa.r.size());
    CHECK(make_projection_arrays(3, 4, {0, 0}).len == 6);
    CHECK(make_projection_arrays(10, 10, {0, 0}).len == 16);   // ceil(14.14) + 1
}

TEST_CASE("deposit splits weight linearly between neighbours")
{
    std::vector<double> a(6, 0.0);
    deposit(a, 2.0, 8.0);
    CHECK(a[2] == 8.0);
    CHECK(a[3] == 0.0);
    deposit(a, 3.5, 4.0);
    CHECK(a[3] == 2.0);
    CHECK(a[4] == 2.0);
    deposit(a, 0.25, 4.0);
    CHECK(a[0] == 3.0);
    CHECK(a[1] == 1.0);
    CHECK_THROWS_AS(deposit(a, -0.5, 1.0), std::logic_error);
    CHECK_THROWS_AS(deposit(a, 5.0, 1.0), std::logic_error);
}

TEST_CASE("accumulate: selection and interpolation of single samples")
{
    GradientField f;
    f.width = 9;
    f.height = 9;
    const PointF cog{4, 4};
    const auto axis = Axis::augmented(0.0);

    f.samples = {sample_at(6, 4, 0.0, 10.0)};
    auto pa = accumulate(f, axis, cog);
    CHECK(pa.r[static_cast<std::size_t>(pa.origin_index + 2)] == doctest::Approx(10.0));
    CHECK(pa.t[static_cast<std::size_t>(pa.origin_index + 2)] == doctest::Approx(10.0));

    const auto diag = Axis::augmented(0.0);
    f.samples = {sample_at(6, 4, 0.0, 10.0)};
    pa = accumulate(f, diag, {4.5, 4});
    CHECK(pa.r[static_cast<std::size_t>(pa.origin_index + 1)] == doctest::Approx(5.0));
    CHECK(pa.r[static_cast<std::size_t>(pa.origin_index + 2)] == doctest::Approx(5.0));

    f.samples = {sample_at(6, 4, pi / 2, 10.0)};
    pa = accumulate(f, axis, cog);
    CHECK(std::accumulate(pa.r.begin(), pa.r.end(), 0.0) == 0.0);
    CHECK(std::accumulate(pa.t.begin(), pa.t.end(), 0.0) == doctest::Approx(10.0));

    // Inside +-22.5 degrees the projected magnitude is m cos(theta - phi).
    f.samples = {sample_at(6, 4, pi / 8, 10.0)};
    pa = accumulate(f, axis, cog);
    CHECK(std::accumulate(pa.r.begin(), pa.r.end(), 0.0) == doctest::Approx(10.0 * std::cos(pi / 8)));
}

TEST_CASE("accumulate conserves gradient mass")
{
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        GradientField f;
        f.width = 20 + trial % 17;
        f.height = 20 + trial % 11;
        for (int k = 0; k < 80; ++k)
            f.samples.push_back(sample_at(1 + static_cast<int>(u(rng) * (f.width - 2)),
                                          1 + static_cast<int>(u(rng) * (f.height - 2)),
                                          u(rng) * 2 * pi, 300 * u(rng)));
        const PointF cog{f.width * u(rng), f.height * u(rng)};
        Peak pk;
        pk.center = static_cast<int>(u(rng) * 64);
        pk.start = -1 - trial % 3;
        pk.end = 1 + trial % 3;
        for (const auto& axis : {Axis::augmented(u(rng) * 2 * pi), Axis::nature(pk)}) {
            const auto pa = accumulate(f, axis, cog);
            double mass = 0.0, projected = 0.0;
            for (const auto& s : f.samples) {
                mass += s.mag;
                if (axis.accepts(s.theta))
                    projected += std::abs(s.mag * std::cos(s.theta - axis.phi));
            }
            CHECK(std::accumulate(pa.t.begin(), pa.t.end(), 0.0) == doctest::Approx(mass).epsilon(1e-6));
            CHECK(std::accumulate(pa.r.begin(), pa.r.end(), 0.0)
                  == doctest::Approx(projected).epsilon(1e-6).scale(1.0));
            for (std::size_t i = 0; i < pa.r.size(); ++i) {
                CHECK(pa.r[i] >= 0.0);
                CHECK(pa.r[i] <= pa.t[i] + 1e-9);
            }
        }
    }
}

TEST_CASE("normalize_to_agpv degenerate inputs")
{
    auto pa = make_projection_arrays(20, 20, {10, 10});
    const auto axis = Axis::augmented(0.0);
    CHECK_FALSE(normalize_to_agpv(pa, axis).has_value());

    for (int i = -5; i <= 5; ++i)
        pa.t[static_cast<std::size_t>(pa.origin_index + i)] = 100.0;
    const auto v = normalize_to_agpv(pa, axis);
    REQUIRE(v.has_value());
    for (auto e : v->values)
        CHECK(e == 0);
    CHECK(v->x_start >= 0);
    CHECK(v->x_start < v->x_end);
}

TEST_CASE("one straight edge across the axis gives a single run")
{
    GrayImage step(40, 40, std::uint8_t{200});
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 20; ++x)
            step.at(x, y) = 40;
    const auto v = compute_agpv(whole_patch(step), Axis::augmented(0.0));
    REQUIRE(v.has_value());
    CHECK(edge_count(v->values) == 1);
}

TEST_CASE("four rising edges across the axis give four runs")
{
    // A staircase brightening left to right: all four edges have theta = 0.
    GrayImage stairs(60, 40, std::uint8_t{30});
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 60; ++x)
            stairs.at(x, y) = static_cast<std::uint8_t>(30 + 50 * (x / 12));
    const auto cand = whole_patch(stairs);
    const auto v = compute_agpv(cand, Axis::augmented(0.0));
    REQUIRE(v.has_value());
    CHECK(edge_count(v->values) == 4);
    // The opposite direction sees only falling edges, of which there are none.
    const auto back = compute_agpv(cand, Axis::augmented(pi));
    REQUIRE(back.has_value());
    CHECK(edge_count(back->values) == 0);
    // Transverse axis: no gradients in range either.
    const auto t = compute_agpv(cand, Axis::augmented(pi / 2));
    REQUIRE(t.has_value());
    CHECK(edge_count(t->values) == 0);
}

TEST_CASE("a dark bar shows its rising edge on one axis and its falling edge on the opposite one")
{
    GrayImage bar(60, 40, std::uint8_t{220});
    for (int y = 0; y < 40; ++y)
        for (int x = 20; x < 36; ++x)
            bar.at(x, y) = 30;
    const auto cand = whole_patch(bar);
    const auto fwd = compute_agpv(cand, Axis::augmented(0.0));
    const auto back = compute_agpv(cand, Axis::augmented(pi));
    REQUIRE(fwd.has_value());
    REQUIRE(back.has_value());
    CHECK(edge_count(fwd->values) == 1);
    CHECK(edge_count(back->values) == 1);
    // Mirror images: the rising edge sits at the far end along +x, the
    // falling edge at the far end along -x.
    CHECK(fwd->values[31] == 255);
    CHECK(back->values[31] == 255);
    CHECK(fwd->values[0] == 0);
}

TEST_CASE("AGPVs are binary, length 32, in range and deterministic on the corpus")
{
    const auto corpus = synthetic_corpus();
    for (const auto& [label, img] : corpus.glyphs) {
        const auto cand = standard_candidate(img);
        REQUIRE(cand.has_value());
        const auto cf = prepare_candidate(*cand);
        for (const auto& axis : standard_axes(cf)) {
            const auto a = compute_agpv(cf, axis);
            const auto b = compute_agpv(*cand, axis);
            REQUIRE(a.has_value());
            REQUIRE(b.has_value());
            CHECK(a->values == b->values);
            CHECK(a->values.size() == 32u);
            for (auto e : a->values)
                CHECK_UNARY(e == 0 || e == 255);
            const auto pa = accumulate(cf.field, axis, cf.cog);
            CHECK(a->x_start >= 0);
            CHECK(a->x_start <= a->x_end);
            CHECK(a->x_end < static_cast<int>(pa.r.size()));
        }
    }
}

TEST_CASE("AGPVs are rotation-equivariant under a quarter turn")
{
    const auto corpus = synthetic_corpus();
    int worst = 32;
    for (const auto& [label, img] : corpus.glyphs) {
        const auto cand = standard_candidate(img);
        REQUIRE(cand.has_value());
        const auto rot = rotate90(*cand);
        const auto cf = prepare_candidate(*cand);
        const auto cr = prepare_candidate(rot);
        for (const auto& axis : standard_axes(cf)) {
            Axis turned = axis;
            turned.phi = wrap_angle(axis.phi + pi / 2);
            const auto a = compute_agpv(cf, axis);
            const auto b = compute_agpv(cr, turned);
            REQUIRE(a.has_value());
            REQUIRE(b.has_value());
            const int eq = equal_entries(a->values, b->values);
            worst = std::min(worst, eq);
            CHECK_MESSAGE(eq >= 30, "glyph " << label << " phi " << axis.phi);
        }
    }
    MESSAGE("fewest equal entries under rotation: " << worst);
}

TEST_CASE("AGPVs are scale-invariant under 2x upscaling")
{
    const auto corpus = synthetic_corpus();
    int worst = 32, below = 0, total = 0;
    for (const auto& [label, img] : corpus.glyphs) {
        const auto cand = standard_candidate(img);
        const auto big = standard_candidate(affine_transform(img, Mat2::scale(2), kCorpusBackground));
        REQUIRE(cand.has_value());
        REQUIRE(big.has_value());
        const auto cf = prepare_candidate(*cand);
        const auto cb = prepare_candidate(*big);
        for (const auto& axis : standard_axes(cf)) {
            const auto a = compute_agpv(cf, axis);
            const auto b = compute_agpv(cb, axis);
            REQUIRE(a.has_value());
            REQUIRE(b.has_value());
            const int eq = equal_within_one_cell(a->values, b->values);
            worst = std::min(worst, eq);
            below += equal_entries(a->values, b->values) < 30;
            ++total;
            CHECK_MESSAGE(eq >= 30, "glyph " << label << " phi " << axis.phi);
        }
    }
    MESSAGE("scale: " << below << " of " << total << " vectors below 30 strictly equal entries; worst within one cell " << worst);
}
