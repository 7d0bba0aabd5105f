#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>

#include "agpv/bench.hpp"
#include "agpv/config.hpp"
#include "agpv/glyphs.hpp"
#include "agpv/imageio.hpp"
#include "agpv/matching.hpp"
#include "agpv/scalespace.hpp"

namespace py = pybind11;
using namespace agpv;

namespace {

template <typename T>
py::array_t<T> to_array(const Image<T>& img)
{
    py::array_t<T> out({img.height(), img.width()});
    std::memcpy(out.mutable_data(), img.pixels().data(), img.size() * sizeof(T));
    return out;
}

GrayImage to_image(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a)
{
    if (a.ndim() != 2)
        throw std::invalid_argument("expected a 2-D uint8 array (height, width)");
    const auto h = static_cast<int>(a.shape(0));
    const auto w = static_cast<int>(a.shape(1));
    std::vector<std::uint8_t> data(a.data(), a.data() + a.size());
    return GrayImage(w, h, std::move(data));
}

py::tuple box_tuple(const Box& b)
{
    return py::make_tuple(b.x, b.y, b.w, b.h);
}

AgpvValues to_values(const std::vector<int>& v)
{
    if (v.size() != kAgpvLength)
        throw std::invalid_argument("AGPV must have 32 entries");
    AgpvValues out{};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0 && v[i] != 1)
            throw std::invalid_argument("AGPV entries must be 0 or 1");
        out[i] = static_cast<std::uint8_t>(v[i]);
    }
    return out;
}

Config make_config(int t_dog, double th_f, double th_rec, double th_bin_div, int octaves)
{
    Config c;
    c.t_dog = t_dog;
    c.th_f = th_f;
    c.th_rec = th_rec;
    c.th_bin_div = th_bin_div;
    c.octaves = octaves;
    c.validate();
    return c;
}

} // namespace

PYBIND11_MODULE(_agpv, m)
{
    m.doc() = "Character extraction and AGPV recognition";

    py::register_exception<PgmError>(m, "PgmError", PyExc_ValueError);
    py::register_exception<DbFormatError>(m, "DbFormatError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "load_pgm", [](py::bytes data) {
            const std::string s = data;
            return to_array(load_pgm({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}));
        },
        py::arg("data"), "Decode binary PGM (P5, maxval 255) bytes into a (height, width) uint8 array.");
    m.def(
        "save_pgm", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img) {
            const auto bytes = save_pgm(to_image(img));
            return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        },
        py::arg("image"), "Encode a (height, width) uint8 array as binary PGM bytes.");

    m.def(
        "add_salt_pepper",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img, double rate,
           std::uint64_t seed) { return to_array(add_salt_pepper(to_image(img), rate, seed)); },
        py::arg("image"), py::arg("rate"), py::arg("seed"));

    m.def(
        "render_glyph",
        [](const std::string& label, int size, double rotation) {
            if (label.size() != 1)
                throw std::invalid_argument("label must be a single character");
            Box ink;
            auto img = render_corpus_glyph(label[0], size, rotation, &ink);
            return py::make_tuple(to_array(img), box_tuple(ink));
        },
        py::arg("label"), py::arg("size") = kCorpusSize, py::arg("rotation") = 0.0,
        "Render one glyph of the built-in font; returns (image, ink_box).");

    m.def("standard_labels", [] {
        const auto& l = standard_labels();
        return std::vector<std::string>(l.begin(), l.end());
    });

    m.def("equivalent_sigma", &equivalent_sigma, py::arg("octave"));
    m.def(
        "build_pyramid",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img, int octaves) {
            py::list out;
            for (const auto& o : build_pyramid(to_image(img), octaves)) {
                py::dict d;
                d["index"] = o.index;
                d["scale_factor"] = o.scale_factor;
                d["initial"] = to_array(o.initial);
                d["smoothed"] = to_array(o.smoothed);
                d["dog"] = to_array(o.dog);
                out.append(d);
            }
            return out;
        },
        py::arg("image"), py::arg("octaves") = kDefaultOctaves,
        "Difference-of-Gaussian pyramid as a list of dicts (initial, smoothed, dog arrays).");

    m.def(
        "extract_candidates",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img, int t_dog,
           int octaves) {
            ExtractOptions o;
            o.t_dog = t_dog;
            o.octaves = octaves;
            py::list out;
            for (const auto& c : extract_candidates(to_image(img), o)) {
                py::dict d;
                d["octave"] = c.octave;
                d["polarity"] = std::string(to_string(c.polarity));
                d["bbox"] = box_tuple(c.bbox);
                d["source_bbox"] = box_tuple(c.source_bbox);
                d["patch_box"] = box_tuple(c.patch_box);
                d["pixels"] = c.pixels.size();
                d["patch"] = to_array(c.patch);
                d["mask"] = to_array(c.mask);
                out.append(d);
            }
            return out;
        },
        py::arg("image"), py::arg("t_dog") = 2, py::arg("octaves") = kDefaultOctaves);

    m.def(
        "edge_count", [](const std::vector<int>& v) { return edge_count(to_values(v)); }, py::arg("values"));
    m.def(
        "match_cost",
        [](const std::vector<int>& u, const std::vector<int>& v) { return match_cost(to_values(u), to_values(v)); },
        py::arg("u"), py::arg("v"));

    py::class_<StandardDb>(m, "Database")
        .def_static(
            "from_synthetic_corpus",
            [](int t_dog, double th_bin_div) {
                ExtractOptions eo;
                eo.t_dog = t_dog;
                AgpvOptions ao;
                ao.th_bin_div = th_bin_div;
                return build_db_from_corpus(synthetic_corpus(), eo, ao);
            },
            py::arg("t_dog") = 2, py::arg("th_bin_div") = 16.0, "Build a database from the built-in font.")
        .def_static(
            "from_corpus_dir",
            [](const std::string& dir) { return build_db_from_corpus(load_corpus(dir)); }, py::arg("path"),
            "Build a database from a directory of <label>.pgm glyphs.")
        .def_static("parse", [](const std::string& text) { return parse_db(text); }, py::arg("text"))
        .def("serialize", [](const StandardDb& db) { return serialize_db(db); })
        .def_property_readonly("labels",
                               [](const StandardDb& db) {
                                   std::vector<std::string> out;
                                   for (const auto& e : db.entries)
                                       out.push_back(e.label);
                                   return out;
                               })
        .def("vector_counts",
             [](const StandardDb& db, const std::string& label) {
                 const auto* e = db.find(label);
                 if (!e)
                     throw py::key_error(label);
                 return py::make_tuple(e->nn, e->na);
             },
             py::arg("label"), "(nature, augmented) vector counts for one character.")
        .def("__len__", [](const StandardDb& db) { return db.entries.size(); });

    m.def(
        "recognize",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img, const StandardDb& db,
           bool known_orientation, const std::string& ink, int t_dog, double th_f, double th_rec,
           double th_bin_div, int octaves) {
            if (ink != "dark" && ink != "light" && ink != "any")
                throw std::invalid_argument("ink must be 'dark', 'light' or 'any'");
            const Config cfg = make_config(t_dog, th_f, th_rec, th_bin_div, octaves);
            const auto opts = cfg.match_options();
            const auto mode = known_orientation ? Orientation::Known : Orientation::Unknown;
            py::list out;
            for (const auto& c : extract_candidates(to_image(img), cfg.extract_options())) {
                if (ink != "any" && c.polarity != ink_polarity(ink == "dark"))
                    continue;
                const auto r = recognize(make_test_features(c, opts.agpv), db, mode, opts);
                out.append(py::make_tuple(r.label ? py::cast(*r.label) : py::none(), r.cmc,
                                          box_tuple(c.source_bbox)));
            }
            return out;
        },
        py::arg("image"), py::arg("db"), py::arg("known_orientation") = false, py::arg("ink") = "dark",
        py::arg("t_dog") = 2, py::arg("th_f") = 6.0, py::arg("th_rec") = 8.0, py::arg("th_bin_div") = 16.0,
        py::arg("octaves") = kDefaultOctaves,
        "Recognize every candidate; returns a list of (label or None, cmc, source_bbox).");

    m.def(
        "run_bench",
        [](std::uint64_t seed, int scenes) {
            if (scenes < 1)
                throw std::invalid_argument("scenes must be at least 1");
            const auto corpus = synthetic_corpus();
            const auto db = build_db_from_corpus(corpus);
            SceneOptions so;
            so.count = scenes;
            BenchReport report;
            {
                py::gil_scoped_release release;
                report = run_bench(corpus, db, seed, {}, so);
            }
            return format_csv(report);
        },
        py::arg("seed") = 1, py::arg("scenes") = SceneOptions{}.count,
        "Run the four-set synthetic benchmark and return its CSV report.");
}
