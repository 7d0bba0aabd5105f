// agpv: command-line front end for candidate extraction, database building,
// recognition and the synthetic benchmark.
//
// Exit codes: 0 success, 1 domain error (bad image, bad DB, corpus gaps,
// invalid configuration), 2 I/O failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "agpv/bench.hpp"
#include "agpv/config.hpp"
#include "agpv/glyphs.hpp"
#include "agpv/imageio.hpp"
#include "agpv/matching.hpp"
#include "agpv/scalespace.hpp"

namespace fs = std::filesystem;
using namespace agpv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

// Raw flag values; only flags actually given override the configuration.
struct CommonFlags {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    bool known_orientation = false;
    CLI::Option* known_flag = nullptr;
};

void add_common_flags(CLI::App* app, CommonFlags& f)
{
    const auto add = [&](const std::string& key, const std::string& flag, const std::string& help) {
        f.options[key] = app->add_option(flag, f.values[key], help);
    };
    add("t_dog", "--t-dog", "DOG magnitude threshold (default 2)");
    add("th_f", "--th-f", "fundamental-pair cost threshold (default 6)");
    add("th_rec", "--th-rec", "recognition threshold on the normalized cost (default 8)");
    add("th_bin_div", "--th-bin-div", "AGPV binarization divisor (default 16)");
    add("octaves", "--octaves", "number of pyramid octaves (default 4)");
    add("seed", "--seed", "random seed (default 1)");
    add("dump_dir", "--dump-dir", "directory for pyramid / scene debug images");
    add("dump_hist", "--dump-hist", "CSV file for orientation histograms and peaks");
    add("dump_agpv", "--dump-agpv", "CSV file for AGPVs");
    f.known_flag = app->add_flag("--known-orientation", f.known_orientation,
                                 "fix the fundamental pair to the upright orientation");
}

Config resolve_config(const CommonFlags& f)
{
    Config cfg;
    if (const char* path = std::getenv("AGPV_CONFIG"); path && *path)
        cfg = load_config_file(path);
    for (const auto& [key, opt] : f.options)
        if (opt->count() > 0)
            set_config_value(cfg, key, f.values.at(key));
    if (f.known_flag->count() > 0)
        cfg.known_orientation = true;
    cfg.validate();
    return cfg;
}

std::ofstream open_output(const fs::path& path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::ios_base::failure("cannot write " + path.string());
    return out;
}

void write_text(const fs::path& path, const std::string& text)
{
    auto out = open_output(path);
    out << text;
    if (!out)
        throw std::ios_base::failure("cannot write " + path.string());
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(const char* format, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

void append_agpv_row(std::ostream& out, const std::string& id, const std::string& kind, const Agpv& v)
{
    out << id << ',' << kind << ',' << fmt("%.6f", v.axis.phi) << ',' << v.x_start << ',' << v.x_end;
    for (auto b : v.values)
        out << ',' << static_cast<int>(b);
    out << '\n';
}

std::string agpv_csv_header()
{
    std::string h = "id,kind,phi,x_start,x_end";
    for (int i = 1; i <= kAgpvLength; ++i)
        h += ",v" + std::to_string(i);
    return h + "\n";
}

// One "bins" row per candidate followed by one "peak" row per detected peak.
void write_hist_csv(const fs::path& path, const std::vector<CharCandidate>& candidates)
{
    std::ostringstream out;
    out << "# candidate,bins,ge,bin0..bin63\n"
        << "# candidate,peak,center_bin,start_bin,end_bin,energy,outstanding\n";
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto hist = build_histogram(prepare_candidate(candidates[i]).field);
        out << i << ",bins," << fmt("%.6f", hist.ge);
        for (double b : hist.bins)
            out << ',' << fmt("%.6f", b);
        out << '\n';
        for (const auto& p : find_peaks(hist)) {
            out << i << ",peak," << p.center << ',' << p.start_bin() << ',' << p.end_bin() << ','
                << fmt("%.6f", p.energy) << ',' << fmt("%.6f", p.outstanding) << '\n';
        }
    }
    write_text(path, out.str());
}

std::vector<CharCandidate> extract_with_dumps(const GrayImage& img, const Config& cfg)
{
    const auto pyramid = build_pyramid(img, cfg.octaves);
    if (!cfg.dump_dir.empty())
        dump_pyramid(pyramid, cfg.dump_dir);
    auto candidates = extract_from_pyramid(pyramid, cfg.extract_options());
    if (!cfg.dump_hist.empty())
        write_hist_csv(cfg.dump_hist, candidates);
    return candidates;
}

void dump_test_agpvs(const fs::path& path, const std::vector<CharCandidate>& candidates, const Config& cfg)
{
    std::ostringstream out;
    out << agpv_csv_header();
    const auto opts = cfg.match_options().agpv;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (const auto& v : make_test_features(candidates[i], opts).nature)
            append_agpv_row(out, std::to_string(i), "N", v);
    write_text(path, out.str());
}

std::string box_text(const Box& b)
{
    return std::to_string(b.x) + " " + std::to_string(b.y) + " " + std::to_string(b.w) + " " + std::to_string(b.h);
}

int cmd_render_corpus(const std::string& out_dir)
{
    save_corpus(synthetic_corpus(), out_dir);
    std::cout << standard_labels().size() << " glyphs\n";
    return kExitOk;
}

int cmd_build_db(const std::string& corpus_dir, const std::string& db_path, const Config& cfg)
{
    const auto corpus = corpus_dir.empty() ? synthetic_corpus() : load_corpus(corpus_dir);
    const auto db = build_db_from_corpus(corpus, cfg.extract_options(), cfg.match_options().agpv);
    write_text(db_path, serialize_db(db));
    std::string outside;
    for (const auto& e : db.entries) {
        std::cout << e.label << " " << e.nn << " " << e.na << "\n";
        if (e.nv() < 4 || e.nv() > 6)
            outside += " " + e.label + "(" + std::to_string(e.nv()) + ")";
    }
    if (!outside.empty())
        std::cerr << "agpv: warning: vector count outside the usual 4..6 for" << outside << "\n";
    if (!cfg.dump_agpv.empty()) {
        std::ostringstream out;
        out << agpv_csv_header();
        for (const auto& e : db.entries)
            for (int j = 0; j < e.nv(); ++j)
                append_agpv_row(out, e.label, j < e.nn ? "N" : "A", e.vectors[j]);
        write_text(cfg.dump_agpv, out.str());
    }
    return kExitOk;
}

int cmd_extract(const std::string& image_path, const std::string& out_dir, const Config& cfg)
{
    const auto img = read_pgm_file(image_path);
    const auto candidates = extract_with_dumps(img, cfg);
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        char stem[32];
        std::snprintf(stem, sizeof stem, "cand_%04zu", i);
        write_pgm_file(fs::path(out_dir) / (std::string(stem) + ".pgm"), c.patch);
        nlohmann::ordered_json side;
        side["index"] = i;
        side["octave"] = c.octave;
        side["polarity"] = to_string(c.polarity);
        side["bbox"] = {c.bbox.x, c.bbox.y, c.bbox.w, c.bbox.h};
        side["source_bbox"] = {c.source_bbox.x, c.source_bbox.y, c.source_bbox.w, c.source_bbox.h};
        side["patch_box"] = {c.patch_box.x, c.patch_box.y, c.patch_box.w, c.patch_box.h};
        side["pixels"] = c.pixels.size();
        write_text(fs::path(out_dir) / (std::string(stem) + ".json"), side.dump() + "\n");
    }
    if (!cfg.dump_agpv.empty())
        dump_test_agpvs(cfg.dump_agpv, candidates, cfg);
    std::cout << candidates.size() << " candidates\n";
    return kExitOk;
}

int cmd_recognize(const std::string& image_path, const std::string& db_path, const std::string& ink,
                  const Config& cfg)
{
    const auto db = parse_db(read_text(db_path));
    const auto img = read_pgm_file(image_path);
    auto candidates = extract_with_dumps(img, cfg);
    if (ink != "any") {
        const Polarity keep = ink_polarity(ink == "dark");
        std::erase_if(candidates, [&](const CharCandidate& c) { return c.polarity != keep; });
    }
    if (!cfg.dump_agpv.empty())
        dump_test_agpvs(cfg.dump_agpv, candidates, cfg);
    const auto mode = cfg.known_orientation ? Orientation::Known : Orientation::Unknown;
    const auto opts = cfg.match_options();
    for (const auto& c : candidates) {
        const auto r = recognize(make_test_features(c, opts.agpv), db, mode, opts);
        std::cout << (r.label ? *r.label : std::string("?")) << " " << fmt("%.3f", r.cmc) << " "
                  << box_text(c.source_bbox) << "\n";
    }
    return kExitOk;
}

void dump_scenes(const fs::path& dir, const std::vector<BenchScene>& scenes)
{
    fs::create_directories(dir);
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        const auto& s = scenes[i];
        char stem[32];
        std::snprintf(stem, sizeof stem, "%s_%03zu", to_string(s.set), i);
        write_pgm_file(dir / (std::string(stem) + ".pgm"), s.image);
        std::ostringstream truth;
        truth << "# " << s.provenance << "\n";
        for (const auto& t : s.truth)
            truth << t.label << " " << box_text(t.box) << "\n";
        write_text(dir / (std::string(stem) + ".txt"), truth.str());
    }
}

int cmd_bench(const std::string& corpus_dir, const std::string& db_path, int scenes,
              const std::string& csv_path, const Config& cfg)
{
    if (scenes < 1)
        throw ConfigError("--scenes must be at least 1");
    const auto corpus = corpus_dir.empty() ? synthetic_corpus() : load_corpus(corpus_dir);
    const auto opts = cfg.bench_options();
    const auto db = db_path.empty() ? build_db_from_corpus(corpus, opts.extract, opts.match.agpv)
                                    : parse_db(read_text(db_path));
    SceneOptions so;
    so.count = scenes;

    BenchReport report;
    if (cfg.dump_dir.empty()) {
        report = run_bench(corpus, db, cfg.seed, opts, so);
    } else {
        const auto a = make_scenes(corpus, cfg.seed, so);
        const auto derived = derive_sets(a, cfg.seed);
        dump_scenes(cfg.dump_dir, a);
        dump_scenes(cfg.dump_dir, derived.b);
        dump_scenes(cfg.dump_dir, derived.c);
        dump_scenes(cfg.dump_dir, derived.d);
        for (const auto* set : {&a, &derived.b, &derived.c, &derived.d})
            report.sets.push_back(evaluate(*set, db, opts));
    }
    const auto csv = format_csv(report);
    std::cout << format_table(report) << "\n" << csv;
    if (!csv_path.empty())
        write_text(csv_path, csv);
    return kExitOk;
}

int guarded(const std::function<int()>& body)
{
    try {
        return body();
    } catch (const std::ios_base::failure& e) {
        std::cerr << "agpv: I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "agpv: I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "agpv: error: " << e.what() << "\n";
        return kExitDomain;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"AGPV character extraction and recognition"};
    app.require_subcommand(1);

    std::string out_dir, corpus_dir, db_path, image_path, csv_path, ink = "dark";
    int scenes = SceneOptions{}.count;

    auto* render = app.add_subcommand("render-corpus", "write the built-in 36-glyph corpus as <label>.pgm");
    render->add_option("out_dir", out_dir, "output directory")->required();

    CommonFlags build_flags;
    auto* build = app.add_subcommand("build-db", "build a standard AGPV database from a glyph corpus");
    build->add_option("corpus_dir,--corpus-dir", corpus_dir,
                      "directory of <label>.pgm files (default: built-in corpus)");
    build->add_option("--db,-o", db_path, "output database file")->required();
    add_common_flags(build, build_flags);

    CommonFlags extract_flags;
    auto* extract = app.add_subcommand("extract", "extract character candidates from a PGM image");
    extract->add_option("image", image_path, "input PGM")->required();
    extract->add_option("out_dir", out_dir, "directory for patches and sidecars")->required();
    add_common_flags(extract, extract_flags);

    CommonFlags recognize_flags;
    auto* recog = app.add_subcommand("recognize", "recognize every candidate of a PGM image");
    recog->add_option("image", image_path, "input PGM")->required();
    recog->add_option("--db", db_path, "standard database file")->required();
    recog->add_option("--ink", ink, "ink polarity of characters to report")
        ->check(CLI::IsMember({"dark", "light", "any"}));
    add_common_flags(recog, recognize_flags);

    CommonFlags bench_flags;
    auto* bench = app.add_subcommand("bench", "run the synthetic four-set benchmark");
    bench->add_option("--corpus-dir", corpus_dir, "glyph corpus directory (default: built-in corpus)");
    bench->add_option("--db", db_path, "standard database (default: built from the corpus)");
    bench->add_option("--scenes", scenes, "scenes per set");
    bench->add_option("--csv", csv_path, "also write the CSV report to this file");
    add_common_flags(bench, bench_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitDomain;
    }

    if (render->parsed())
        return guarded([&] { return cmd_render_corpus(out_dir); });
    if (build->parsed())
        return guarded([&] { return cmd_build_db(corpus_dir, db_path, resolve_config(build_flags)); });
    if (extract->parsed())
        return guarded([&] { return cmd_extract(image_path, out_dir, resolve_config(extract_flags)); });
    if (recog->parsed())
        return guarded([&] { return cmd_recognize(image_path, db_path, ink, resolve_config(recognize_flags)); });
    return guarded([&] { return cmd_bench(corpus_dir, db_path, scenes, csv_path, resolve_config(bench_flags)); });
}
