#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "agpv/bench.hpp"
#include "agpv/glyphs.hpp"
#include "agpv/imageio.hpp"

using namespace agpv;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

std::string cli()
{
    const char* p = std::getenv("AGPV_CLI");
    REQUIRE_MESSAGE(p != nullptr, "AGPV_CLI must point at the agpv executable");
    return p;
}

// Runs the CLI with stderr discarded, capturing stdout and the exit status.
Run run(const std::string& args)
{
    const std::string line = "'" + cli() + "' " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(line.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("agpv_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string q(const fs::path& p)
{
    return "'" + p.string() + "'";
}

// A database built from the built-in corpus, shared by the recognize tests.
fs::path shared_db()
{
    static const fs::path path = [] {
        const auto dir = scratch("db");
        const auto r = run("build-db --db " + q(dir / "db.txt"));
        REQUIRE(r.code == 0);
        return dir / "db.txt";
    }();
    return path;
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("render-corpus writes 36 glyphs")
{
    const auto dir = scratch("render");
    const auto r = run("render-corpus " + q(dir / "corpus"));
    CHECK(r.code == 0);
    int files = 0;
    for (const auto& e : fs::directory_iterator(dir / "corpus"))
        files += e.path().extension() == ".pgm";
    CHECK(files == 36);
    CHECK(read_pgm_file(dir / "corpus" / "A.pgm") == render_corpus_glyph('A'));
}

TEST_CASE("build-db reports one line per glyph and names a missing glyph")
{
    const auto dir = scratch("build");
    save_corpus(synthetic_corpus(), dir / "corpus");
    const auto ok = run("build-db " + q(dir / "corpus") + " --db " + q(dir / "db.txt"));
    CHECK(ok.code == 0);
    CHECK(lines(ok.out).size() == 36);
    CHECK(fs::exists(dir / "db.txt"));

    fs::remove(dir / "corpus" / "Q.pgm");
    const std::string line = "'" + cli() + "' build-db " + q(dir / "corpus") + " --db " + q(dir / "db2.txt") + " 2>"
                             + q(dir / "err.txt");
    const int status = std::system(line.c_str());
    CHECK(WEXITSTATUS(status) == 1);
    std::ifstream err(dir / "err.txt");
    const std::string msg((std::istreambuf_iterator<char>(err)), std::istreambuf_iterator<char>());
    CHECK(msg.find("Q") != std::string::npos);
}

TEST_CASE("extract: blank image gives zero candidates, a glyph scene at least one")
{
    const auto dir = scratch("extract");
    write_pgm_file(dir / "blank.pgm", GrayImage(200, 200, std::uint8_t{128}));
    const auto blank = run("extract " + q(dir / "blank.pgm") + " " + q(dir / "out_blank"));
    CHECK(blank.code == 0);
    CHECK(blank.out == "0 candidates\n");

    GrayImage scene(200, 200, kCorpusBackground);
    GlyphPlacement p;
    p.center = {100, 100};
    draw_glyph(scene, 'H', p);
    write_pgm_file(dir / "glyph.pgm", scene);
    const auto g = run("extract " + q(dir / "glyph.pgm") + " " + q(dir / "out_glyph"));
    CHECK(g.code == 0);
    CHECK(std::atoi(g.out.c_str()) >= 1);
    CHECK(fs::exists(dir / "out_glyph" / "cand_0000.pgm"));
    CHECK(fs::exists(dir / "out_glyph" / "cand_0000.json"));
}

TEST_CASE("extract: bad magic exits 1, a missing file exits 2")
{
    const auto dir = scratch("extract_err");
    std::ofstream(dir / "bad.pgm") << "P2\n1 1\n255\n0\n";
    CHECK(run("extract " + q(dir / "bad.pgm") + " " + q(dir / "out")).code == 1);
    CHECK(run("extract " + q(dir / "missing.pgm") + " " + q(dir / "out")).code == 2);
}

TEST_CASE("recognize: a DB glyph recognizes as itself at cost 0")
{
    const auto dir = scratch("recognize");
    write_pgm_file(dir / "k.pgm", render_corpus_glyph('K'));
    for (const char* flag : {"", " --known-orientation"}) {
        const auto r = run("recognize " + q(dir / "k.pgm") + " --db " + q(shared_db()) + flag);
        CHECK(r.code == 0);
        bool found = false;
        for (const auto& l : lines(r.out))
            found = found || l.rfind("K 0.000 ", 0) == 0;
        CHECK_MESSAGE(found, r.out);
    }
}

TEST_CASE("recognize: an empty scene prints nothing and exits 0")
{
    const auto dir = scratch("recognize_empty");
    write_pgm_file(dir / "blank.pgm", GrayImage(160, 160, std::uint8_t{90}));
    const auto r = run("recognize " + q(dir / "blank.pgm") + " --db " + q(shared_db()));
    CHECK(r.code == 0);
    CHECK(r.out.empty());
}

TEST_CASE("recognize: a quarter-turned glyph is labelled without the orientation flag")
{
    // Accuracy at general angles is measured by the acceptance suite.
    const auto dir = scratch("recognize_rot");
    write_pgm_file(dir / "r.pgm", render_corpus_glyph('R', kCorpusSize, std::numbers::pi / 2));
    const auto r = run("recognize " + q(dir / "r.pgm") + " --db " + q(shared_db()));
    CHECK(r.code == 0);
    bool found = false;
    for (const auto& l : lines(r.out))
        found = found || l.rfind("R ", 0) == 0;
    CHECK_MESSAGE(found, r.out);
}

TEST_CASE("recognize: an unparsable DB exits 1")
{
    const auto dir = scratch("recognize_baddb");
    std::ofstream(dir / "db.txt") << "not a database\n";
    write_pgm_file(dir / "k.pgm", render_corpus_glyph('K'));
    CHECK(run("recognize " + q(dir / "k.pgm") + " --db " + q(dir / "db.txt")).code == 1);
}

TEST_CASE("bench: fixed seed gives an identical four-row CSV")
{
    const auto dir = scratch("bench");
    const auto a = run("bench --scenes 2 --seed 4 --csv " + q(dir / "a.csv"));
    const auto b = run("bench --scenes 2 --seed 4 --csv " + q(dir / "b.csv"));
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    std::ifstream fa(dir / "a.csv"), fb(dir / "b.csv");
    const std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(ca == cb);
    const auto rows = lines(ca);
    REQUIRE(rows.size() == 5);
    CHECK(rows[1].rfind("A,", 0) == 0);
    CHECK(rows[4].rfind("D,", 0) == 0);
}

TEST_CASE("flags override AGPV_CONFIG, and invalid settings exit 1")
{
    const auto dir = scratch("config");
    write_pgm_file(dir / "blank.pgm", GrayImage(100, 100, std::uint8_t{128}));
    std::ofstream(dir / "bad.cfg") << "t_dog=0\n";
    const std::string img = q(dir / "blank.pgm") + " " + q(dir / "out");
    CHECK(run("extract " + img + " --t-dog 0").code == 1);
    const std::string env = "AGPV_CONFIG=" + q(dir / "bad.cfg") + " ";
    const auto via_env = std::system((env + "'" + cli() + "' extract " + img + " >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(via_env) == 1);
    const auto overridden
        = std::system((env + "'" + cli() + "' extract " + img + " --t-dog 3 >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(overridden) == 0);
}
