#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agpv/agpv.hpp"

namespace agpv {

/// 0-9 then A-Z.
const std::array<std::string, 36>& standard_labels();

/// Number of maximal runs of non-zero entries (a run touching index 0
/// counts).
int edge_count(const AgpvValues& v);

/// |EC(U)-EC(V)| + |EC(U|V)-EC(V)| + |EC(U&V)-EC(V)|. Not symmetric.
int match_cost(const AgpvValues& u, const AgpvValues& v);

/// |wrap(a1 - a2) - wrap(b1 - b2)| <= pi/32, the outer difference also taken
/// on the circle.
bool angles_compatible(double a1, double a2, double b1, double b2);

struct StandardChar {
    std::string label;
    int nn = 0;                  // nature vectors come first
    int na = 0;
    std::vector<Agpv> vectors;   // nn + na entries

    int nv() const { return nn + na; }
    double angle(int j) const { return vectors[j].axis.phi; }
};

struct StandardDb {
    std::vector<StandardChar> entries;

    const StandardChar* find(std::string_view label) const;
};

struct MatchOptions {
    double th_f = 6.0;     // Stage-1 fundamental-pair cost must be below this
    double th_rec = 8.0;   // final normalized cost must be below this to emit a label
    // Standard nature axes left without a test partner in Stage 2 are scored
    // against a test AGPV computed on the mapped direction instead of costing 0.
    bool score_unmatched_nature = true;
    AgpvOptions agpv;
};

/// Nature-axis AGPVs of a candidate under test, plus the gradient field so
/// AGPVs on further axes can be computed on demand.
struct TestFeatures {
    std::vector<Agpv> nature;
    CandidateField field;

    double angle(int k) const { return nature[k].axis.phi; }
};

TestFeatures make_test_features(const CharCandidate& candidate, const AgpvOptions& opts = {});
TestFeatures make_test_features(CandidateField field, const AgpvOptions& opts = {});

/// Standard-mode axes (nature, then augmented) and their AGPVs.
StandardChar make_standard_char(const std::string& label, const CharCandidate& candidate,
                                const AgpvOptions& opts = {});

StandardDb build_db(const std::vector<std::pair<std::string, CharCandidate>>& samples,
                    const AgpvOptions& opts = {});

enum class Orientation { Unknown, Known };

struct CharScore {
    std::string label;
    double cmc = 0.0;
    int k_t = 0;               // fundamental pair: test nature index
    int j_s = 0;               // fundamental pair: standard vector index
    std::vector<int> pairs;    // per standard vector: matched test nature index, -1 if none
};

struct MatchResult {
    std::optional<std::string> label;
    double cmc = std::numeric_limits<double>::infinity();   // no surviving character
    std::pair<int, int> fundamental{-1, -1};
    std::vector<int> pairs;
    std::vector<CharScore> ranked;   // surviving characters, best first
};

MatchResult recognize(const TestFeatures& test, const StandardDb& db, Orientation mode,
                      const MatchOptions& opts = {});

/// Text DB: "AGPVDB 1 <n>", then per character "CHAR <label> <NN> <NA>"
/// followed by NV lines "AXIS <N|A> <phi:%.6f> <32 values>".
std::string serialize_db(const StandardDb& db);
StandardDb parse_db(std::string_view text);

class DbFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace agpv
