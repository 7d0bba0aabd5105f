#include "agpv/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace agpv {

const std::array<std::string, 36>& standard_labels()
{
    static const std::array<std::string, 36> labels = [] {
        std::array<std::string, 36> out;
        const std::string chars = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
        for (std::size_t i = 0; i < chars.size(); ++i)
            out[i] = std::string(1, chars[i]);
        return out;
    }();
    return labels;
}

int edge_count(const AgpvValues& v)
{
    int count = v[0] > 0 ? 1 : 0;
    for (int i = 0; i + 1 < kAgpvLength; ++i)
        if (v[i] == 0 && v[i + 1] > 0)
            ++count;
    return count;
}

int match_cost(const AgpvValues& u, const AgpvValues& v)
{
    AgpvValues uni{}, inter{};
    for (int i = 0; i < kAgpvLength; ++i) {
        uni[i] = (u[i] > 0 || v[i] > 0) ? 1 : 0;
        inter[i] = (u[i] > 0 && v[i] > 0) ? 1 : 0;
    }
    const int ev = edge_count(v);
    return std::abs(edge_count(u) - ev) + std::abs(edge_count(uni) - ev)
        + std::abs(edge_count(inter) - ev);
}

bool angles_compatible(double a1, double a2, double b1, double b2)
{
    return std::abs(wrap_diff(wrap_diff(a1 - a2) - wrap_diff(b1 - b2))) <= kAngleTolerance + kAngleEps;
}

const StandardChar* StandardDb::find(std::string_view label) const
{
    for (const auto& e : entries)
        if (e.label == label)
            return &e;
    return nullptr;
}

TestFeatures make_test_features(CandidateField field, const AgpvOptions& opts)
{
    TestFeatures tf;
    tf.field = std::move(field);
    if (tf.field.field.samples.empty())
        return tf;
    const auto hist = build_histogram(tf.field.field);
    for (const auto& axis : select_nature_axes(find_peaks(hist), hist.ge, AxisMode::Test))
        if (auto v = compute_agpv(tf.field, axis, opts))
            tf.nature.push_back(*v);
    return tf;
}

TestFeatures make_test_features(const CharCandidate& candidate, const AgpvOptions& opts)
{
    return make_test_features(prepare_candidate(candidate), opts);
}

StandardChar make_standard_char(const std::string& label, const CharCandidate& candidate,
                                const AgpvOptions& opts)
{
    StandardChar sc;
    sc.label = label;
    const CandidateField cf = prepare_candidate(candidate);
    const auto hist = build_histogram(cf.field);
    const auto nature = select_nature_axes(find_peaks(hist), hist.ge, AxisMode::Standard);
    for (const auto& axis : nature) {
        if (auto v = compute_agpv(cf, axis, opts)) {
            sc.vectors.push_back(*v);
            ++sc.nn;
        }
    }
    for (const auto& axis : augmented_axes(nature)) {
        if (auto v = compute_agpv(cf, axis, opts)) {
            sc.vectors.push_back(*v);
            ++sc.na;
        }
    }
    return sc;
}

StandardDb build_db(const std::vector<std::pair<std::string, CharCandidate>>& samples,
                    const AgpvOptions& opts)
{
    std::set<std::string> seen;
    for (const auto& [label, cand] : samples)
        if (!seen.insert(label).second)
            throw std::invalid_argument("duplicate label in standard samples: " + label);
    for (const auto& label : standard_labels())
        if (!seen.count(label))
            throw std::invalid_argument("missing standard sample for label " + label);
    if (seen.size() != standard_labels().size())
        throw std::invalid_argument("standard samples contain labels outside 0-9, A-Z");

    StandardDb db;
    for (const auto& label : standard_labels()) {
        const auto it = std::find_if(samples.begin(), samples.end(),
                                     [&](const auto& s) { return s.first == label; });
        db.entries.push_back(make_standard_char(label, it->second, opts));
    }
    return db;
}

namespace {

// Test-side AGPVs on arbitrary axes, computed at most once per direction.
class FreshAgpvCache {
public:
    FreshAgpvCache(const TestFeatures& test, const AgpvOptions& opts) : test_(test), opts_(opts) {}

    const AgpvValues& at(double phi)
    {
        phi = wrap_angle(phi);
        const double pos = phi / kBinWidth;
        const long bin = std::lround(pos);
        if (std::abs(pos - bin) < 1e-6) {
            const int key = static_cast<int>(bin % kHistBins);
            auto it = cache_.find(key);
            if (it == cache_.end())
                it = cache_.emplace(key, compute(OrientationHistogram::bin_angle(key))).first;
            return it->second;
        }
        scratch_ = compute(phi);
        return scratch_;
    }

private:
    AgpvValues compute(double phi) const
    {
        if (test_.field.field.samples.empty())
            return {};
        const auto v = compute_agpv(test_.field, Axis::augmented(phi), opts_);
        return v ? v->values : AgpvValues{};
    }

    const TestFeatures& test_;
    const AgpvOptions& opts_;
    std::map<int, AgpvValues> cache_;
    AgpvValues scratch_{};
};

CharScore evaluate_pair(const TestFeatures& test, const StandardChar& sc, int k_t, int j_s,
                        int fundamental_cost, FreshAgpvCache& fresh, const MatchOptions& opts)
{
    CharScore score;
    score.label = sc.label;
    score.k_t = k_t;
    score.j_s = j_s;
    score.pairs.assign(sc.nv(), -1);
    score.pairs[j_s] = k_t;

    const int nt = static_cast<int>(test.nature.size());
    const double test_ref = test.angle(k_t);
    const double std_ref = sc.angle(j_s);
    long total = fundamental_cost;

    // Stages 2-3: remaining standard nature axes, matched by angular layout
    // relative to the fundamental pair.
    for (int j = 0; j < sc.nn; ++j) {
        if (j == j_s)
            continue;
        int best_k = -1;
        int best_cost = std::numeric_limits<int>::max();
        for (int k = 0; k < nt; ++k) {
            if (k == k_t || !angles_compatible(test.angle(k), test_ref, sc.angle(j), std_ref))
                continue;
            const int c = match_cost(test.nature[k].values, sc.vectors[j].values);
            if (c < best_cost) {
                best_cost = c;
                best_k = k;
            }
        }
        if (best_k >= 0) {
            score.pairs[j] = best_k;
            total += best_cost;
        } else if (opts.score_unmatched_nature) {
            total += match_cost(fresh.at(wrap_angle(sc.angle(j) - std_ref + test_ref)), sc.vectors[j].values);
        }
    }

    // Stage 4: augmented axes. Compare against a test nature AGPV lying on
    // the mapped direction, and against a freshly computed AGPV there; the
    // cheaper one counts.
    for (int j = sc.nn; j < sc.nv(); ++j) {
        if (j == j_s)
            continue;
        const double ax = wrap_angle(sc.angle(j) - std_ref + test_ref);
        int best_cost = match_cost(fresh.at(ax), sc.vectors[j].values);
        for (int k = 0; k < nt; ++k) {
            if (angle_distance(test.angle(k), ax) > kAngleTolerance + kAngleEps)
                continue;
            const int c = match_cost(test.nature[k].values, sc.vectors[j].values);
            if (c < best_cost) {
                best_cost = c;
                score.pairs[j] = k;
            }
        }
        total += best_cost;
    }

    // Stage 5 normalization.
    score.cmc = static_cast<double>(total) / sc.nv();
    return score;
}

} // namespace

MatchResult recognize(const TestFeatures& test, const StandardDb& db, Orientation mode,
                      const MatchOptions& opts)
{
    if (db.entries.empty())
        throw std::invalid_argument("recognition against an empty standard database");

    MatchResult result;
    if (test.nature.empty())
        return result;

    FreshAgpvCache fresh(test, opts.agpv);
    const int nt = static_cast<int>(test.nature.size());
    for (const auto& sc : db.entries) {
        if (sc.nv() == 0)
            continue;
        // Stage 1: lowest-cost (test, standard) axis pair.
        int best = std::numeric_limits<int>::max();
        std::vector<std::pair<int, int>> ties;
        for (int k = 0; k < nt; ++k) {
            for (int j = 0; j < sc.nv(); ++j) {
                if (mode == Orientation::Known
                    && angle_distance(test.angle(k), sc.angle(j)) > kAngleTolerance + kAngleEps)
                    continue;
                const int c = match_cost(test.nature[k].values, sc.vectors[j].values);
                if (c < best) {
                    best = c;
                    ties.clear();
                }
                if (c == best)
                    ties.emplace_back(k, j);
            }
        }
        if (ties.empty() || !(best < opts.th_f))
            continue;

        // Equal-cost fundamental pairs are all followed through; the
        // cheapest complete assignment represents this character.
        std::optional<CharScore> chosen;
        for (const auto& [k, j] : ties) {
            CharScore s = evaluate_pair(test, sc, k, j, best, fresh, opts);
            if (!chosen || s.cmc < chosen->cmc)
                chosen = std::move(s);
        }
        result.ranked.push_back(std::move(*chosen));
    }

    std::stable_sort(result.ranked.begin(), result.ranked.end(),
                     [](const CharScore& a, const CharScore& b) {
                         return a.cmc != b.cmc ? a.cmc < b.cmc : a.label < b.label;
                     });
    if (!result.ranked.empty()) {
        const auto& top = result.ranked.front();
        result.cmc = top.cmc;
        result.fundamental = {top.k_t, top.j_s};
        result.pairs = top.pairs;
        if (top.cmc < opts.th_rec)
            result.label = top.label;
    }
    return result;
}

std::string serialize_db(const StandardDb& db)
{
    std::ostringstream out;
    out << "AGPVDB 1 " << db.entries.size() << "\n";
    char buf[32];
    for (const auto& e : db.entries) {
        out << "CHAR " << e.label << " " << e.nn << " " << e.na << "\n";
        for (int j = 0; j < e.nv(); ++j) {
            std::snprintf(buf, sizeof buf, "%.6f", e.vectors[j].axis.phi);
            out << "AXIS " << (j < e.nn ? 'N' : 'A') << " " << buf;
            for (auto v : e.vectors[j].values)
                out << " " << static_cast<int>(v);
            out << "\n";
        }
    }
    return out.str();
}

StandardDb parse_db(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string magic;
    int version = 0;
    long count = -1;
    if (!(in >> magic >> version >> count) || magic != "AGPVDB")
        throw DbFormatError("not an AGPV database (missing AGPVDB header)");
    if (version != 1)
        throw DbFormatError("unsupported AGPV database version " + std::to_string(version));
    if (count < 0)
        throw DbFormatError("negative character count");

    StandardDb db;
    for (long i = 0; i < count; ++i) {
        std::string tag;
        StandardChar sc;
        if (!(in >> tag >> sc.label >> sc.nn >> sc.na) || tag != "CHAR" || sc.nn < 0 || sc.na < 0)
            throw DbFormatError("malformed CHAR record " + std::to_string(i + 1));
        for (int j = 0; j < sc.nv(); ++j) {
            std::string kind;
            double phi = 0.0;
            if (!(in >> tag >> kind >> phi) || tag != "AXIS" || (kind != "N" && kind != "A"))
                throw DbFormatError("malformed AXIS record for " + sc.label);
            if ((kind == "N") != (j < sc.nn))
                throw DbFormatError("axis kinds out of order for " + sc.label);
            // Axis directions are bin multiples; undo the 6-decimal rounding.
            const double pos = phi / kBinWidth;
            if (std::abs(pos - std::round(pos)) < 1e-4)
                phi = OrientationHistogram::bin_angle(static_cast<int>(std::lround(pos)));
            Agpv v;
            v.axis = kind == "N" ? Axis{} : Axis::augmented(phi);
            v.axis.phi = wrap_angle(phi);
            for (int e = 0; e < kAgpvLength; ++e) {
                int value = -1;
                if (!(in >> value) || (value != 0 && value != 255))
                    throw DbFormatError("AGPV entries must be 0 or 255 for " + sc.label);
                v.values[e] = static_cast<std::uint8_t>(value);
            }
            sc.vectors.push_back(v);
        }
        db.entries.push_back(std::move(sc));
    }
    std::string extra;
    if (in >> extra)
        throw DbFormatError("trailing data after " + std::to_string(count) + " characters");
    return db;
}

} // namespace agpv
