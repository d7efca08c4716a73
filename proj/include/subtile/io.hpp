#pragma once

#include <json.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "subtile/algebra.hpp"
#include "subtile/errors.hpp"
#include "subtile/geometry.hpp"
#include "subtile/recognize.hpp"
#include "subtile/sequence.hpp"
#include "subtile/word.hpp"

namespace subtile {

using Json = nlohmann::ordered_json;

// Real-valued results are always emitted as certified [lo, hi] decimal
// pairs, rounded outward, never as bare point values.
inline Json interval_to_json(const Interval& x, int digits = 40) {
    return Json::array({x.lo().to_string(digits, MPFR_RNDD), x.hi().to_string(digits, MPFR_RNDU)});
}

// ------------------------------------------------------------------
// coefficient sequence specs
// {"kind": "...", "values": [...], "pre": [...], "period": [...],
//  "digits": [...], "N": n, "C": n}
// ------------------------------------------------------------------

inline Json sequence_to_json(const CoefficientSequence& seq) {
    Json j;
    switch (seq.kind()) {
        case CoefficientSequence::Kind::Explicit:
            j["kind"] = "explicit";
            j["values"] = seq.preperiod();
            break;
        case CoefficientSequence::Kind::EventuallyPeriodic:
            j["kind"] = "eventually-periodic";
            j["pre"] = seq.preperiod();
            j["period"] = seq.period();
            break;
        case CoefficientSequence::Kind::ThueMorse:
            j["kind"] = "thue-morse";
            break;
        case CoefficientSequence::Kind::Designed:
            j["kind"] = "designed";
            j["C"] = seq.spike_period();
            j["digits"] = seq.digits();
            break;
    }
    j["N"] = seq.bound_n();
    if (seq.kind() != CoefficientSequence::Kind::Designed) j["C"] = seq.zero_run_c();
    return j;
}

inline CoefficientSequence sequence_from_json(const Json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "thue-morse" || s == "thue_morse") return CoefficientSequence::thue_morse();
        throw InvalidArgument("sequence spec: unknown shorthand '" + s + "'");
    }
    if (!j.is_object() || !j.contains("kind")) {
        throw InvalidArgument("sequence spec: expected an object with a 'kind'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    auto longs = [&](const char* key) { return j.at(key).get<std::vector<long>>(); };

    if (kind == "explicit") {
        if (!j.contains("N") || !j.contains("C")) {
            throw InvalidArgument("explicit sequence spec requires declared N and C");
        }
        return CoefficientSequence::explicit_values(longs("values"), j.at("N").get<long>(),
                                                    j.at("C").get<long>());
    }
    if (kind == "periodic" || kind == "eventually-periodic" || kind == "eventually_periodic") {
        std::vector<long> pre;
        if (j.contains("pre")) pre = longs("pre");
        else if (j.contains("preperiod")) pre = longs("preperiod");
        std::vector<long> period = longs("period");
        if (j.contains("N") && j.contains("C")) {
            return CoefficientSequence::eventually_periodic(pre, period, j.at("N").get<long>(),
                                                            j.at("C").get<long>());
        }
        return CoefficientSequence::eventually_periodic(pre, period);
    }
    if (kind == "thue-morse" || kind == "thue_morse") return CoefficientSequence::thue_morse();
    if (kind == "designed") {
        if (!j.contains("N")) throw InvalidArgument("designed sequence spec requires N");
        return CoefficientSequence::designed(j.at("C").get<long>(), longs("digits"),
                                             j.at("N").get<long>());
    }
    throw InvalidArgument("sequence spec: unknown kind '" + kind + "'");
}

// ------------------------------------------------------------------
// words: arrays of letter indices, limit letters as objects
// ------------------------------------------------------------------

inline Json letter_to_json(const Letter& l) {
    if (l.is_isolated()) return Json(l.index());
    Json w;
    w["limit"]["period"] = l.window().block();
    w["limit"]["phase"] = 0;  // windows are stored in canonical rotation
    return w;
}

inline Json word_to_json(const Word& w) {
    Json arr = Json::array();
    for (const Letter& l : w) arr.push_back(letter_to_json(l));
    return arr;
}

inline Letter letter_from_json(const Json& j) {
    if (j.is_number_unsigned() || j.is_number_integer()) {
        long v = j.get<long>();
        if (v < 0) throw InvalidArgument("letter index must be nonnegative");
        return Letter::isolated(static_cast<std::uint64_t>(v));
    }
    if (j.is_object() && j.contains("limit")) {
        const Json& lw = j.at("limit");
        auto period = lw.at("period").get<std::vector<long>>();
        long phase = lw.contains("phase") ? lw.at("phase").get<long>() : 0;
        return Letter::limit(LimitWindow::of(period, phase));
    }
    throw InvalidArgument("letter: expected an index or a {\"limit\": ...} object");
}

inline Word word_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidArgument("word: expected a JSON array");
    Word w;
    w.reserve(j.size());
    for (const Json& e : j) w.push_back(letter_from_json(e));
    return w;
}

inline Json decomposition_to_json(const Decomposition& d) {
    Json j;
    j["left"] = word_to_json(d.left_fragment);
    Json sts = Json::array();
    for (const SupertilePart& st : d.supertiles) {
        Json s;
        s["preimage"] = letter_to_json(st.preimage);
        s["image"] = word_to_json(st.image);
        sts.push_back(std::move(s));
    }
    j["supertiles"] = std::move(sts);
    j["right"] = word_to_json(d.right_fragment);
    return j;
}

inline Json polynomial_to_json(const IntegerPolynomial& p) {
    Json arr = Json::array();
    for (const mpz_class& c : p.coeffs) arr.push_back(c.get_str());
    Json j;
    j["coeffs"] = std::move(arr);
    return j;
}

// ------------------------------------------------------------------
// patch export: CSV and SVG
// ------------------------------------------------------------------

inline std::string patch_csv(const Patch& patch, int digits = 30) {
    std::string out = "index,letter,position_lo,position_hi,length_lo,length_hi\n";
    for (std::size_t i = 0; i < patch.tiles.size(); ++i) {
        const Tile& t = patch.tiles[i];
        out += std::to_string(i);
        out += ',';
        out += std::to_string(t.letter.index());
        out += ',';
        out += t.position.lo().to_string(digits, MPFR_RNDD);
        out += ',';
        out += t.position.hi().to_string(digits, MPFR_RNDU);
        out += ',';
        out += t.length.lo().to_string(digits, MPFR_RNDD);
        out += ',';
        out += t.length.hi().to_string(digits, MPFR_RNDU);
        out += '\n';
    }
    return out;
}

namespace detail {

inline const char* palette(std::uint64_t i) {
    static const char* kColors[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                    "#59a14f", "#edc948", "#b07aa1", "#9c755f"};
    return kColors[i % 8];
}

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace detail

// One rectangle per tile, color keyed by letter index mod palette size.
inline std::string patch_svg(const Patch& patch, double tile_height = 40.0) {
    double x0 = 0.0, x1 = 1.0;
    if (!patch.tiles.empty()) {
        x0 = patch.tiles.front().position.lo().to_double();
        const Tile& last = patch.tiles.back();
        x1 = last.position.hi().to_double() + last.length.hi().to_double();
    }
    const double pad = (x1 - x0) * 0.02 + 0.1;
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    svg += detail::fixed6(x0 - pad) + " 0 " + detail::fixed6(x1 - x0 + 2 * pad) + " " +
           detail::fixed6(tile_height) + "\">\n";
    for (const Tile& t : patch.tiles) {
        double x = t.position.midpoint().to_double();
        double w = t.length.midpoint().to_double();
        svg += "  <rect x=\"" + detail::fixed6(x) + "\" y=\"0\" width=\"" + detail::fixed6(w) +
               "\" height=\"" + detail::fixed6(tile_height) + "\" fill=\"" +
               detail::palette(t.letter.index()) +
               "\" stroke=\"#222222\" stroke-width=\"0.02\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

// Tick marks on an axis, one per point of the Delone set.
inline std::string delone_svg(const std::vector<Interval>& points, double window_hi) {
    const double h = 24.0;
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    svg += detail::fixed6(-0.5) + " 0 " + detail::fixed6(window_hi + 1.0) + " " +
           detail::fixed6(h) + "\">\n";
    svg += "  <line x1=\"" + detail::fixed6(-0.5) + "\" y1=\"" + detail::fixed6(h / 2) +
           "\" x2=\"" + detail::fixed6(window_hi + 0.5) + "\" y2=\"" + detail::fixed6(h / 2) +
           "\" stroke=\"#888888\" stroke-width=\"0.05\"/>\n";
    for (const Interval& p : points) {
        double x = p.midpoint().to_double();
        svg += "  <line x1=\"" + detail::fixed6(x) + "\" y1=\"" + detail::fixed6(h / 4) +
               "\" x2=\"" + detail::fixed6(x) + "\" y2=\"" + detail::fixed6(3 * h / 4) +
               "\" stroke=\"#1f4e79\" stroke-width=\"0.08\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace subtile
