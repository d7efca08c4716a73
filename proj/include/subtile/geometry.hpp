#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "subtile/errors.hpp"
#include "subtile/interval.hpp"
#include "subtile/sequence.hpp"
#include "subtile/series.hpp"
#include "subtile/substitution.hpp"
#include "subtile/word.hpp"

namespace subtile {

inline Dyadic default_mu_width() { return Dyadic::from_string("1e-30", 96, MPFR_RNDD); }
inline Dyadic default_length_width() { return Dyadic::from_string("1e-20", 96, MPFR_RNDD); }

// The solved inflation data of an admissible sequence: mu is the unique
// root of x * sum_i a_i x^i = 1 in (0,1) and lambda = mu + 1/mu > 2.
struct InflationData {
    CoefficientSequence seq;
    Interval mu;
    Interval lambda;
};

namespace detail {

// f(x) = x * sum a_i x^i - 1, strictly increasing on (0,1) with f(0+) = -1
// and f(x) > 0 once x^C >= 1/2 (each length-C index window contains a
// positive coefficient).
inline CertifiedFn mu_equation(const CoefficientSequence& seq, const PrecisionPolicy& pol) {
    SeriesSpec spec = seq.series();
    return [spec, pol](const Interval& x, const Dyadic& w) {
        Dyadic inner = Dyadic::mul(w, Dyadic::pow2(-1), 64, MPFR_RNDD);
        Interval s = eval_series(spec, x, inner, pol);
        return mul(x, s, x.precision() + 64) - Interval::of_long(1);
    };
}

inline Interval lambda_of_mu(const Interval& mu, Prec prec) {
    return add(mu, div(Interval::of_long(1), mu, prec), prec);
}

}  // namespace detail

inline InflationData solve_mu(const CoefficientSequence& seq,
                              const Dyadic& target_width = default_mu_width(),
                              const PrecisionPolicy& pol = {}) {
    require_valid(seq);
    CertifiedFn f = detail::mu_equation(seq, pol);
    const Dyadic probe_width = Dyadic::pow2(-6);

    Dyadic lo;
    bool found_lo = false;
    for (int j = 2; j <= 40; j += 2) {
        lo = Dyadic::pow2(-j);
        if (detail::certified_sign(f, lo, probe_width) == -1) {
            found_lo = true;
            break;
        }
    }
    Dyadic hi;
    bool found_hi = false;
    for (int j = 1; j <= 24; ++j) {
        hi = Dyadic::sub(Dyadic::of_long(1), Dyadic::pow2(-j), 64, MPFR_RNDN);
        if (!(hi > lo)) continue;
        if (detail::certified_sign(f, hi, probe_width) == +1) {
            found_hi = true;
            break;
        }
    }
    if (!found_lo || !found_hi) {
        throw PrecisionExhausted("solve_mu: could not bracket the root of the mu equation");
    }

    Dyadic mu_width = target_width;
    for (int attempt = 0;; ++attempt) {
        Interval mu = bisect_root(f, lo, hi, mu_width, pol);
        Prec p = std::max<Prec>(mu.precision() + 64, pol.start);
        Interval lambda = detail::lambda_of_mu(mu, p);
        if (lambda.width() <= target_width || attempt >= 3) {
            if (lambda.width() > target_width) {
                throw PrecisionExhausted("solve_mu: lambda enclosure stuck above target width");
            }
            Interval residual = f(mu, Dyadic::mul(target_width, Dyadic::pow2(3), 64, MPFR_RNDU));
            if (!residual.contains_zero()) {
                throw InternalInconsistency("solve_mu: enclosure fails the defining equation");
            }
            if (!(mu.lo().sgn() > 0) || !(mu.hi() < Dyadic::of_long(1)) ||
                !(lambda.lo() > Dyadic::of_long(2))) {
                throw InternalInconsistency("solve_mu: enclosure violates 0 < mu < 1 < 2 < lambda");
            }
            return InflationData{seq, std::move(mu), std::move(lambda)};
        }
        // lambda amplifies mu's width by |1 - 1/mu^2|; retry tighter.
        Dyadic ratio = Dyadic::div(target_width, lambda.width(), 64, MPFR_RNDD);
        mu_width = Dyadic::mul(mu_width, Dyadic::mul(ratio, Dyadic::pow2(-2), 64, MPFR_RNDD), 64,
                               MPFR_RNDD);
    }
}

namespace detail {

// Natural lengths in the numerically stable shifted form
//   l([k]) = mu^k + sum_{d=1}^{k} mu^d * G_{k+1-d},
// where G_j = sum_{i>=0} a_{j+i} mu^i stays bounded by N/(1-mu). Every
// factor has a nonnegative mu power, so interval widths are never blown up
// by negative powers.
inline std::vector<Interval> length_table_once(const InflationData& data, std::uint64_t k_max,
                                               const Dyadic& target_width, const Interval& mu,
                                               const PrecisionPolicy& pol) {
    const CoefficientSequence& seq = data.seq;
    std::vector<Interval> lengths;
    lengths.reserve(k_max + 1);
    lengths.push_back(Interval::of_long(1));
    if (k_max == 0) return lengths;

    const long target_bits = -static_cast<long>(mpfr_get_exp(target_width.raw())) + 64;
    const Prec p = std::max<Prec>(std::max<Prec>(pol.start, mu.precision() + 64),
                                  static_cast<Prec>(std::max(target_bits, 64L)));

    // per-term budget: widths of the G_j sums enter scaled by mu^d < 1
    Dyadic g_width = Dyadic::mul(target_width, Dyadic::pow2(-3), 64, MPFR_RNDD);
    Dyadic one_minus_mu = Dyadic::sub(Dyadic::of_long(1), mu.hi(), 64, MPFR_RNDD);
    g_width = Dyadic::mul(g_width, one_minus_mu, 64, MPFR_RNDD);

    std::vector<Interval> shifted;  // shifted[j-1] = G_j
    shifted.reserve(k_max);
    for (std::uint64_t j = 1; j <= k_max; ++j) {
        CoefficientSequence s = seq;
        SeriesSpec spec{[s, j](std::uint64_t i) { return s.at(j + i); }, seq.bound_n(), 0};
        shifted.push_back(eval_series(spec, mu, g_width, pol));
    }

    std::vector<Interval> mu_pow;  // mu^d for d = 0..k_max
    mu_pow.reserve(k_max + 1);
    mu_pow.push_back(Interval::of_long(1));
    for (std::uint64_t d = 1; d <= k_max; ++d) mu_pow.push_back(mul(mu_pow.back(), mu, p));

    for (std::uint64_t k = 1; k <= k_max; ++k) {
        Interval acc = mu_pow[k];
        for (std::uint64_t d = 1; d <= k; ++d) {
            acc = add(acc, mul(mu_pow[d], shifted[k - d], p), p);
        }
        lengths.push_back(std::move(acc));
    }
    return lengths;
}

}  // namespace detail

// Certified natural tile lengths l([0..k_max]). Each entry is computed from
// the shifted series form and, for low k, cross-checked against the
// recursion l([k]) = lambda*l([k-1]) - l([k-2]) - a_{k-1}; the two
// enclosures must intersect and the intersection is returned. The recursion
// amplifies widths by a factor lambda per step, so it is only trusted as a
// cross-check below a fixed level.
inline std::vector<Interval> tile_length_table(const InflationData& data, std::uint64_t k_max,
                                               const Dyadic& target_width = default_length_width(),
                                               const PrecisionPolicy& pol = {}) {
    constexpr std::uint64_t kRecursionCheckDepth = 30;
    if (target_width.sgn() <= 0) {
        throw InvalidArgument("tile_length_table: target_width must be > 0");
    }

    Interval mu = data.mu;
    Interval lambda = data.lambda;
    std::vector<Interval> lengths;
    for (int attempt = 0;; ++attempt) {
        lengths = detail::length_table_once(data, k_max, target_width, mu, pol);
        Dyadic worst = Dyadic::of_long(0);
        for (const Interval& l : lengths) worst = std::max(worst, l.width());
        if (worst <= target_width) break;
        if (attempt >= 2) {
            throw PrecisionExhausted("tile_length_table: width stuck above target");
        }
        // the solved mu was too coarse for this request; refine it
        Dyadic base = mu.width();
        if (base.sgn() <= 0) base = target_width;
        Dyadic finer = Dyadic::mul(std::min(base, target_width), Dyadic::pow2(-40), 64, MPFR_RNDD);
        InflationData tighter = solve_mu(data.seq, finer, pol);
        mu = tighter.mu;
        lambda = tighter.lambda;
    }

    const Prec p = std::max<Prec>(pol.start, mu.precision() + 64);
    Interval rec_prev = Interval::of_long(1);
    std::optional<Interval> rec_cur;
    if (k_max >= 1) rec_cur = sub(lambda, Interval::of_long(data.seq.at(0)), p);
    for (std::uint64_t k = 1; k <= std::min(k_max, kRecursionCheckDepth); ++k) {
        auto meet = Interval::intersect(lengths[k], *rec_cur);
        if (!meet) {
            throw InternalInconsistency("tile_length: series and recursion enclosures disjoint at k=" +
                                        std::to_string(k));
        }
        lengths[k] = *meet;
        if (k < k_max) {
            Interval next = sub(sub(mul(lambda, *rec_cur, p), rec_prev, p),
                                Interval::of_long(data.seq.at(k)), p);
            rec_prev = *rec_cur;
            rec_cur = next;
        }
    }
    return lengths;
}

inline Interval tile_length(const InflationData& data, std::uint64_t k,
                            const Dyadic& target_width = default_length_width(),
                            const PrecisionPolicy& pol = {}) {
    return tile_length_table(data, k, target_width, pol).back();
}

// ((1 - mu) mu^i)_{i <= upto}: the letter frequencies of the isolated points.
inline std::vector<Interval> frequency_vector(const InflationData& data, std::uint64_t upto) {
    const Prec p = data.mu.precision() + 8;
    Interval one_minus = sub(Interval::of_long(1), data.mu, p);
    std::vector<Interval> out;
    out.reserve(upto + 1);
    Interval cur = one_minus;
    for (std::uint64_t i = 0;; ++i) {
        out.push_back(cur);
        if (i == upto) break;
        cur = mul(cur, data.mu, p);
    }
    return out;
}

struct Tile {
    Letter letter;
    Interval position;
    Interval length;
};

// A geometric realization of a word: consecutive tiles with certified
// positions, starting at the anchor.
struct Patch {
    std::vector<Tile> tiles;
    Interval origin_offset;

    Interval total_length(Prec p) const {
        if (tiles.empty()) return Interval::of_long(0);
        const Tile& last = tiles.back();
        return sub(add(last.position, last.length, p), origin_offset, p);
    }
};

inline Patch realize(const InflationData& data, const Word& w, const Interval& anchor,
                     const Dyadic& length_width = default_length_width(),
                     const PrecisionPolicy& pol = {}) {
    if (!all_isolated(w)) {
        throw UnsupportedLimitLetter("realize: limit letters have no first-class length");
    }
    std::uint64_t max_index = 0;
    for (const Letter& l : w) max_index = std::max(max_index, l.index());
    std::vector<Interval> lengths =
        w.empty() ? std::vector<Interval>{} : tile_length_table(data, max_index, length_width, pol);

    for (const Interval& l : lengths) {
        if (!(l.lo().sgn() > 0)) {
            throw InternalInconsistency("realize: tile length enclosure not strictly positive");
        }
    }

    const Prec p = std::max<Prec>(pol.start, anchor.precision());
    Patch patch;
    patch.origin_offset = anchor;
    patch.tiles.reserve(w.size());
    Interval pos = anchor;
    for (const Letter& l : w) {
        const Interval& len = lengths[l.index()];
        patch.tiles.push_back(Tile{l, pos, len});
        pos = add(pos, len, p);
    }
    return patch;
}

// Realizes w and rho(w) from the same anchor and returns an enclosure of
// max_j | lambda * pos_j(w) - pos_{m_j}(rho(w)) | over the supertile start
// positions m_j. Correct data makes every difference contain 0.
inline Interval verify_inflation(const InflationData& data, const Word& w,
                                 const Dyadic& length_width = default_length_width(),
                                 const PrecisionPolicy& pol = {}) {
    if (w.empty()) return Interval::of_long(0);
    Patch base = realize(data, w, Interval::of_long(0), length_width, pol);
    Word image = apply_word(data.seq, w);
    Patch inflated = realize(data, image, Interval::of_long(0), length_width, pol);

    const Prec p = std::max<Prec>(pol.start, data.mu.precision());
    Interval worst = Interval::of_long(0);
    std::size_t m = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        Interval diff = sub(mul(data.lambda, base.tiles[j].position, p),
                            inflated.tiles[m].position, p);
        worst = Interval::max_hull(worst, diff.abs_hull());
        m += detail::image_length(data.seq, w[j]);
    }
    return worst;
}

// Min and max tile length over [0..k_max], checked against the Delone lower
// bound mu^{C+1}.
inline std::pair<Interval, Interval> delone_bounds(const InflationData& data, std::uint64_t k_max,
                                                   const Dyadic& length_width = default_length_width(),
                                                   const PrecisionPolicy& pol = {}) {
    std::vector<Interval> lengths = tile_length_table(data, k_max, length_width, pol);
    Interval mn = lengths[0], mx = lengths[0];
    for (const Interval& l : lengths) {
        mn = Interval::min_hull(mn, l);
        mx = Interval::max_hull(mx, l);
    }
    Interval bound = data.mu.pow_si(data.seq.zero_run_c() + 1, data.mu.precision());
    if (mn.hi() < bound.lo()) {
        throw DeloneViolation("delone_bounds: certified min length below mu^{C+1}");
    }
    return {mn, mx};
}

// The self-similar Delone set built from rho^k([0]) (k = 1 when a_0 > 1,
// else k = 2, so the level-k supertile has an interior [0] tile). The
// distinguished interior [0] at patch offset delta is pinned to the fixed
// segment [s*, s*+1) with s* = -delta / (lambda^k - 1): inflation by
// lambda^k maps that segment onto the footprint of the next patch and the
// iterates nest, so lambda^k * Lambda lies inside Lambda exactly.
struct FixedPointDelone {
    unsigned power = 1;       // the k with the interior [0]
    Interval scale;           // lambda^k
    std::vector<Interval> points;
};

inline FixedPointDelone fixed_point_delone(const InflationData& data, const Dyadic& window,
                                           std::uint64_t budget = kDefaultWordBudget,
                                           const Dyadic& length_width = default_length_width(),
                                           const PrecisionPolicy& pol = {}) {
    if (window.sgn() <= 0) throw InvalidArgument("fixed_point_delone: window must be positive");
    const CoefficientSequence& seq = data.seq;
    const unsigned k = seq.at(0) > 1 ? 1 : 2;
    const Prec p = std::max<Prec>(pol.start, data.mu.precision());

    Word block = supertile(seq, Letter::isolated(0), k, budget);
    std::size_t interior = 0;
    for (std::size_t t = 1; t < block.size(); ++t) {
        if (block[t].index() == 0) {
            interior = t;
            break;
        }
    }
    if (interior == 0) {
        throw InternalInconsistency("fixed_point_delone: no interior [0] in the seed supertile");
    }

    Patch seed = realize(data, block, Interval::of_long(0), length_width, pol);
    Interval delta = seed.tiles[interior].position;
    Interval scale = data.lambda.pow_si(static_cast<long>(k), p);

    Word w = block;
    // anchor_1 = s* - delta = -delta * lambda^k / (lambda^k - 1); the loop
    // multiplies by lambda^k, which keeps the distinguished tile at s*.
    Interval anchor =
        div(mul(delta, scale, p), sub(scale, Interval::of_long(1), p), p).neg();
    Interval right_end = add(anchor, scale, p);  // total span of rho^k([0]) is lambda^k
    while (!(right_end.lo() > window)) {
        w = apply_word_iterated(seq, std::move(w), k, budget);
        anchor = mul(anchor, scale, p);
        right_end = mul(right_end, scale, p);
    }

    Patch patch = realize(data, w, anchor, length_width, pol);
    FixedPointDelone out;
    out.power = k;
    out.scale = scale;
    for (const Tile& t : patch.tiles) {
        if (t.position.hi().sgn() >= 0 && t.position.lo() <= window) {
            out.points.push_back(t.position);
        }
    }
    return out;
}

// Exact letter statistics of rho^k([0]) from abelianized counts, normalized
// by the total letter count.
struct EmpiricalFrequencies {
    mpz_class total;
    std::map<std::uint64_t, mpq_class> exact;
    std::map<std::uint64_t, Interval> enclosure;
};

inline EmpiricalFrequencies empirical_frequencies(const InflationData& data, unsigned k,
                                                  const mpz_class& budget = mpz_class(1) << 40) {
    mpz_class total = supertile_size(data.seq, 0, k);
    if (total > budget) {
        throw BudgetExceeded("empirical_frequencies: supertile size exceeds budget");
    }
    std::vector<mpz_class> counts = supertile_counts(data.seq, 0, k);
    EmpiricalFrequencies out;
    out.total = total;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        mpq_class q(counts[i], total);
        q.canonicalize();
        out.enclosure.emplace(i, Interval::outward(q, 128));
        out.exact.emplace(i, std::move(q));
    }
    return out;
}

}  // namespace subtile
