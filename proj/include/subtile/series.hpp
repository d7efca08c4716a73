#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "subtile/errors.hpp"
#include "subtile/interval.hpp"

namespace subtile {

// A power series sum_{i >= start_index} a_i x^i with integer coefficients
// provided by a total accessor, declared upper bound N (so the tail beyond
// any truncation T is enclosed by N * x^{T+1} / (1 - x)), and all probed
// coefficients required to lie in [0, N]. The bound may be 0, in which case
// the series is identically zero and evaluates exactly.
struct SeriesSpec {
    std::function<long(std::uint64_t)> coefficient;
    long coefficient_bound = 0;
    std::uint64_t start_index = 0;

    long at(std::uint64_t i) const {
        long v = coefficient(i);
        if (v < 0 || v > coefficient_bound) {
            throw InvalidArgument("series coefficient a_" + std::to_string(i) + " = " +
                                  std::to_string(v) + " outside declared bound [0, " +
                                  std::to_string(coefficient_bound) + "]");
        }
        return v;
    }
};

// Escalate precision geometrically until `compute` returns an enclosure no
// wider than `target`, or the cap is reached.
template <typename F>
Interval refine_to_width(const Dyadic& target, const PrecisionPolicy& pol, F&& compute) {
    Prec p = pol.start;
    for (;;) {
        Interval r = compute(p);
        if (r.width() <= target) return r;
        if (p >= pol.cap) {
            throw PrecisionExhausted("enclosure width " + r.width().to_string(6, MPFR_RNDU) +
                                     " above target at precision cap");
        }
        p = std::min<Prec>(p * 2, pol.cap);
    }
}

namespace detail {

// Upper bound on N * x_hi^{T+1} / (1 - x_hi), valid at any working precision.
inline Dyadic series_tail_bound(long n_bound, const Dyadic& x_hi, std::uint64_t t, Prec prec) {
    Dyadic num = Dyadic::pow_si(x_hi, static_cast<long>(t) + 1, prec, MPFR_RNDU);
    num = Dyadic::mul(num, Dyadic::of_long(n_bound), prec, MPFR_RNDU);
    Dyadic den = Dyadic::sub(Dyadic::of_long(1), x_hi, prec, MPFR_RNDD);
    return Dyadic::div(num, den, prec, MPFR_RNDU);
}

}  // namespace detail

// Certified evaluation of sum_{i >= start} a_i x^i for x strictly inside
// (0, 1). The truncation depth is chosen so the geometric tail bound uses at
// most half the width budget; the partial sum gets the other half.
inline Interval eval_series(const SeriesSpec& spec, const Interval& x, const Dyadic& target_width,
                            const PrecisionPolicy& pol = {}) {
    if (target_width.sgn() <= 0) throw InvalidArgument("eval_series: target_width must be > 0");
    if (x.hi() >= Dyadic::of_long(1)) {
        throw NonConvergent("eval_series: x.hi >= 1, geometric tail bound diverges");
    }
    if (x.lo().sgn() <= 0) throw InvalidArgument("eval_series: x must be strictly inside (0,1)");
    if (spec.coefficient_bound == 0) {
        return Interval::of_long(0);  // all probed coefficients are pinned to 0
    }

    const Dyadic half_budget =
        Dyadic::div(target_width, Dyadic::of_long(2), target_width.precision() + 1, MPFR_RNDD);

    // Truncation depth: double until the tail bound fits, then binary refine.
    const Prec tp = 96;
    std::uint64_t t_hi = std::max<std::uint64_t>(spec.start_index, 4);
    constexpr std::uint64_t kDepthCap = 1u << 26;
    while (detail::series_tail_bound(spec.coefficient_bound, x.hi(), t_hi, tp) > half_budget) {
        if (t_hi >= kDepthCap) {
            throw PrecisionExhausted("eval_series: truncation depth exceeds cap");
        }
        t_hi = t_hi * 2 + 16;
    }
    std::uint64_t lo_t = spec.start_index, hi_t = t_hi;
    while (lo_t < hi_t) {
        std::uint64_t m = lo_t + (hi_t - lo_t) / 2;
        if (detail::series_tail_bound(spec.coefficient_bound, x.hi(), m, tp) <= half_budget) {
            hi_t = m;
        } else {
            lo_t = m + 1;
        }
    }
    const std::uint64_t depth = lo_t;

    Interval partial = refine_to_width(half_budget, pol, [&](Prec p) {
        Interval s = Interval::of_long(spec.at(depth));
        for (std::uint64_t i = depth; i > spec.start_index; --i) {
            s = add(mul(s, x, p), Interval::of_long(spec.at(i - 1)), p);
        }
        if (spec.start_index > 0) {
            s = mul(s, x.pow_si(static_cast<long>(spec.start_index), p), p);
        }
        return s;
    });

    Dyadic tail = detail::series_tail_bound(spec.coefficient_bound, x.hi(), depth, tp);
    return partial + Interval(Dyadic::of_long(0), std::move(tail));
}

// A certified function handed to the root finder: evaluates itself over the
// point interval `x` to an enclosure of width at most `eval_width` (when the
// operand permits).
using CertifiedFn = std::function<Interval(const Interval& x, const Dyadic& eval_width)>;

namespace detail {

// Certified sign of f at a point: -1, +1, or 0 when no sign could be
// certified down to the attempt floor (which for a strictly monotone f can
// happen at no more than one point, the root itself).
inline int certified_sign(const CertifiedFn& f, const Dyadic& at, Dyadic eval_width,
                          int max_attempts = 24) {
    Interval x = Interval::exact(at);
    for (int a = 0; a < max_attempts; ++a) {
        Interval v;
        try {
            v = f(x, eval_width);
        } catch (const PrecisionExhausted&) {
            return 0;  // cannot certify here; the caller probes elsewhere
        }
        if (v.hi().sgn() < 0) return -1;
        if (v.lo().sgn() > 0) return +1;
        eval_width = Dyadic::mul(eval_width, Dyadic::pow2(-8), 64, MPFR_RNDD);
        if (eval_width.sgn() <= 0) break;
    }
    return 0;
}

}  // namespace detail

// Bisection for the unique root of a caller-certified monotone increasing
// function on [lo, hi]. Halves are discarded only on certified signs; when
// the midpoint sign cannot be certified (the root may sit exactly on a
// dyadic midpoint) the quarter points are probed instead, which still
// shrinks the bracket since at most one point can be sign-ambiguous.
inline Interval bisect_root(const CertifiedFn& f, const Dyadic& lo_in, const Dyadic& hi_in,
                            const Dyadic& target_width, const PrecisionPolicy& pol = {}) {
    if (target_width.sgn() <= 0) throw InvalidArgument("bisect_root: target_width must be > 0");
    if (!(lo_in < hi_in)) throw InvalidArgument("bisect_root: need lo < hi");

    Dyadic lo = lo_in, hi = hi_in;
    auto gap = [&]() { return Dyadic::sub(hi, lo, std::max(lo.precision(), hi.precision()) + 2, MPFR_RNDU); };
    auto eval_width_for = [&](const Dyadic& g) {
        Dyadic w = Dyadic::mul(g, Dyadic::pow2(-4), 64, MPFR_RNDD);
        return std::max(w, Dyadic::mul(target_width, Dyadic::pow2(-8), 64, MPFR_RNDD));
    };

    if (detail::certified_sign(f, lo, eval_width_for(gap())) != -1 ||
        detail::certified_sign(f, hi, eval_width_for(gap())) != +1) {
        throw NoSignChange("bisect_root: no certified sign change on the bracket");
    }

    // A dyadic root sits on the same midpoint at every level of the
    // bisection; remember the one point that resisted certification so it is
    // not probed again and again.
    std::optional<Dyadic> known_ambiguous;
    auto sign_at = [&](const Dyadic& at, const Dyadic& ew) {
        if (known_ambiguous && *known_ambiguous == at) return 0;
        int s = detail::certified_sign(f, at, ew);
        if (s == 0) known_ambiguous = at;
        return s;
    };

    while (gap() > target_width) {
        Prec mp = std::max(lo.precision(), hi.precision()) + 2;
        Dyadic two = Dyadic::of_long(2);
        Dyadic m1 = Dyadic::div(Dyadic::add(lo, hi, mp, MPFR_RNDN), two, mp, MPFR_RNDN);
        Dyadic ew = eval_width_for(gap());

        int s1 = sign_at(m1, ew);
        if (s1 < 0) {
            lo = m1;
            continue;
        }
        if (s1 > 0) {
            hi = m1;
            continue;
        }

        Dyadic m2 = Dyadic::div(Dyadic::add(lo, m1, mp + 1, MPFR_RNDN), two, mp + 1, MPFR_RNDN);
        Dyadic m3 = Dyadic::div(Dyadic::add(m1, hi, mp + 1, MPFR_RNDN), two, mp + 1, MPFR_RNDN);
        int s2 = sign_at(m2, ew);
        if (s2 > 0) {
            hi = m2;
            continue;
        }
        int s3 = sign_at(m3, ew);
        if (s3 < 0) {
            lo = m3;
            continue;
        }
        bool moved = false;
        if (s2 < 0) {
            lo = m2;
            moved = true;
        }
        if (s3 > 0) {
            hi = m3;
            moved = true;
        }
        if (!moved) {
            throw PrecisionExhausted("bisect_root: no certifiable sign near the root");
        }
    }
    return Interval(lo, hi);
}

}  // namespace subtile
